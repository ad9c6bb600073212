// Copyright 2026 The stabmagic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STABMAGIC_CLI_H
#define STABMAGIC_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace stabmagic {

constexpr const char *kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,  // I/O and other runtime errors
    kExitUsage = 2,    // bad arguments, unparseable input, unsupported sizes
    kExitSolver = 3,   // LP failure or a quantifier refused by policy
    kExitVerify = 4,   // a facet did not verify
};

/// Runs the tool on args (without the program name), writing results to out
/// and diagnostics to err. Returns the exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace stabmagic

#endif

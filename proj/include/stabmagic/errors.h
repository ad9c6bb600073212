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

#ifndef STABMAGIC_ERRORS_H
#define STABMAGIC_ERRORS_H

#include <stdexcept>
#include <string>

namespace stabmagic {

/// Operands disagree on qubit count or vector length.
class DimensionError : public std::invalid_argument {
   public:
    explicit DimensionError(const std::string &msg) : std::invalid_argument(msg) {
    }
};

/// Requested size exceeds what the library supports (or what the caller unlocked).
class CapacityError : public std::length_error {
   public:
    explicit CapacityError(const std::string &msg) : std::length_error(msg) {
    }
};

/// Input violates a documented precondition (unnormalized state, mu outside [0,1], ...).
class ValidationError : public std::invalid_argument {
   public:
    explicit ValidationError(const std::string &msg) : std::invalid_argument(msg) {
    }
};

/// Text input (state expressions, facet files, caches) could not be parsed.
class ParseError : public std::invalid_argument {
   public:
    explicit ParseError(const std::string &msg) : std::invalid_argument(msg) {
    }
};

/// The LP engine failed to produce a trustworthy answer.
class SolverError : public std::runtime_error {
   public:
    explicit SolverError(const std::string &msg) : std::runtime_error(msg) {
    }
};

/// A computation that is refused by policy (e.g. robustness at five qubits).
class PolicyError : public std::runtime_error {
   public:
    explicit PolicyError(const std::string &msg) : std::runtime_error(msg) {
    }
};

/// An internal cross-check failed. Never caught inside the library.
class ConsistencyError : public std::logic_error {
   public:
    explicit ConsistencyError(const std::string &msg) : std::logic_error(msg) {
    }
};

}  // namespace stabmagic

#endif

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

#ifndef STABMAGIC_LP_H
#define STABMAGIC_LP_H

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stabmagic/errors.h"

namespace stabmagic {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kMaximize, kMinimize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpConstraint {
    std::vector<double> coeffs;  // dense, one per variable
    Relation relation = Relation::kLessEqual;
    double rhs = 0;
};

struct LpProblem {
    Sense sense = Sense::kMaximize;
    std::vector<double> objective;
    std::vector<double> lower;  // -kInf allowed
    std::vector<double> upper;  // +kInf allowed
    std::vector<LpConstraint> constraints;

    /// n variables with the given bounds and zero objective.
    static LpProblem with_variables(size_t n, double lower = 0.0, double upper = kInf);

    size_t num_vars() const {
        return objective.size();
    }
    /// Throws DimensionError or ValidationError on inconsistent sizes, lower >
    /// upper or non-finite right-hand sides.
    void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    double objective_value = 0;
    std::vector<double> x;
    /// Explicit constraints holding with equality at x (within tolerance).
    std::vector<size_t> active_constraint_ids;
    size_t iterations = 0;
    /// Row generation only: oracle calls and rows taken from the oracle.
    size_t rounds = 0;
    size_t generated_rows = 0;
};

struct SolverOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    size_t max_iterations = 1'000'000;
    /// Pivots without objective progress before switching to Bland's rule.
    size_t degenerate_streak = 50;
};

/// Dense two-phase tableau simplex. Deterministic; Dantzig pricing with a
/// Bland's-rule fallback once a degenerate streak is detected. Optimal
/// solutions are re-checked against every constraint and bound, and a
/// violation above feasibility_tol throws SolverError.
LpSolution solve(const LpProblem &problem, const SolverOptions &options = {});

/// One lazily generated row, sum_k coeff_k x_{index_k} <= rhs.
struct OracleRow {
    std::vector<std::pair<uint32_t, double>> entries;
    double rhs = 0;
    /// Stable identity of the row within the implicit family (used for
    /// deduplication and Bland tie-breaking).
    uint64_t key = 0;
};

/// Given the current point, returns violated rows of the implicit family,
/// most violated first, or an empty list when the point satisfies them all
/// within tol. Must be deterministic for a fixed point.
using RowOracle = std::function<std::vector<OracleRow>(std::span<const double> x, double tol)>;

struct RowGenerationOptions {
    double tol = 1e-9;
    size_t max_rounds = 10'000;
    /// Magnitude of the artificial box placed on infinite bounds; an optimum
    /// pressing on it is reported as unbounded.
    double artificial_bound = 1e6;
    /// Pivots between full refactorizations of the basis.
    size_t refactor_interval = 100;
};

/// Thrown when max_rounds runs out; carries the last dual bound on the optimum.
class RowGenerationError : public SolverError {
   public:
    RowGenerationError(const std::string &what, double best_bound) : SolverError(what), best_bound_(best_bound) {
    }
    double best_bound() const {
        return best_bound_;
    }

   private:
    double best_bound_;
};

/// Row generation for problems whose constraints are mostly implicit. The
/// explicit constraints of `problem` are kept; every other row comes from the
/// oracle. Internally a revised dual simplex: each basis is a vertex cut out
/// by n active rows, so an oracle row violated at that vertex is exactly an
/// improving column of the dual, and many rows can be pivoted in per oracle
/// call. The objective values reported between rounds are upper bounds (for
/// maximization) on the optimum.
LpSolution solve_with_rows(const LpProblem &problem, const RowOracle &oracle, const RowGenerationOptions &options = {});

}  // namespace stabmagic

#endif

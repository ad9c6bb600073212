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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "stabmagic/lp.h"

namespace stabmagic {

LpProblem LpProblem::with_variables(size_t n, double lower, double upper) {
    LpProblem p;
    p.objective.assign(n, 0.0);
    p.lower.assign(n, lower);
    p.upper.assign(n, upper);
    return p;
}

void LpProblem::validate() const {
    const size_t n = num_vars();
    if (lower.size() != n || upper.size() != n) {
        throw DimensionError(fmt::format("{} variables but {} lower / {} upper bounds", n, lower.size(), upper.size()));
    }
    for (size_t j = 0; j < n; j++) {
        if (!std::isfinite(objective[j])) {
            throw ValidationError(fmt::format("objective coefficient {} is not finite", j));
        }
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] || lower[j] == kInf ||
            upper[j] == -kInf) {
            throw ValidationError(fmt::format("variable {} has empty bounds [{}, {}]", j, lower[j], upper[j]));
        }
    }
    for (size_t i = 0; i < constraints.size(); i++) {
        const auto &c = constraints[i];
        if (c.coeffs.size() != n) {
            throw DimensionError(fmt::format("constraint {} has {} coefficients for {} variables", i, c.coeffs.size(), n));
        }
        if (!std::isfinite(c.rhs)) {
            throw ValidationError(fmt::format("constraint {} has a non-finite right-hand side", i));
        }
        for (double a : c.coeffs) {
            if (!std::isfinite(a)) {
                throw ValidationError(fmt::format("constraint {} has a non-finite coefficient", i));
            }
        }
    }
}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::kOptimal:
            return "optimal";
        case LpStatus::kInfeasible:
            return "infeasible";
        case LpStatus::kUnbounded:
            return "unbounded";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;

// x_j = offset + scale * column (plus minus_column for free variables).
struct VarMap {
    double offset = 0;
    double scale = 1;
    int column = -1;
    int minus_column = -1;
};

class Tableau {
   public:
    Tableau(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {
    }

    double &at(size_t r, size_t c) {
        return data_[r * (cols_ + 1) + c];
    }
    double &rhs(size_t r) {
        return at(r, cols_);
    }
    double &cost(size_t c) {
        return at(rows_, c);
    }
    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    std::vector<int> &basis() {
        return basis_;
    }

    void pivot(size_t r, size_t c) {
        const size_t w = cols_ + 1;
        double *prow = &data_[r * w];
        double inv = 1.0 / prow[c];
        for (size_t k = 0; k < w; k++) {
            prow[k] *= inv;
        }
        prow[c] = 1.0;
        for (size_t i = 0; i <= rows_; i++) {
            if (i == r) {
                continue;
            }
            double *row = &data_[i * w];
            double f = row[c];
            if (f == 0.0) {
                continue;
            }
            for (size_t k = 0; k < w; k++) {
                row[k] -= f * prow[k];
            }
            row[c] = 0.0;
        }
        basis_[r] = static_cast<int>(c);
    }

    /// Loads a cost vector into the bottom row and prices out the basis.
    void set_cost(const std::vector<double> &c) {
        for (size_t k = 0; k <= cols_; k++) {
            cost(k) = k < cols_ ? c[k] : 0.0;
        }
        for (size_t i = 0; i < rows_; i++) {
            int b = basis_[i];
            double f = cost(b);
            if (f == 0.0) {
                continue;
            }
            for (size_t k = 0; k <= cols_; k++) {
                cost(k) -= f * at(i, k);
            }
        }
    }

    enum class Outcome { kOptimal, kUnbounded };

    /// Minimizes the loaded cost over columns with allowed[c] set.
    Outcome run(const std::vector<bool> &allowed, const SolverOptions &opt, size_t &iterations) {
        size_t streak = 0;
        while (true) {
            if (iterations++ > opt.max_iterations) {
                throw SolverError(fmt::format("simplex exceeded {} iterations", opt.max_iterations));
            }
            bool bland = streak >= opt.degenerate_streak;
            int enter = -1;
            double best = -opt.optimality_tol;
            for (size_t c = 0; c < cols_; c++) {
                if (!allowed[c]) {
                    continue;
                }
                double d = cost(c);
                if (d < best) {
                    enter = static_cast<int>(c);
                    if (bland) {
                        break;
                    }
                    best = d;
                }
            }
            if (enter < 0) {
                return Outcome::kOptimal;
            }
            int leave = -1;
            double ratio = kInf;
            for (size_t r = 0; r < rows_; r++) {
                double a = at(r, enter);
                if (a <= kPivotTol) {
                    continue;
                }
                double q = std::max(0.0, rhs(r)) / a;
                if (leave < 0 || q < ratio - 1e-12) {
                    leave = static_cast<int>(r);
                    ratio = q;
                } else if (q <= ratio + 1e-12) {
                    bool better = bland ? basis_[r] < basis_[leave] : a > at(leave, enter);
                    if (better) {
                        leave = static_cast<int>(r);
                        ratio = std::min(ratio, q);
                    }
                }
            }
            if (leave < 0) {
                return Outcome::kUnbounded;
            }
            streak = ratio <= 1e-12 ? streak + 1 : 0;
            pivot(leave, enter);
        }
    }

   private:
    size_t rows_;
    size_t cols_;
    std::vector<double> data_;  // rows_ constraint rows plus the cost row, rhs in the last column
    std::vector<int> basis_;
};

}  // namespace

LpSolution solve(const LpProblem &problem, const SolverOptions &options) {
    problem.validate();
    const size_t n = problem.num_vars();

    // Shift or split variables so every column is nonnegative.
    std::vector<VarMap> vars(n);
    int ncols = 0;
    struct Row {
        std::vector<std::pair<int, double>> terms;
        Relation rel;
        double rhs;
    };
    std::vector<Row> rows;
    for (size_t j = 0; j < n; j++) {
        double l = problem.lower[j];
        double u = problem.upper[j];
        auto &v = vars[j];
        if (std::isfinite(l)) {
            v.offset = l;
            v.column = ncols++;
            if (std::isfinite(u)) {
                rows.push_back({{{v.column, 1.0}}, Relation::kLessEqual, u - l});
            }
        } else if (std::isfinite(u)) {
            v.offset = u;
            v.scale = -1;
            v.column = ncols++;
        } else {
            v.column = ncols++;
            v.minus_column = ncols++;
        }
    }
    for (const auto &c : problem.constraints) {
        Row r{{}, c.relation, c.rhs};
        for (size_t j = 0; j < n; j++) {
            double a = c.coeffs[j];
            if (a == 0.0) {
                continue;
            }
            r.rhs -= a * vars[j].offset;
            r.terms.push_back({vars[j].column, a * vars[j].scale});
            if (vars[j].minus_column >= 0) {
                r.terms.push_back({vars[j].minus_column, -a});
            }
        }
        rows.push_back(std::move(r));
    }
    for (auto &r : rows) {
        if (r.rhs < 0) {
            r.rhs = -r.rhs;
            for (auto &t : r.terms) {
                t.second = -t.second;
            }
            if (r.rel == Relation::kLessEqual) {
                r.rel = Relation::kGreaterEqual;
            } else if (r.rel == Relation::kGreaterEqual) {
                r.rel = Relation::kLessEqual;
            }
        }
    }

    // Slack/surplus and artificial columns.
    const size_t m = rows.size();
    size_t num_slack = 0;
    size_t num_art = 0;
    for (const auto &r : rows) {
        num_slack += r.rel != Relation::kEqual;
        num_art += r.rel != Relation::kLessEqual;
    }
    const size_t total = ncols + num_slack + num_art;
    const size_t art_begin = ncols + num_slack;
    Tableau t(m, total);
    size_t next_slack = ncols;
    size_t next_art = art_begin;
    for (size_t i = 0; i < m; i++) {
        for (auto [c, a] : rows[i].terms) {
            t.at(i, c) += a;
        }
        t.rhs(i) = rows[i].rhs;
        if (rows[i].rel == Relation::kLessEqual) {
            t.at(i, next_slack) = 1.0;
            t.basis()[i] = static_cast<int>(next_slack++);
        } else {
            if (rows[i].rel == Relation::kGreaterEqual) {
                t.at(i, next_slack++) = -1.0;
            }
            t.at(i, next_art) = 1.0;
            t.basis()[i] = static_cast<int>(next_art++);
        }
    }

    LpSolution sol;
    std::vector<bool> allowed(total, true);
    if (num_art > 0) {
        std::vector<double> phase1(total, 0.0);
        for (size_t c = art_begin; c < total; c++) {
            phase1[c] = 1.0;
        }
        t.set_cost(phase1);
        t.run(allowed, options, sol.iterations);
        double infeas = -t.rhs(m);
        double scale = 1.0;
        for (const auto &r : rows) {
            scale = std::max(scale, std::abs(r.rhs));
        }
        if (infeas > options.feasibility_tol * scale) {
            sol.status = LpStatus::kInfeasible;
            return sol;
        }
        // Pivot artificials out of the basis; rows where that is impossible are redundant.
        for (size_t i = 0; i < m; i++) {
            if (static_cast<size_t>(t.basis()[i]) < art_begin) {
                continue;
            }
            size_t best = total;
            double best_abs = kPivotTol;
            for (size_t c = 0; c < art_begin; c++) {
                if (std::abs(t.at(i, c)) > best_abs) {
                    best = c;
                    best_abs = std::abs(t.at(i, c));
                }
            }
            if (best < total) {
                t.pivot(i, best);
            }
        }
        for (size_t c = art_begin; c < total; c++) {
            allowed[c] = false;
        }
    }

    const double sense = problem.sense == Sense::kMaximize ? -1.0 : 1.0;
    std::vector<double> phase2(total, 0.0);
    for (size_t j = 0; j < n; j++) {
        phase2[vars[j].column] += sense * problem.objective[j] * vars[j].scale;
        if (vars[j].minus_column >= 0) {
            phase2[vars[j].minus_column] -= sense * problem.objective[j];
        }
    }
    t.set_cost(phase2);
    if (t.run(allowed, options, sol.iterations) == Tableau::Outcome::kUnbounded) {
        sol.status = LpStatus::kUnbounded;
        return sol;
    }

    std::vector<double> col(total, 0.0);
    for (size_t i = 0; i < m; i++) {
        col[t.basis()[i]] = t.rhs(i);
    }
    sol.x.assign(n, 0.0);
    for (size_t j = 0; j < n; j++) {
        double x = vars[j].offset + vars[j].scale * col[vars[j].column];
        if (vars[j].minus_column >= 0) {
            x -= col[vars[j].minus_column];
        }
        sol.x[j] = x;
    }
    sol.status = LpStatus::kOptimal;
    sol.objective_value = 0;
    for (size_t j = 0; j < n; j++) {
        sol.objective_value += problem.objective[j] * sol.x[j];
    }

    // Re-check the original problem.
    for (size_t j = 0; j < n; j++) {
        double slack_tol = options.feasibility_tol * (1.0 + std::abs(sol.x[j]));
        if (sol.x[j] < problem.lower[j] - slack_tol || sol.x[j] > problem.upper[j] + slack_tol) {
            throw SolverError(fmt::format("simplex result violates the bounds of variable {}", j));
        }
    }
    for (size_t i = 0; i < problem.constraints.size(); i++) {
        const auto &c = problem.constraints[i];
        double lhs = 0;
        double mag = std::abs(c.rhs);
        for (size_t j = 0; j < n; j++) {
            lhs += c.coeffs[j] * sol.x[j];
            mag = std::max(mag, std::abs(c.coeffs[j] * sol.x[j]));
        }
        double tol = options.feasibility_tol * (1.0 + mag);
        double r = lhs - c.rhs;
        bool ok = c.relation == Relation::kLessEqual      ? r <= tol
                  : c.relation == Relation::kGreaterEqual ? r >= -tol
                                                          : std::abs(r) <= tol;
        if (!ok) {
            throw SolverError(fmt::format("simplex result violates constraint {} by {}", i, std::abs(r)));
        }
        if (std::abs(r) <= tol) {
            sol.active_constraint_ids.push_back(i);
        }
    }
    return sol;
}

}  // namespace stabmagic

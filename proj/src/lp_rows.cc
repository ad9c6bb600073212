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
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "stabmagic/lp.h"

namespace stabmagic {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PoolRow {
    std::vector<std::pair<uint32_t, double>> entries;
    double rhs = 0;
    uint64_t key = 0;  // global order: bound rows, explicit rows, then oracle rows
    bool artificial = false;
};

double dot(const PoolRow &row, std::span<const double> x) {
    double acc = 0;
    for (auto [k, a] : row.entries) {
        acc += a * x[k];
    }
    return acc;
}

// Revised dual simplex over a growing pool of <= rows. The basis is n rows
// whose intersection is the current vertex x; y >= 0 are their multipliers
// with G_B^T y = c, so the vertex is optimal once no row is violated.
class DualSimplex {
   public:
    DualSimplex(std::vector<double> c, std::vector<PoolRow> bound_rows, const RowGenerationOptions &opt)
        : n_(c.size()), c_(std::move(c)), pool_(std::move(bound_rows)), opt_(opt) {
        basis_.resize(n_);
        binv_ = RowMajor::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
        x_.assign(n_, 0.0);
        y_.assign(n_, 0.0);
        // Row 2k is x_k <= u_k and 2k+1 is -x_k <= -l_k.
        for (size_t k = 0; k < n_; k++) {
            bool up = c_[k] >= 0;
            basis_[k] = 2 * k + (up ? 0 : 1);
            double s = up ? 1.0 : -1.0;
            binv_(k, k) = s;
            x_[k] = s * pool_[basis_[k]].rhs;
            y_[k] = s * c_[k];
        }
        in_basis_.assign(pool_.size(), false);
        for (size_t r : basis_) {
            in_basis_[r] = true;
        }
    }

    size_t add_row(PoolRow row) {
        pool_.push_back(std::move(row));
        in_basis_.push_back(false);
        return pool_.size() - 1;
    }
    const PoolRow &row(size_t r) const {
        return pool_[r];
    }
    bool in_basis(size_t r) const {
        return in_basis_[r];
    }
    std::span<const double> x() const {
        return x_;
    }
    double objective() const {
        double acc = 0;
        for (size_t k = 0; k < n_; k++) {
            acc += c_[k] * x_[k];
        }
        return acc;
    }
    double violation(size_t r) const {
        return dot(pool_[r], x_) - pool_[r].rhs;
    }
    size_t pivots() const {
        return pivots_;
    }
    bool bland() const {
        return streak_ >= kBlandStreak;
    }

    /// Pivots row r into the basis. Returns false when the dual ratio test
    /// finds no leaving row, i.e. the primal problem is infeasible.
    bool pivot_in(size_t r) {
        const PoolRow &g = pool_[r];
        Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
        for (auto [k, a] : g.entries) {
            d += a * binv_.row(k).transpose();
        }
        double dmax = d.cwiseAbs().maxCoeff();
        double piv_tol = 1e-9 * std::max(1.0, dmax);
        int leave = -1;
        double theta = kInf;
        const bool use_bland = bland();
        for (size_t i = 0; i < n_; i++) {
            double di = d[static_cast<Eigen::Index>(i)];
            if (di <= piv_tol) {
                continue;
            }
            double q = std::max(0.0, y_[i]) / di;
            if (leave < 0 || q < theta - 1e-12) {
                leave = static_cast<int>(i);
                theta = q;
            } else if (q <= theta + 1e-12) {
                bool better = use_bland ? pool_[basis_[i]].key < pool_[basis_[leave]].key
                                        : di > d[leave];
                if (better) {
                    leave = static_cast<int>(i);
                    theta = std::min(theta, q);
                }
            }
        }
        if (leave < 0) {
            return false;
        }
        const auto li = static_cast<Eigen::Index>(leave);
        double dl = d[li];
        double viol = violation(r);
        streak_ = theta * viol <= 1e-12 ? streak_ + 1 : 0;

        Eigen::VectorXd col = binv_.col(li);
        double alpha = -viol / dl;
        for (size_t k = 0; k < n_; k++) {
            x_[k] += alpha * col[static_cast<Eigen::Index>(k)];
        }
        for (size_t i = 0; i < n_; i++) {
            y_[i] = std::max(0.0, y_[i] - theta * d[static_cast<Eigen::Index>(i)]);
        }
        y_[leave] = theta;
        // Sherman-Morrison for replacing row `leave` of G_B by g.
        d[li] -= 1.0;
        binv_.noalias() -= (col / dl) * d.transpose();

        in_basis_[basis_[leave]] = false;
        basis_[leave] = r;
        in_basis_[r] = true;
        if (++pivots_ % opt_.refactor_interval == 0) {
            refactor();
        }
        return true;
    }

    void refactor() {
        const auto n = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXd gb = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd h(n);
        for (Eigen::Index i = 0; i < n; i++) {
            const PoolRow &g = pool_[basis_[i]];
            for (auto [k, a] : g.entries) {
                gb(i, k) = a;
            }
            h[i] = g.rhs;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(gb);
        binv_ = lu.inverse();
        // Solves rather than products with the inverse keep the residual of
        // the active rows near machine precision on ill-conditioned bases.
        Eigen::VectorXd x = lu.solve(h);
        Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(c_.data(), n);
        Eigen::VectorXd y = lu.transpose().solve(c);
        for (Eigen::Index k = 0; k < n; k++) {
            x_[k] = x[k];
            y_[k] = std::max(0.0, y[k]);
        }
    }

    /// True when the optimum leans on an artificial bound row.
    bool uses_artificial_bound() const {
        for (size_t i = 0; i < n_; i++) {
            if (pool_[basis_[i]].artificial && y_[i] > opt_.tol) {
                return true;
            }
        }
        return false;
    }

   private:
    static constexpr size_t kBlandStreak = 50;

    size_t n_;
    std::vector<double> c_;
    std::vector<PoolRow> pool_;
    const RowGenerationOptions &opt_;
    std::vector<size_t> basis_;
    std::vector<bool> in_basis_;
    RowMajor binv_;
    std::vector<double> x_;
    std::vector<double> y_;
    size_t pivots_ = 0;
    size_t streak_ = 0;
};

}  // namespace

LpSolution solve_with_rows(const LpProblem &problem, const RowOracle &oracle, const RowGenerationOptions &options) {
    problem.validate();
    const size_t n = problem.num_vars();
    const double sense = problem.sense == Sense::kMaximize ? 1.0 : -1.0;
    std::vector<double> c(n);
    for (size_t k = 0; k < n; k++) {
        c[k] = sense * problem.objective[k];
    }

    std::vector<PoolRow> bounds;
    for (size_t k = 0; k < n; k++) {
        auto kk = static_cast<uint32_t>(k);
        bool up_art = !std::isfinite(problem.upper[k]);
        bool lo_art = !std::isfinite(problem.lower[k]);
        bounds.push_back({{{kk, 1.0}}, up_art ? options.artificial_bound : problem.upper[k], 2 * k, up_art});
        bounds.push_back({{{kk, -1.0}}, lo_art ? options.artificial_bound : -problem.lower[k], 2 * k + 1, lo_art});
    }
    DualSimplex dual(std::move(c), std::move(bounds), options);

    // Explicit constraints join the pool up front as <= rows.
    uint64_t next_key = 2 * n;
    std::vector<size_t> explicit_rows;
    std::vector<size_t> explicit_owner;
    for (size_t i = 0; i < problem.constraints.size(); i++) {
        const auto &con = problem.constraints[i];
        std::vector<std::pair<uint32_t, double>> entries;
        for (size_t k = 0; k < n; k++) {
            if (con.coeffs[k] != 0.0) {
                entries.push_back({static_cast<uint32_t>(k), con.coeffs[k]});
            }
        }
        auto push = [&](double s) {
            PoolRow row{entries, s * con.rhs, next_key++, false};
            for (auto &e : row.entries) {
                e.second *= s;
            }
            explicit_rows.push_back(dual.add_row(std::move(row)));
            explicit_owner.push_back(i);
        };
        if (con.relation != Relation::kGreaterEqual) {
            push(1.0);
        }
        if (con.relation != Relation::kLessEqual) {
            push(-1.0);
        }
    }
    // Rows rescanned before every oracle call: cheap next to a full scan.
    // Bound rows that left the basis can become violated again.
    std::vector<size_t> pool_rows(2 * n);
    std::iota(pool_rows.begin(), pool_rows.end(), size_t{0});
    pool_rows.insert(pool_rows.end(), explicit_rows.begin(), explicit_rows.end());
    const uint64_t oracle_key_base = next_key;
    std::map<uint64_t, size_t> oracle_rows;

    LpSolution sol;
    auto infeasible = [&]() {
        sol.status = LpStatus::kInfeasible;
        sol.x.assign(dual.x().begin(), dual.x().end());
        sol.iterations = dual.pivots();
        return sol;
    };

    bool fresh = false;  // no pivots since the last refactorization
    size_t stale_rounds = 0;
    while (true) {
        // Rows already in the pool first.
        bool pivoted = false;
        while (true) {
            // Most violated row; the violated row with the lowest key while a
            // degenerate streak lasts, which rules out cycling.
            size_t worst = SIZE_MAX;
            double worst_v = options.tol;
            const bool bland = dual.bland();
            for (size_t r : pool_rows) {
                if (dual.in_basis(r)) {
                    continue;
                }
                double v = dual.violation(r);
                if (v <= options.tol) {
                    continue;
                }
                bool better = bland ? worst == SIZE_MAX || dual.row(r).key < dual.row(worst).key : v > worst_v;
                if (better) {
                    worst = r;
                    worst_v = v;
                }
            }
            if (worst == SIZE_MAX) {
                break;
            }
            if (!dual.pivot_in(worst)) {
                return infeasible();
            }
            pivoted = true;
        }

        std::vector<OracleRow> batch = oracle(dual.x(), options.tol);
        if (batch.empty()) {
            if (pivoted) {
                fresh = false;
                continue;
            }
            if (fresh) {
                break;
            }
            // Confirm optimality on a freshly factorized basis.
            dual.refactor();
            fresh = true;
            continue;
        }
        fresh = false;
        if (++sol.rounds > options.max_rounds) {
            throw RowGenerationError(
                fmt::format("row generation did not converge in {} rounds", options.max_rounds),
                sense * dual.objective());
        }
        std::vector<size_t> candidates;
        for (auto &r : batch) {
            uint64_t key = oracle_key_base + r.key;
            auto it = oracle_rows.find(key);
            if (it == oracle_rows.end()) {
                size_t id = dual.add_row(PoolRow{std::move(r.entries), r.rhs, key, false});
                it = oracle_rows.emplace(key, id).first;
                pool_rows.push_back(id);
                sol.generated_rows++;
            }
            candidates.push_back(it->second);
        }
        if (dual.bland()) {
            std::sort(candidates.begin(), candidates.end(),
                      [&](size_t a, size_t b) { return dual.row(a).key < dual.row(b).key; });
        }
        size_t done = 0;
        for (size_t r : candidates) {
            if (dual.in_basis(r) || dual.violation(r) <= 0.5 * options.tol) {
                continue;
            }
            if (!dual.pivot_in(r)) {
                return infeasible();
            }
            done++;
        }
        if (done == 0) {
            // The oracle reported rows the pool already satisfies (or active
            // rows, off by rounding). Ask again on a fresh factorization
            // before giving up.
            if (stale_rounds++ > 0) {
                throw SolverError("row oracle keeps returning rows that are not violated");
            }
            dual.refactor();
        } else {
            stale_rounds = 0;
        }
    }

    sol.x.assign(dual.x().begin(), dual.x().end());
    sol.iterations = dual.pivots();
    if (dual.uses_artificial_bound()) {
        sol.status = LpStatus::kUnbounded;
        return sol;
    }
    sol.status = LpStatus::kOptimal;
    sol.objective_value = 0;
    for (size_t k = 0; k < n; k++) {
        sol.objective_value += problem.objective[k] * sol.x[k];
    }
    for (size_t i = 0; i < explicit_rows.size(); i++) {
        if (std::abs(dual.violation(explicit_rows[i])) <= options.tol) {
            sol.active_constraint_ids.push_back(explicit_owner[i]);
        }
    }
    std::sort(sol.active_constraint_ids.begin(), sol.active_constraint_ids.end());
    sol.active_constraint_ids.erase(std::unique(sol.active_constraint_ids.begin(), sol.active_constraint_ids.end()),
                                    sol.active_constraint_ids.end());
    return sol;
}

}  // namespace stabmagic

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

#include "stabmagic/lp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "stabmagic/stabilizers.h"
#include "stabmagic/states.h"

using namespace stabmagic;

namespace {

LpConstraint row(std::vector<double> coeffs, Relation rel, double rhs) {
    return LpConstraint{std::move(coeffs), rel, rhs};
}

/// Oracle over an explicit list of <= rows, most violated first.
RowOracle list_oracle(const std::vector<LpConstraint> &rows, size_t batch = 1) {
    return [rows, batch](std::span<const double> x, double tol) {
        std::vector<std::pair<double, size_t>> violated;
        for (size_t r = 0; r < rows.size(); r++) {
            double lhs = 0;
            for (size_t k = 0; k < x.size(); k++) {
                lhs += rows[r].coeffs[k] * x[k];
            }
            if (lhs > rows[r].rhs + tol) {
                violated.push_back({lhs - rows[r].rhs, r});
            }
        }
        std::stable_sort(violated.begin(), violated.end(), [](auto &a, auto &b) { return a.first > b.first; });
        std::vector<OracleRow> out;
        for (size_t i = 0; i < violated.size() && i < batch; i++) {
            OracleRow o;
            const auto &c = rows[violated[i].second];
            for (size_t k = 0; k < c.coeffs.size(); k++) {
                if (c.coeffs[k] != 0) {
                    o.entries.push_back({static_cast<uint32_t>(k), c.coeffs[k]});
                }
            }
            o.rhs = c.rhs;
            o.key = violated[i].second;
            out.push_back(std::move(o));
        }
        return out;
    };
}

std::vector<double> dense(const StabilizerVector &v, bool drop_identity) {
    auto d = v.dense();
    if (drop_identity) {
        d.erase(d.begin());
    }
    return d;
}

PauliVector t_state() {
    const double r = 1 / std::sqrt(2.0);
    return PauliVector(1, pure_state_expectations(1, Amplitudes{r, std::polar(r, std::numbers::pi / 4)}));
}

}  // namespace

TEST(lp, trivial_problems) {
    auto p = LpProblem::with_variables(1);
    p.objective = {1};
    p.constraints.push_back(row({1}, Relation::kLessEqual, 1));
    auto s = solve(p);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, 1, 1e-12);
    EXPECT_EQ(s.active_constraint_ids, (std::vector<size_t>{0}));

    auto q = LpProblem::with_variables(2);
    q.objective = {1, 1};
    q.constraints.push_back(row({1, 1}, Relation::kLessEqual, 1));
    auto t = solve(q);
    ASSERT_EQ(t.status, LpStatus::kOptimal);
    EXPECT_NEAR(t.objective_value, 1, 1e-12);
    EXPECT_NEAR(t.x[0] + t.x[1], 1, 1e-12);
}

TEST(lp, relations_bounds_and_minimization) {
    // min 2x + 3y s.t. x + y >= 4, x - y = 1, 0 <= x <= 10, y free.
    auto p = LpProblem::with_variables(2);
    p.sense = Sense::kMinimize;
    p.objective = {2, 3};
    p.lower = {0, -kInf};
    p.upper = {10, kInf};
    p.constraints.push_back(row({1, 1}, Relation::kGreaterEqual, 4));
    p.constraints.push_back(row({1, -1}, Relation::kEqual, 1));
    auto s = solve(p);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.x[0], 2.5, 1e-10);
    EXPECT_NEAR(s.x[1], 1.5, 1e-10);
    EXPECT_NEAR(s.objective_value, 9.5, 1e-10);

    // Negative lower bounds.
    auto n = LpProblem::with_variables(1, -3, -1);
    n.sense = Sense::kMinimize;
    n.objective = {1};
    auto ns = solve(n);
    ASSERT_EQ(ns.status, LpStatus::kOptimal);
    EXPECT_NEAR(ns.objective_value, -3, 1e-12);
}

TEST(lp, infeasible_and_unbounded) {
    auto p = LpProblem::with_variables(1);
    p.objective = {1};
    p.constraints.push_back(row({1}, Relation::kLessEqual, -1));
    EXPECT_EQ(solve(p).status, LpStatus::kInfeasible);

    auto q = LpProblem::with_variables(2);
    q.objective = {1, 0};
    q.constraints.push_back(row({0, 1}, Relation::kLessEqual, 1));
    EXPECT_EQ(solve(q).status, LpStatus::kUnbounded);
}

TEST(lp, validation) {
    auto p = LpProblem::with_variables(2);
    p.constraints.push_back(row({1}, Relation::kLessEqual, 1));
    EXPECT_THROW(solve(p), DimensionError);
    auto q = LpProblem::with_variables(1);
    q.constraints.push_back(row({1}, Relation::kLessEqual, kInf));
    EXPECT_THROW(solve(q), ValidationError);
    auto r = LpProblem::with_variables(1, 2, 1);
    EXPECT_THROW(solve(r), ValidationError);
}

TEST(lp, degenerate_problem_terminates) {
    // Classic cycling example for Dantzig pricing without anti-cycling.
    auto p = LpProblem::with_variables(4);
    p.objective = {10, -57, -9, -24};
    p.constraints.push_back(row({0.5, -5.5, -2.5, 9}, Relation::kLessEqual, 0));
    p.constraints.push_back(row({0.5, -1.5, -0.5, 1}, Relation::kLessEqual, 0));
    p.constraints.push_back(row({1, 0, 0, 0}, Relation::kLessEqual, 1));
    auto s = solve(p);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, 1, 1e-9);
}

TEST(lp, random_two_dimensional_against_vertices) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 200; trial++) {
        auto p = LpProblem::with_variables(2, -5, 5);
        p.objective = {u(rng), u(rng)};
        for (int c = 0; c < 6; c++) {
            p.constraints.push_back(row({u(rng), u(rng)}, Relation::kLessEqual, 1 + u(rng) * 0.5 + 0.5));
        }
        // Brute force over pairwise intersections of all lines, bounds included.
        std::vector<std::pair<std::array<double, 2>, double>> lines;
        for (const auto &c : p.constraints) {
            lines.push_back({{c.coeffs[0], c.coeffs[1]}, c.rhs});
        }
        lines.push_back({{1, 0}, 5});
        lines.push_back({{-1, 0}, 5});
        lines.push_back({{0, 1}, 5});
        lines.push_back({{0, -1}, 5});
        double best = -kInf;
        for (size_t i = 0; i < lines.size(); i++) {
            for (size_t j = i + 1; j < lines.size(); j++) {
                auto [a, b] = lines[i];
                auto [c, d] = lines[j];
                double det = a[0] * c[1] - a[1] * c[0];
                if (std::abs(det) < 1e-12) {
                    continue;
                }
                double x = (b * c[1] - a[1] * d) / det;
                double y = (a[0] * d - b * c[0]) / det;
                bool ok = true;
                for (const auto &[n, r] : lines) {
                    ok = ok && n[0] * x + n[1] * y <= r + 1e-9;
                }
                if (ok) {
                    best = std::max(best, p.objective[0] * x + p.objective[1] * y);
                }
            }
        }
        auto s = solve(p);
        ASSERT_EQ(s.status, LpStatus::kOptimal);
        EXPECT_NEAR(s.objective_value, best, 1e-8);
        auto bare = LpProblem::with_variables(2, -5, 5);
        bare.objective = p.objective;
        auto lazy = solve_with_rows(bare, list_oracle(p.constraints));
        ASSERT_EQ(lazy.status, LpStatus::kOptimal);
        EXPECT_NEAR(lazy.objective_value, best, 1e-8);
    }
}

TEST(lp, t_state_rom_two_formulations) {
    auto stabs = enumerate_stabilizers(1);
    auto v = t_state();
    const size_t m = stabs.size();

    // Primal: min sum (x+ + x-) with sum (x+ - x-) S_i = v.
    auto primal = LpProblem::with_variables(2 * m);
    primal.sense = Sense::kMinimize;
    primal.objective.assign(2 * m, 1.0);
    for (size_t k = 0; k < 4; k++) {
        std::vector<double> coeffs(2 * m);
        for (size_t i = 0; i < m; i++) {
            double s = stabs.vector(i).dense()[k];
            coeffs[i] = s;
            coeffs[m + i] = -s;
        }
        primal.constraints.push_back(row(coeffs, Relation::kEqual, v[k]));
    }
    auto ps = solve(primal);
    ASSERT_EQ(ps.status, LpStatus::kOptimal);
    EXPECT_NEAR(ps.objective_value, std::sqrt(2.0), 1e-7);

    // Dual: max y . v with |y . S_i| <= 1.
    auto dual = LpProblem::with_variables(4, -kInf, kInf);
    dual.objective = v.values;
    for (size_t i = 0; i < m; i++) {
        auto s = dense(stabs.vector(i), false);
        dual.constraints.push_back(row(s, Relation::kLessEqual, 1));
        for (auto &x : s) {
            x = -x;
        }
        dual.constraints.push_back(row(s, Relation::kLessEqual, 1));
    }
    auto ds = solve(dual);
    ASSERT_EQ(ds.status, LpStatus::kOptimal);
    EXPECT_NEAR(ds.objective_value, std::sqrt(2.0), 1e-7);
}

TEST(lp, row_generation_without_hidden_rows_equals_solve) {
    auto p = LpProblem::with_variables(3, 0, 4);
    p.objective = {1, 2, -1};
    p.constraints.push_back(row({1, 1, 1}, Relation::kLessEqual, 5));
    p.constraints.push_back(row({1, -1, 0}, Relation::kGreaterEqual, -1));
    auto direct = solve(p);
    auto lazy = solve_with_rows(p, [](std::span<const double>, double) { return std::vector<OracleRow>{}; });
    ASSERT_EQ(lazy.status, LpStatus::kOptimal);
    EXPECT_NEAR(lazy.objective_value, direct.objective_value, 1e-9);
    EXPECT_EQ(lazy.generated_rows, 0u);
}

TEST(lp, gauge_lp_one_qubit_lazy_vs_materialized) {
    auto stabs = enumerate_stabilizers(1);
    auto v = t_state();
    auto p = LpProblem::with_variables(3, -kInf, kInf);
    p.objective = {v[1], v[2], v[3]};
    std::vector<LpConstraint> rows;
    for (size_t i = 0; i < stabs.size(); i++) {
        rows.push_back(row(dense(stabs.vector(i), true), Relation::kLessEqual, 1));
    }
    auto materialized = p;
    materialized.constraints = rows;
    auto full = solve(materialized);
    auto lazy = solve_with_rows(p, list_oracle(rows));
    ASSERT_EQ(full.status, LpStatus::kOptimal);
    ASSERT_EQ(lazy.status, LpStatus::kOptimal);
    EXPECT_NEAR(full.objective_value, std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(lazy.objective_value, full.objective_value, 1e-9);
    EXPECT_GT(lazy.rounds, 0u);
}

TEST(lp, witness_lp_two_qubits_lazy_vs_materialized) {
    auto stabs = enumerate_stabilizers(2);
    auto v = PauliVector(2, pure_state_expectations(2, ghz_phase(2, std::numbers::pi / 4)));
    // Variables a_1..a_15 in [-1, 1] and t; rows a . (S_i' - v') + t <= 0.
    auto p = LpProblem::with_variables(16, -1, 1);
    p.lower[15] = -kInf;
    p.upper[15] = kInf;
    p.objective.assign(16, 0);
    p.objective[15] = 1;
    std::vector<LpConstraint> rows;
    for (size_t i = 0; i < stabs.size(); i++) {
        auto s = dense(stabs.vector(i), true);
        std::vector<double> c(16);
        for (size_t k = 0; k < 15; k++) {
            c[k] = s[k] - v[k + 1];
        }
        c[15] = 1;
        rows.push_back(row(c, Relation::kLessEqual, 0));
    }
    auto materialized = p;
    materialized.constraints = rows;
    auto full = solve(materialized);
    auto lazy = solve_with_rows(p, list_oracle(rows, 4));
    ASSERT_EQ(full.status, LpStatus::kOptimal);
    ASSERT_EQ(lazy.status, LpStatus::kOptimal);
    EXPECT_NEAR(lazy.objective_value, full.objective_value, 1e-9);
    EXPECT_GE(full.objective_value, 2 * std::sqrt(2.0) - 2 - 1e-9);
}

TEST(lp, row_generation_reports_unbounded) {
    auto p = LpProblem::with_variables(1, 0, kInf);
    p.objective = {1};
    auto s = solve_with_rows(p, [](std::span<const double>, double) { return std::vector<OracleRow>{}; });
    EXPECT_EQ(s.status, LpStatus::kUnbounded);
}

TEST(lp, row_generation_round_limit) {
    // Rows x <= 1 + 1/r arrive one per round, each barely violated.
    auto p = LpProblem::with_variables(1, 0, 10);
    p.objective = {1};
    size_t calls = 0;
    RowOracle oracle = [&calls](std::span<const double> x, double tol) {
        calls++;
        std::vector<OracleRow> out;
        double cap = 1 + 1.0 / static_cast<double>(calls);
        if (x[0] > cap + tol) {
            out.push_back({{{0, 1.0}}, cap, calls});
        }
        return out;
    };
    RowGenerationOptions options;
    options.max_rounds = 3;
    try {
        solve_with_rows(p, oracle, options);
        FAIL() << "expected RowGenerationError";
    } catch (const RowGenerationError &e) {
        EXPECT_GE(e.best_bound(), 1.0);
    }
}

TEST(lp, deterministic) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    auto p = LpProblem::with_variables(6, -1, 1);
    for (auto &c : p.objective) {
        c = u(rng);
    }
    for (int r = 0; r < 12; r++) {
        std::vector<double> c(6);
        for (auto &x : c) {
            x = u(rng);
        }
        p.constraints.push_back(row(c, Relation::kLessEqual, 0.3));
    }
    auto a = solve(p);
    auto b = solve(p);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.objective_value, b.objective_value);
    auto rows = p.constraints;
    auto bare = p;
    bare.constraints.clear();
    auto c = solve_with_rows(bare, list_oracle(rows, 3));
    auto d = solve_with_rows(bare, list_oracle(rows, 3));
    EXPECT_EQ(c.x, d.x);
    EXPECT_NEAR(c.objective_value, a.objective_value, 1e-9);
}

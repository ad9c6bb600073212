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

#include "stabmagic/magic.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "stabmagic/errors.h"
#include "stabmagic/states.h"
#include "test_util.h"

using namespace stabmagic;

namespace {

const StabilizerSet &stabs(int n) {
    static const StabilizerSet s1 = enumerate_stabilizers(1);
    static const StabilizerSet s2 = enumerate_stabilizers(2);
    static const StabilizerSet s3 = enumerate_stabilizers(3);
    switch (n) {
        case 1:
            return s1;
        case 2:
            return s2;
        default:
            return s3;
    }
}

const double kSqrt2 = std::sqrt(2.0);

PauliVector pure(int n, const Amplitudes &psi) {
    return PauliVector(n, pure_state_expectations(n, psi));
}

PauliVector t_state() {
    const double r = 1 / kSqrt2;
    return pure(1, {r, std::polar(r, std::numbers::pi / 4)});
}

PauliVector ghz(int n) {
    return pure(n, ghz_phase(n, std::numbers::pi / 4));
}

PauliVector mixed(int n) {
    return expectation_vector(DensityState::maximally_mixed(n));
}

PauliVector stabilizer_point(int n, size_t id) {
    return PauliVector(n, stabs(n).vector(id).dense());
}

double dot(const std::vector<int64_t> &a, const PauliVector &v) {
    double s = 0;
    for (size_t k = 1; k < a.size(); k++) {
        s += static_cast<double>(a[k]) * v[k];
    }
    return s;
}

}  // namespace

TEST(magic, stabilizer_norm_examples) {
    EXPECT_NEAR(stabilizer_norm(mixed(1)), 0.5, 1e-15);
    EXPECT_NEAR(stabilizer_norm(t_state()), (1 + kSqrt2) / 2, 1e-12);
    for (size_t id = 0; id < stabs(1).size(); id++) {
        EXPECT_NEAR(stabilizer_norm(stabilizer_point(1, id)), 1.0, 1e-15);
    }
}

TEST(magic, monotone_examples) {
    for (int n = 1; n <= 3; n++) {
        auto m = monotone_M_exact(mixed(n), stabs(n));
        EXPECT_NEAR(m.value, 1.0, 1e-12);
    }
    auto t = monotone_M_exact(t_state(), stabs(1));
    EXPECT_NEAR(t.value, kSqrt2, 1e-9);
    ASSERT_TRUE(t.witness_integer);
    EXPECT_EQ(t.witness.b, 1);
    EXPECT_EQ(t.witness.a[1], 1);
    EXPECT_EQ(t.witness.a[2], 1);
    EXPECT_LE(std::abs(t.witness.a[3]), 1);

    auto g = monotone_M_exact(ghz(2), stabs(2));
    EXPECT_GE(g.value, 2 * kSqrt2 - 1 - 1e-9);
    EXPECT_NEAR(g.value, 2 * kSqrt2 - 1, 1e-9);
    EXPECT_TRUE(g.witness.verified);
    EXPECT_EQ(bound(g.witness.a, stabs(2)).b, g.witness.b);
    EXPECT_NEAR(dot(g.witness.a, ghz(2)) / static_cast<double>(g.witness.b), g.value, 1e-9);

    auto g3 = monotone_M_exact(ghz(3), stabs(3));
    EXPECT_NEAR(g3.value, 4 * (kSqrt2 - 1) + 1, 1e-9);
}

TEST(magic, monotone_real_witness_is_feasible) {
    testutil::Rng rng(8);
    for (int trial = 0; trial < 10; trial++) {
        auto v = testutil::random_pure_vector(2, rng);
        auto m = monotone_M_exact(v, stabs(2));
        ASSERT_EQ(m.real_witness.size(), v.size());
        EXPECT_LE(bound_real(m.real_witness, stabs(2)).b, 1 + 1e-9);
        double obj = 0;
        for (size_t k = 1; k < v.size(); k++) {
            obj += m.real_witness[k] * v[k];
        }
        EXPECT_NEAR(obj, m.optimum, 1e-9);
    }
}

TEST(magic, symmetry_reduction_does_not_change_values) {
    testutil::Rng rng(9);
    std::vector<PauliVector> states = {ghz(3), pure(3, plus_phase_product(3, std::numbers::pi / 4)),
                                       pure(2, uniform_i(2)), werner_vector(ghz(2), 0.7)};
    for (int i = 0; i < 4; i++) {
        states.push_back(testutil::random_mixed_vector(2, rng));
    }
    MeasureOptions off;
    off.symmetry = false;
    for (const auto &v : states) {
        const auto &s = stabs(v.n_qubits);
        EXPECT_NEAR(monotone_M_exact(v, s).value, monotone_M_exact(v, s, off).value, 1e-8);
        EXPECT_NEAR(witness_W(v, s).value, witness_W(v, s, off).value, 1e-8);
        EXPECT_NEAR(robustness_dual(v, s), robustness_dual(v, s, off), 1e-8);
    }
}

TEST(magic, search_examples) {
    EXPECT_NEAR(monotone_M_search(mixed(2), stabs(2)).value, 1.0, 1e-12);
    auto t = monotone_M_search(t_state(), stabs(1));
    EXPECT_NEAR(t.value, kSqrt2, 1e-9);
    EXPECT_EQ(bound(t.hyperplane.a, stabs(1)).b, t.hyperplane.b);
    for (int n = 2; n <= 3; n++) {
        auto v = ghz(n);
        auto s = monotone_M_search(v, stabs(n));
        auto e = monotone_M_exact(v, stabs(n));
        EXPECT_LE(s.value, e.value + 1e-9);
        EXPECT_NEAR(s.value, e.value, 1e-9);
        EXPECT_EQ(bound(s.hyperplane.a, stabs(n)).b, s.hyperplane.b);
    }
}

TEST(magic, search_uses_library_seeds) {
    auto v = ghz(2);
    SearchOptions options;
    options.budget = 0;
    auto cold = monotone_M_search(v, stabs(2), options);
    options.library.push_back(Hyperplane::from_terms(
        2, {{"XX", 1}, {"YY", -1}, {"ZZ", -1}, {"XY", 1}, {"YX", 1}, {"ZI", 1}, {"IZ", 1}}, 1));
    auto warm = monotone_M_search(v, stabs(2), options);
    EXPECT_GE(warm.value, cold.value);
    EXPECT_GE(warm.value, 2 * kSqrt2 - 1 - 1e-9);
}

TEST(magic, witness_examples) {
    EXPECT_NEAR(witness_W(mixed(2), stabs(2)).value, 0.0, 1e-12);
    for (size_t id = 0; id < stabs(2).size(); id += 3) {
        EXPECT_NEAR(witness_W(stabilizer_point(2, id), stabs(2)).value, 0.0, 1e-9);
    }
    auto w = witness_W(ghz(2), stabs(2));
    EXPECT_GE(w.value, 2 * kSqrt2 - 2 - 1e-9);
    for (size_t k = 1; k < w.a.size(); k++) {
        EXPECT_LE(std::abs(w.a[k]), 1 + 1e-9);
    }
    double av = 0;
    for (size_t k = 1; k < w.a.size(); k++) {
        av += w.a[k] * ghz(2)[k];
    }
    EXPECT_NEAR(av - bound_real(w.a, stabs(2)).b, w.value, 1e-8);
}

TEST(magic, witness_y) {
    auto v = t_state();
    auto linf = witness_Y(v, stabs(1), YNorm::kLinf);
    EXPECT_NEAR(linf.value, witness_W(v, stabs(1)).value, 1e-9);
    EXPECT_FALSE(linf.lower_bound_only);
    auto l2 = witness_Y(v, stabs(1), YNorm::kL2);
    EXPECT_TRUE(l2.lower_bound_only);
    EXPECT_GE(l2.value, (kSqrt2 - 1) / std::sqrt(3.0) - 1e-9);
    EXPECT_NEAR(witness_Y(mixed(2), stabs(2), YNorm::kL2).value, 0.0, 1e-12);
    EXPECT_NEAR(witness_Y(mixed(2), stabs(2), YNorm::kLinf).value, 0.0, 1e-12);
    auto g = ghz(2);
    EXPECT_NEAR(witness_Y(g, stabs(2), YNorm::kLinf).value, witness_W(g, stabs(2)).value, 1e-9);
}

TEST(magic, robustness_examples) {
    for (size_t id = 0; id < stabs(2).size(); id += 7) {
        EXPECT_NEAR(robustness(stabilizer_point(2, id), stabs(2)).value, 1.0, 1e-9);
    }
    EXPECT_NEAR(robustness(mixed(2), stabs(2)).value, 1.0, 1e-9);
    auto t = robustness(t_state(), stabs(1));
    EXPECT_NEAR(t.value, kSqrt2, 1e-9);
    EXPECT_NEAR(t.value, monotone_M_exact(t_state(), stabs(1)).value, 1e-9);
    EXPECT_NEAR(robustness_dual(t_state(), stabs(1)), kSqrt2, 1e-9);
}

TEST(magic, rom_decomposition_reproduces_state) {
    testutil::Rng rng(12);
    for (int n = 1; n <= 2; n++) {
        for (int trial = 0; trial < 5; trial++) {
            auto v = testutil::random_mixed_vector(n, rng);
            auto r = robustness(v, stabs(n));
            std::vector<double> sum(v.size(), 0.0);
            double l1 = 0;
            for (const auto &[id, x] : r.decomposition.coefficients) {
                auto s = stabs(n).vector(id).dense();
                for (size_t k = 0; k < v.size(); k++) {
                    sum[k] += x * s[k];
                }
                l1 += std::abs(x);
            }
            for (size_t k = 0; k < v.size(); k++) {
                EXPECT_NEAR(sum[k], v[k], 1e-8);
            }
            EXPECT_NEAR(l1, r.decomposition.l1_norm, 1e-9);
            EXPECT_NEAR(r.value, r.decomposition.l1_norm, 1e-9);
            EXPECT_NEAR(r.value, robustness_dual(v, stabs(n)), 1e-7);
        }
    }
}

TEST(magic, rom_refused_at_five_qubits) {
    std::vector<double> v(num_paulis(5), 0.0);
    v[0] = 1;
    EXPECT_THROW(robustness(PauliVector(5, v), StabilizerSet{}), PolicyError);
}

TEST(magic, mismatched_sizes_rejected) {
    EXPECT_THROW(monotone_M_exact(ghz(2), stabs(1)), DimensionError);
    EXPECT_THROW(witness_W(t_state(), stabs(2)), DimensionError);
}

TEST(magic, full_report_at_mu_zero) {
    auto r = full_report("mu0", werner_vector(ghz(2), 0.0), stabs(2));
    EXPECT_NEAR(*r.M, 1.0, 1e-12);
    EXPECT_NEAR(*r.W, 0.0, 1e-12);
    EXPECT_LE(*r.st_norm, 1.0);
    EXPECT_NEAR(*r.rom, 1.0, 1e-9);
    EXPECT_FALSE(r.magic_detected());
    auto g = full_report("ghz", ghz(2), stabs(2));
    EXPECT_TRUE(g.magic_detected());
    EXPECT_TRUE(g.witness_hyperplane.has_value());
    EXPECT_FALSE(g.method_flags.empty());
}

TEST(magic, crossing_threshold_bisects) {
    auto mu = crossing_threshold([](double x) { return x - 0.4237; }, 0, 1, 0.01, 1e-9, 1e-7);
    ASSERT_TRUE(mu.has_value());
    EXPECT_NEAR(*mu, 0.4237, 1e-6);
    EXPECT_FALSE(crossing_threshold([](double) { return 0.0; }, 0, 1, 0.1).has_value());
    auto at_start = crossing_threshold([](double) { return 1.0; }, 0.2, 1, 0.1);
    ASSERT_TRUE(at_start.has_value());
    EXPECT_DOUBLE_EQ(*at_start, 0.2);
    EXPECT_THROW(crossing_threshold([](double) { return 0.0; }, 0, 1, 0), ValidationError);
}

TEST(magic, ghz_werner_thresholds_agree) {
    auto base = ghz(2);
    auto m_excess = [&](double mu) { return monotone_M_exact(werner_vector(base, mu), stabs(2)).value - 1; };
    auto w_excess = [&](double mu) { return witness_W(werner_vector(base, mu), stabs(2)).value; };
    auto st_excess = [&](double mu) { return stabilizer_norm(werner_vector(base, mu)) - 1; };
    auto m = crossing_threshold(m_excess, 0, 1, 0.01, 1e-9);
    auto w = crossing_threshold(w_excess, 0, 1, 0.01, 1e-9);
    auto st = crossing_threshold(st_excess, 0, 1, 0.01, 1e-9);
    ASSERT_TRUE(m && w && st);
    EXPECT_NEAR(*m, *w, 0.01);
    EXPECT_GE(*st, *m - 0.01);
    // The gauge is linear along the Werner line once above 1.
    EXPECT_NEAR(*m, 1 / (2 * kSqrt2 - 1), 1e-5);
}

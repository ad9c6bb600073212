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


#include "stabmagic/clifford.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "stabmagic/errors.h"
#include "test_util.h"

using namespace stabmagic;

namespace {

using Mat = Eigen::MatrixXcd;

Mat embed(int n, int site, const Mat &g) {
    Mat out = Mat::Identity(1, 1);
    for (int s = 0; s < n; s++) {
        Mat f = s == site ? g : Mat::Identity(2, 2);
        Mat next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); r++) {
            for (Eigen::Index c = 0; c < out.cols(); c++) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
            }
        }
        out = next;
    }
    return out;
}

Mat unitary(int n, const CliffordGate &g) {
    const std::complex<double> i1{0, 1};
    Mat u(2, 2);
    switch (g.kind) {
        case GateKind::H:
            u << 1, 1, 1, -1;
            return embed(n, g.q0, u / std::numbers::sqrt2);
        case GateKind::S:
            u << 1, 0, 0, i1;
            return embed(n, g.q0, u);
        case GateKind::Sdg:
            u << 1, 0, 0, -i1;
            return embed(n, g.q0, u);
        case GateKind::CX: {
            auto d = static_cast<Eigen::Index>(hilbert_dim(n));
            Mat m = Mat::Zero(d, d);
            for (uint32_t b = 0; b < d; b++) {
                uint32_t cbit = 1u << (n - 1 - g.q0);
                uint32_t tbit = 1u << (n - 1 - g.q1);
                m((b & cbit) ? b ^ tbit : b, b) = 1;
            }
            return m;
        }
    }
    return {};
}

}  // namespace

TEST(clifford, parse_and_print) {
    EXPECT_EQ(parse_gate("H0"), (CliffordGate{GateKind::H, 0}));
    EXPECT_EQ(parse_gate("Sdg2"), (CliffordGate{GateKind::Sdg, 2}));
    EXPECT_EQ(parse_gate("CX0,1"), (CliffordGate{GateKind::CX, 0, 1}));
    EXPECT_EQ(parse_gate("CX1,0").str(), "CX1,0");
    EXPECT_THROW(parse_gate("T0"), ParseError);
    EXPECT_THROW(parse_gate("CX0"), ParseError);
    EXPECT_THROW(check_gate({GateKind::CX, 1, 1}, 2), ValidationError);
    EXPECT_THROW(check_gate({GateKind::H, 2}, 2), ValidationError);
}

TEST(clifford, conjugation_matches_dense) {
    for (int n = 1; n <= 3; n++) {
        for (const auto &g : clifford_generators(n)) {
            for (const auto &gate : {g, inverse(g)}) {
                Mat u = unitary(n, gate);
                for (uint32_t k = 0; k < num_paulis(n); k++) {
                    auto [neg, image] = conjugate(gate, PauliString(n, k));
                    Mat lhs = u * dense_matrix(PauliString(n, k)) * u.adjoint();
                    Mat rhs = (neg ? -1.0 : 1.0) * dense_matrix(image);
                    EXPECT_TRUE(lhs.isApprox(rhs, 1e-12)) << gate.str() << " " << PauliString(n, k).str();
                }
            }
        }
    }
}

TEST(clifford, generator_count) {
    EXPECT_EQ(clifford_generators(1).size(), 2u);
    EXPECT_EQ(clifford_generators(3).size(), 3u + 3u + 6u);
}

TEST(clifford, signed_permutation_inverse_and_compose) {
    int n = 2;
    for (const auto &g : clifford_generators(n)) {
        auto p = SignedPermutation::of_gate(g, n);
        auto q = SignedPermutation::of_gate(inverse(g), n);
        EXPECT_EQ(q.compose_after(p), SignedPermutation::identity(p.size()));
        EXPECT_EQ(p.inverse(), q);
    }
    // S applied four times is the identity on P-space.
    auto s = SignedPermutation::of_gate({GateKind::S, 0}, 1);
    EXPECT_EQ(s.compose_after(s).compose_after(s).compose_after(s), SignedPermutation::identity(4));
}

TEST(clifford, apply_gate_matches_density_conjugation) {
    testutil::Rng rng(7);
    for (int trial = 0; trial < 20; trial++) {
        int n = 1 + trial % 3;
        auto rho = testutil::random_mixed(n, rng);
        auto g = testutil::random_gate(n, rng);
        Mat u = unitary(n, g);
        auto expected = expectation_vector(DensityState::from_matrix(n, u * rho.matrix() * u.adjoint(), 1e-10));
        auto got = apply_gate(g, expectation_vector(rho));
        for (size_t k = 0; k < got.size(); k++) {
            EXPECT_NEAR(got[k], expected[k], 1e-12);
        }
    }
}

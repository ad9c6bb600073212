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


#include "stabmagic/pauli.h"

#include <gtest/gtest.h>

#include "stabmagic/errors.h"

using namespace stabmagic;

namespace {

using Mat = Eigen::MatrixXcd;
const std::complex<double> I1{0, 1};

Mat single(int digit) {
    Mat m(2, 2);
    switch (digit) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, -I1, I1, 0;
            break;
        default:
            m << 1, 0, 0, -1;
    }
    return m;
}

// Kronecker product written out by hand, site 0 leftmost.
Mat kron_oracle(int n, uint32_t index) {
    Mat out = Mat::Identity(1, 1);
    for (int site = 0; site < n; site++) {
        int digit = (index >> (2 * (n - 1 - site))) & 3;
        Mat s = single(digit);
        Mat next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); r++) {
            for (Eigen::Index c = 0; c < out.cols(); c++) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * s;
            }
        }
        out = next;
    }
    return out;
}

}  // namespace

TEST(pauli, text_round_trip) {
    EXPECT_EQ(PauliString::from_text("XZ").index(), 4u * 1 + 3);
    EXPECT_EQ(PauliString::from_text("IYI").index(), 2u * 4);
    EXPECT_EQ(PauliString::from_text("_XY").str(), "IXY");
    for (int n = 1; n <= 4; n++) {
        for (uint32_t k = 0; k < num_paulis(n); k++) {
            PauliString p(n, k);
            EXPECT_EQ(PauliString::from_text(p.str()).index(), k);
            auto [x, z] = pauli_bits_from_index(n, k);
            EXPECT_EQ(pauli_index_from_bits(n, x, z), k);
            EXPECT_EQ(PauliString::from_bits(n, x, z), p);
        }
    }
}

TEST(pauli, bad_input) {
    EXPECT_THROW(PauliString::from_text("XQ"), ParseError);
    EXPECT_THROW(PauliString::from_text(""), ParseError);
    EXPECT_THROW(PauliString(2, 16), std::invalid_argument);
    EXPECT_THROW(check_qubit_count(0), CapacityError);
    EXPECT_THROW(check_qubit_count(kMaxQubits + 1), CapacityError);
}

TEST(pauli, dense_matches_kronecker) {
    for (int n = 1; n <= 3; n++) {
        for (uint32_t k = 0; k < num_paulis(n); k++) {
            EXPECT_TRUE(dense_matrix(PauliString(n, k)).isApprox(kron_oracle(n, k), 1e-14)) << n << " " << k;
        }
    }
}

TEST(pauli, weight_and_sites) {
    PauliString p = PauliString::from_text("XIZY");
    EXPECT_EQ(p.weight(), 3);
    EXPECT_EQ(p.at(0), Pauli::X);
    EXPECT_EQ(p.at(1), Pauli::I);
    EXPECT_EQ(p.at(2), Pauli::Z);
    EXPECT_EQ(p.at(3), Pauli::Y);
    EXPECT_TRUE(PauliString::identity(3).is_identity());
}

TEST(pauli, product_and_commutation_exhaustive) {
    for (int n = 1; n <= 2; n++) {
        for (uint32_t a = 0; a < num_paulis(n); a++) {
            for (uint32_t b = 0; b < num_paulis(n); b++) {
                PauliString p(n, a), q(n, b);
                auto [phase, r] = pauli_product(p, q);
                Mat lhs = kron_oracle(n, a) * kron_oracle(n, b);
                Mat rhs = phase.value() * kron_oracle(n, r.index());
                EXPECT_TRUE(lhs.isApprox(rhs, 1e-14)) << p.str() << " * " << q.str();
                Mat comm = kron_oracle(n, a) * kron_oracle(n, b) - kron_oracle(n, b) * kron_oracle(n, a);
                EXPECT_EQ(commutes(p, q), comm.norm() < 1e-12);
            }
        }
    }
}

TEST(pauli, single_qubit_products) {
    auto x = PauliString::from_text("X");
    auto y = PauliString::from_text("Y");
    auto z = PauliString::from_text("Z");
    auto [p1, r1] = pauli_product(x, y);
    EXPECT_EQ(r1, z);
    EXPECT_EQ(p1, Phase(1));
    auto [p2, r2] = pauli_product(y, x);
    EXPECT_EQ(r2, z);
    EXPECT_EQ(p2, Phase(3));
    auto [p3, r3] = pauli_product(z, z);
    EXPECT_TRUE(r3.is_identity());
    EXPECT_EQ(p3, Phase(0));
}

TEST(pauli, trace_orthogonality) {
    int n = 2;
    for (uint32_t a = 0; a < num_paulis(n); a++) {
        for (uint32_t b = 0; b < num_paulis(n); b++) {
            std::complex<double> tr = (dense_matrix(PauliString(n, a)) * dense_matrix(PauliString(n, b))).trace();
            EXPECT_NEAR(std::abs(tr - (a == b ? 4.0 : 0.0)), 0.0, 1e-12);
        }
    }
}

TEST(pauli, basis_action_matches_matrix) {
    for (int n = 1; n <= 3; n++) {
        for (uint32_t k = 0; k < num_paulis(n); k++) {
            Mat m = kron_oracle(n, k);
            for (uint32_t b = 0; b < hilbert_dim(n); b++) {
                auto [factor, out] = apply_to_basis(PauliString(n, k), b);
                EXPECT_NEAR(std::abs(m(out, b) - factor), 0.0, 1e-14);
            }
        }
    }
}

TEST(pauli, vector_validation) {
    PauliVector ok(1, {1, 0.5, 0.5, 0});
    EXPECT_NO_THROW(validate_state_vector(ok));
    EXPECT_EQ(ok.reduced().size(), 3u);
    EXPECT_THROW(validate_state_vector(PauliVector(1, {0.9, 0, 0, 0})), ValidationError);
    EXPECT_THROW(validate_state_vector(PauliVector(1, {1, 1.5, 0, 0})), ValidationError);
    EXPECT_THROW(PauliVector(2, {1, 0, 0, 0}), DimensionError);
}

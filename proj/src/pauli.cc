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

#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "stabmagic/errors.h"

namespace stabmagic {

namespace {

// Base-4 digit <-> (x, z) bit pair: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1).
constexpr uint32_t kDigitX[4] = {0, 1, 1, 0};
constexpr uint32_t kDigitZ[4] = {0, 0, 1, 1};
constexpr uint32_t kBitsToDigit[2][2] = {{0, 3}, {1, 2}};  // [x][z]

uint32_t low_mask(int n_qubits) {
    return n_qubits >= 32 ? ~uint32_t{0} : ((uint32_t{1} << n_qubits) - 1);
}

}  // namespace

void check_qubit_count(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError(fmt::format("qubit count {} outside supported range [1, {}]", n_qubits, kMaxQubits));
    }
}

std::complex<double> Phase::value() const {
    switch (quarter_turns) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

uint32_t pauli_index_from_bits(int n_qubits, uint32_t x_bits, uint32_t z_bits) {
    uint32_t index = 0;
    for (int p = n_qubits - 1; p >= 0; p--) {
        index = (index << 2) | kBitsToDigit[(x_bits >> p) & 1][(z_bits >> p) & 1];
    }
    return index;
}

std::pair<uint32_t, uint32_t> pauli_bits_from_index(int n_qubits, uint32_t index) {
    uint32_t x = 0;
    uint32_t z = 0;
    for (int p = 0; p < n_qubits; p++) {
        uint32_t digit = (index >> (2 * p)) & 3;
        x |= kDigitX[digit] << p;
        z |= kDigitZ[digit] << p;
    }
    return {x, z};
}

PauliString::PauliString(int n_qubits, uint32_t x_bits, uint32_t z_bits, bool)
    : n_qubits_(n_qubits), x_(x_bits), z_(z_bits) {
}

PauliString::PauliString(int n_qubits, uint32_t index) : n_qubits_(n_qubits), x_(0), z_(0) {
    check_qubit_count(n_qubits);
    if (index >= num_paulis(n_qubits)) {
        throw DimensionError(fmt::format("Pauli index {} out of range for {} qubits", index, n_qubits));
    }
    std::tie(x_, z_) = pauli_bits_from_index(n_qubits, index);
}

PauliString PauliString::from_bits(int n_qubits, uint32_t x_bits, uint32_t z_bits) {
    check_qubit_count(n_qubits);
    if ((x_bits | z_bits) & ~low_mask(n_qubits)) {
        throw DimensionError("symplectic bits exceed qubit count");
    }
    return PauliString(n_qubits, x_bits, z_bits, true);
}

PauliString PauliString::identity(int n_qubits) {
    return from_bits(n_qubits, 0, 0);
}

PauliString PauliString::from_text(std::string_view text) {
    if (text.empty()) {
        throw ParseError("empty Pauli string");
    }
    int n = static_cast<int>(text.size());
    check_qubit_count(n);
    uint32_t x = 0;
    uint32_t z = 0;
    for (int site = 0; site < n; site++) {
        int p = n - 1 - site;
        switch (text[site]) {
            case 'I':
            case '_':
                break;
            case 'X':
                x |= 1u << p;
                break;
            case 'Y':
                x |= 1u << p;
                z |= 1u << p;
                break;
            case 'Z':
                z |= 1u << p;
                break;
            default:
                throw ParseError(fmt::format("bad Pauli letter '{}' in \"{}\"", text[site], text));
        }
    }
    return PauliString(n, x, z, true);
}

uint32_t PauliString::index() const {
    return pauli_index_from_bits(n_qubits_, x_, z_);
}

Pauli PauliString::at(int site) const {
    int p = n_qubits_ - 1 - site;
    return static_cast<Pauli>(kBitsToDigit[(x_ >> p) & 1][(z_ >> p) & 1]);
}

int PauliString::weight() const {
    return std::popcount(x_ | z_);
}

std::string PauliString::str() const {
    std::string out;
    for (int site = 0; site < n_qubits_; site++) {
        out.push_back("IXYZ"[static_cast<int>(at(site))]);
    }
    return out;
}

std::pair<Phase, PauliString> pauli_product(const PauliString &p, const PauliString &q) {
    if (p.n_qubits() != q.n_qubits()) {
        throw DimensionError(fmt::format("Pauli product of {}-qubit and {}-qubit strings", p.n_qubits(), q.n_qubits()));
    }
    // Each factor is i^{xz} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{z1 x2}.
    uint32_t x3 = p.x_bits() ^ q.x_bits();
    uint32_t z3 = p.z_bits() ^ q.z_bits();
    int turns = std::popcount(p.x_bits() & p.z_bits()) + std::popcount(q.x_bits() & q.z_bits()) +
                2 * std::popcount(p.z_bits() & q.x_bits()) - std::popcount(x3 & z3);
    return {Phase(turns), PauliString::from_bits(p.n_qubits(), x3, z3)};
}

bool commutes(const PauliString &p, const PauliString &q) {
    if (p.n_qubits() != q.n_qubits()) {
        throw DimensionError("commutation check between strings of different length");
    }
    uint32_t s = (p.x_bits() & q.z_bits()) ^ (p.z_bits() & q.x_bits());
    return (std::popcount(s) & 1) == 0;
}

std::pair<std::complex<double>, uint32_t> apply_to_basis(const PauliString &p, uint32_t basis_index) {
    int turns = std::popcount(p.x_bits() & p.z_bits()) + 2 * std::popcount(p.z_bits() & basis_index);
    return {Phase(turns).value(), basis_index ^ p.x_bits()};
}

Eigen::MatrixXcd dense_matrix(const PauliString &p) {
    if (p.n_qubits() > kMaxDenseQubits) {
        throw CapacityError(fmt::format("dense matrices are limited to {} qubits", kMaxDenseQubits));
    }
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(p.n_qubits()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; b++) {
        auto [factor, image] = apply_to_basis(p, static_cast<uint32_t>(b));
        m(image, b) = factor;
    }
    return m;
}

PauliVector::PauliVector(int n, std::vector<double> v) : n_qubits(n), values(std::move(v)) {
    check_qubit_count(n);
    if (values.size() != num_paulis(n)) {
        throw DimensionError(fmt::format("P-space vector of length {} for {} qubits", values.size(), n));
    }
}

void validate_state_vector(const PauliVector &v, double tol) {
    if (v.values.size() != num_paulis(v.n_qubits)) {
        throw DimensionError("P-space vector length does not match qubit count");
    }
    if (std::abs(v.values[0] - 1.0) > tol) {
        throw ValidationError(fmt::format("identity component {} != 1", v.values[0]));
    }
    for (size_t k = 1; k < v.values.size(); k++) {
        if (!(std::abs(v.values[k]) <= 1.0 + tol)) {
            throw ValidationError(fmt::format("component {} = {} outside [-1, 1]", k, v.values[k]));
        }
    }
}

}  // namespace stabmagic

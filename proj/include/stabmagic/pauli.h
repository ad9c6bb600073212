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

#ifndef STABMAGIC_PAULI_H
#define STABMAGIC_PAULI_H

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace stabmagic {

/// Largest qubit count any type in the library accepts. Packed stabilizer
/// entries spend 16 bits on (index, sign), which caps 4^N at 2^14.
constexpr int kMaxQubits = 7;
/// Largest qubit count for which dense 2^N x 2^N matrices are built.
constexpr int kMaxDenseQubits = 6;

/// Hilbert space dimension D = 2^N.
constexpr uint64_t hilbert_dim(int n_qubits) {
    return uint64_t{1} << n_qubits;
}
/// Number of Pauli strings, D^2 = 4^N.
constexpr uint64_t num_paulis(int n_qubits) {
    return uint64_t{1} << (2 * n_qubits);
}

void check_qubit_count(int n_qubits);

/// A power of i, i.e. one of {1, i, -1, -i}.
struct Phase {
    uint8_t quarter_turns = 0;

    constexpr Phase() = default;
    constexpr explicit Phase(int turns) : quarter_turns(static_cast<uint8_t>(((turns % 4) + 4) % 4)) {
    }

    constexpr Phase operator*(Phase other) const {
        return Phase(quarter_turns + other.quarter_turns);
    }
    constexpr bool is_real() const {
        return (quarter_turns & 1) == 0;
    }
    /// +1 or -1; only meaningful when is_real().
    constexpr int real_sign() const {
        return quarter_turns == 0 ? 1 : -1;
    }
    std::complex<double> value() const;

    constexpr bool operator==(const Phase &) const = default;
};

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// One of the 4^N tensor products of {I, X, Y, Z}.
///
/// The external key is the base-4 index: site 0 is the leftmost tensor factor
/// and occupies the most significant base-4 digit, so for two qubits index
/// 4*l0 + l1 denotes P_{l0} (x) P_{l1} with l in {0:I, 1:X, 2:Y, 3:Z}.
/// Internally the string is held in symplectic form: bit p of x_bits/z_bits
/// belongs to site N-1-p, which lines the masks up with computational basis
/// indices (site 0 is also the most significant bit of a basis index).
class PauliString {
   public:
    PauliString(int n_qubits, uint32_t index);

    static PauliString from_bits(int n_qubits, uint32_t x_bits, uint32_t z_bits);
    static PauliString identity(int n_qubits);
    /// Parses strings like "XZ", "IYI" or "_XY" (one letter per site, site 0 first).
    static PauliString from_text(std::string_view text);

    int n_qubits() const {
        return n_qubits_;
    }
    uint32_t x_bits() const {
        return x_;
    }
    uint32_t z_bits() const {
        return z_;
    }
    uint32_t index() const;
    Pauli at(int site) const;
    bool is_identity() const {
        return x_ == 0 && z_ == 0;
    }
    /// Number of non-identity sites.
    int weight() const;

    std::string str() const;

    bool operator==(const PauliString &) const = default;

   private:
    PauliString(int n_qubits, uint32_t x_bits, uint32_t z_bits, bool);

    int n_qubits_;
    uint32_t x_;
    uint32_t z_;
};

uint32_t pauli_index_from_bits(int n_qubits, uint32_t x_bits, uint32_t z_bits);
std::pair<uint32_t, uint32_t> pauli_bits_from_index(int n_qubits, uint32_t index);

/// Returns (phase, r) with p * q == i^phase * r as matrices.
std::pair<Phase, PauliString> pauli_product(const PauliString &p, const PauliString &q);

/// True iff p and q commute (even symplectic inner product).
bool commutes(const PauliString &p, const PauliString &q);

/// Action on a computational basis state: P|b> = factor * |b'>.
std::pair<std::complex<double>, uint32_t> apply_to_basis(const PauliString &p, uint32_t basis_index);

/// Dense Kronecker product of 2x2 Pauli matrices, site 0 leftmost.
Eigen::MatrixXcd dense_matrix(const PauliString &p);

/// A point of P-space: the 4^N Pauli expectation values of a state.
struct PauliVector {
    int n_qubits = 0;
    std::vector<double> values;

    PauliVector() = default;
    PauliVector(int n_qubits, std::vector<double> values);

    /// The identity component dropped (coordinates used by every LP).
    std::span<const double> reduced() const {
        return std::span<const double>(values).subspan(1);
    }
    size_t size() const {
        return values.size();
    }
    double operator[](size_t k) const {
        return values[k];
    }
};

/// Checks values[0] == 1 and |values[k]| <= 1 within tol. Throws ValidationError.
void validate_state_vector(const PauliVector &v, double tol = 1e-9);

}  // namespace stabmagic

#endif

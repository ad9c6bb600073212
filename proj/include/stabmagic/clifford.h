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

#ifndef STABMAGIC_CLIFFORD_H
#define STABMAGIC_CLIFFORD_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stabmagic/pauli.h"

namespace stabmagic {

enum class GateKind : uint8_t { H, S, Sdg, CX };

/// One Clifford generator. For CX, q0 is the control and q1 the target.
struct CliffordGate {
    GateKind kind;
    int q0;
    int q1 = -1;

    std::string str() const;
    bool operator==(const CliffordGate &) const = default;
};

/// Parses "H0", "S1", "Sdg2", "CX0,1" (sites are 0-based).
CliffordGate parse_gate(std::string_view text);
CliffordGate inverse(const CliffordGate &g);
void check_gate(const CliffordGate &g, int n_qubits);

/// Conjugation U P U^dagger = (negated ? -1 : +1) * image.
struct SignedPauli {
    bool negated;
    PauliString image;
};
SignedPauli conjugate(const CliffordGate &g, const PauliString &p);

/// {H_n, S_n, CX_{n,m}} over all sites and ordered pairs. Generates the Clifford
/// group modulo phases (S^3 supplies S^dagger).
std::vector<CliffordGate> clifford_generators(int n_qubits);

/// A gate's action tabulated over every Pauli index: U P_k U^dagger = sign[k] P_{target[k]}.
class SignedPermutation {
   public:
    SignedPermutation() = default;
    SignedPermutation(std::vector<uint32_t> target, std::vector<int8_t> sign);

    static SignedPermutation of_gate(const CliffordGate &g, int n_qubits);
    static SignedPermutation identity(size_t size);

    uint32_t target(size_t k) const {
        return target_[k];
    }
    int sign(size_t k) const {
        return sign_[k];
    }
    size_t size() const {
        return target_.size();
    }

    /// out[target[k]] = sign[k] * in[k]: the image of a P-space point (or a
    /// hyperplane normal) under the gate.
    template <typename T>
    std::vector<T> apply(const std::vector<T> &in) const {
        std::vector<T> out(in.size());
        for (size_t k = 0; k < in.size(); k++) {
            out[target_[k]] = sign_[k] < 0 ? T(-in[k]) : in[k];
        }
        return out;
    }

    /// (*this) after `first`.
    SignedPermutation compose_after(const SignedPermutation &first) const;
    SignedPermutation inverse() const;

    bool operator==(const SignedPermutation &) const = default;

   private:
    std::vector<uint32_t> target_;
    std::vector<int8_t> sign_;
};

/// The image of a P-space vector under U rho U^dagger.
PauliVector apply_gate(const CliffordGate &g, const PauliVector &v);

}  // namespace stabmagic

#endif

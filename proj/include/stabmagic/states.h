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

#ifndef STABMAGIC_STATES_H
#define STABMAGIC_STATES_H

#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stabmagic/pauli.h"

namespace stabmagic {

using Amplitudes = std::vector<std::complex<double>>;

/// A validated N-qubit density matrix (N <= 6).
class DensityState {
   public:
    /// Checks unit trace and Hermiticity within tol and eigenvalues >= -1e-10.
    static DensityState from_matrix(int n_qubits, Eigen::MatrixXcd matrix, double tol = 1e-12);
    /// |psi><psi|; the amplitudes must be normalized within 1e-9.
    static DensityState pure(int n_qubits, std::span<const std::complex<double>> amplitudes);
    static DensityState maximally_mixed(int n_qubits);

    int n_qubits() const {
        return n_qubits_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }

   private:
    DensityState(int n_qubits, Eigen::MatrixXcd matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    }

    int n_qubits_ = 0;
    Eigen::MatrixXcd matrix_;
};

/// Tr(rho P_k) for every k. Throws ValidationError if a trace has an imaginary
/// part above 1e-8.
PauliVector expectation_vector(const DensityState &rho);

/// <psi|P_k|psi> for every k without forming the density matrix.
std::vector<double> pure_state_expectations(int n_qubits, std::span<const std::complex<double>> amplitudes);

/// rho = (1/2^N) sum_k v_k P_k.
Eigen::MatrixXcd density_from_expectations(const PauliVector &v);

struct WernerSpec {
    DensityState base;
    double mu = 1.0;
};

/// (1 - mu) I/D + mu |psi><psi|. mu outside [0, 1] throws ValidationError.
DensityState werner_state(const WernerSpec &spec);
/// The same family directly in P-space: (1, mu * v_1, ..., mu * v_{D^2-1}).
PauliVector werner_vector(const PauliVector &base, double mu);

/// (|0..0> + e^{i phi} |1..1>) / sqrt(2).
Amplitudes ghz_phase(int n_qubits, double phi);
/// ((|0> + e^{i phi} |1>) / sqrt(2))^{(x) N}.
Amplitudes plus_phase_product(int n_qubits, double phi);
/// cos(theta/2) |00> + e^{i phi} sin(theta/2) |11>.
Amplitudes theta_phi_bell(double theta, double phi);
/// Equal superposition of all basis states with phase i on |1..1>.
Amplitudes uniform_i(int n_qubits);

using StateParams = std::map<std::string, double, std::less<>>;

/// Pure states by name: "ghz" (N, phi), "plus_phase" (N, phi), "theta_phi"
/// (theta, phi), "uniform_i" (N). The long forms ghz_phase, plus_phase_product
/// and theta_phi_bell are accepted as aliases.
DensityState named_state(std::string_view name, const StateParams &params);

/// A state expression after parsing. The P-space vector is the primary
/// output; the density matrix is formed only on request.
struct ParsedState {
    std::string label;
    int n_qubits = 0;
    PauliVector vector;
};

/// Parses the state mini-language (see docs/state_grammar.md), e.g.
/// "ghz:N=2,phi=0.7854" or "werner:mu=0.6,base=ghz:N=2,phi=0.7854".
/// Throws ParseError on malformed input and ValidationError on bad values.
ParsedState parse_state(std::string_view expr);

}  // namespace stabmagic

#endif

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

#include "stabmagic/states.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "stabmagic/errors.h"

namespace stabmagic {

namespace {

void check_dense_qubits(int n_qubits) {
    check_qubit_count(n_qubits);
    if (n_qubits > kMaxDenseQubits) {
        throw CapacityError(fmt::format("dense density matrices are limited to {} qubits", kMaxDenseQubits));
    }
}

std::complex<double> quarter_turn(int turns) {
    return Phase(turns).value();
}

}  // namespace

DensityState DensityState::from_matrix(int n_qubits, Eigen::MatrixXcd matrix, double tol) {
    check_dense_qubits(n_qubits);
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    if (matrix.rows() != dim || matrix.cols() != dim) {
        throw DimensionError(fmt::format("density matrix is {}x{}, expected {}x{}", matrix.rows(), matrix.cols(), dim, dim));
    }
    std::complex<double> trace = matrix.trace();
    if (std::abs(trace - 1.0) > tol) {
        throw ValidationError(fmt::format("trace {}+{}i != 1", trace.real(), trace.imag()));
    }
    double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        throw ValidationError(fmt::format("matrix is not Hermitian (deviation {})", asym));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(matrix, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
        throw ValidationError(fmt::format("negative eigenvalue {}", eig.eigenvalues().minCoeff()));
    }
    return DensityState(n_qubits, std::move(matrix));
}

DensityState DensityState::pure(int n_qubits, std::span<const std::complex<double>> amplitudes) {
    check_dense_qubits(n_qubits);
    if (amplitudes.size() != hilbert_dim(n_qubits)) {
        throw DimensionError("amplitude vector length does not match qubit count");
    }
    Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(amplitudes.data(), static_cast<Eigen::Index>(amplitudes.size()));
    double norm = psi.squaredNorm();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw ValidationError(fmt::format("state is not normalized (|psi|^2 = {})", norm));
    }
    return DensityState(n_qubits, psi * psi.adjoint());
}

DensityState DensityState::maximally_mixed(int n_qubits) {
    check_dense_qubits(n_qubits);
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    return DensityState(n_qubits, Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

PauliVector expectation_vector(const DensityState &rho) {
    const int n = rho.n_qubits();
    const uint32_t dim = static_cast<uint32_t>(hilbert_dim(n));
    const auto &m = rho.matrix();
    std::vector<double> values(num_paulis(n));
    for (uint32_t k = 0; k < values.size(); k++) {
        PauliString p(n, k);
        const int y_count = std::popcount(p.x_bits() & p.z_bits());
        // Tr(rho P) = sum_b <b|rho P|b>, P|b> = i^{#Y} (-1)^{z.b} |b ^ x>.
        std::complex<double> acc = 0;
        for (uint32_t b = 0; b < dim; b++) {
            std::complex<double> term = m(b, b ^ p.x_bits());
            acc += (std::popcount(p.z_bits() & b) & 1) ? -term : term;
        }
        acc *= quarter_turn(y_count);
        if (std::abs(acc.imag()) > 1e-8) {
            throw ValidationError(fmt::format("Tr(rho {}) has imaginary part {}", p.str(), acc.imag()));
        }
        values[k] = acc.real();
    }
    return PauliVector(n, std::move(values));
}

std::vector<double> pure_state_expectations(int n_qubits, std::span<const std::complex<double>> amplitudes) {
    check_qubit_count(n_qubits);
    const uint32_t dim = static_cast<uint32_t>(hilbert_dim(n_qubits));
    if (amplitudes.size() != dim) {
        throw DimensionError("amplitude vector length does not match qubit count");
    }
    std::vector<double> values(num_paulis(n_qubits));
    for (uint32_t k = 0; k < values.size(); k++) {
        PauliString p(n_qubits, k);
        std::complex<double> acc = 0;
        for (uint32_t b = 0; b < dim; b++) {
            std::complex<double> term = std::conj(amplitudes[b ^ p.x_bits()]) * amplitudes[b];
            acc += (std::popcount(p.z_bits() & b) & 1) ? -term : term;
        }
        acc *= quarter_turn(std::popcount(p.x_bits() & p.z_bits()));
        values[k] = acc.real();
    }
    return values;
}

Eigen::MatrixXcd density_from_expectations(const PauliVector &v) {
    check_dense_qubits(v.n_qubits);
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(v.n_qubits));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (uint32_t k = 0; k < v.size(); k++) {
        if (v[k] == 0) {
            continue;
        }
        PauliString p(v.n_qubits, k);
        for (Eigen::Index b = 0; b < dim; b++) {
            auto [factor, image] = apply_to_basis(p, static_cast<uint32_t>(b));
            m(image, b) += v[k] * factor;
        }
    }
    return m / static_cast<double>(dim);
}

DensityState werner_state(const WernerSpec &spec) {
    if (!(spec.mu >= 0.0 && spec.mu <= 1.0)) {
        throw ValidationError(fmt::format("Werner weight mu = {} outside [0, 1]", spec.mu));
    }
    const int n = spec.base.n_qubits();
    if (spec.mu == 0.0) {
        return DensityState::maximally_mixed(n);
    }
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
    Eigen::MatrixXcd m = (1.0 - spec.mu) * Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim) +
                         spec.mu * spec.base.matrix();
    return DensityState::from_matrix(n, std::move(m), 1e-10);
}

PauliVector werner_vector(const PauliVector &base, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw ValidationError(fmt::format("Werner weight mu = {} outside [0, 1]", mu));
    }
    std::vector<double> values(base.size());
    values[0] = 1.0;
    for (size_t k = 1; k < values.size(); k++) {
        values[k] = mu * base[k];
    }
    return PauliVector(base.n_qubits, std::move(values));
}

Amplitudes ghz_phase(int n_qubits, double phi) {
    check_qubit_count(n_qubits);
    Amplitudes psi(hilbert_dim(n_qubits), 0.0);
    psi.front() = std::numbers::sqrt2 / 2;
    psi.back() += std::polar(std::numbers::sqrt2 / 2, phi);
    return psi;
}

Amplitudes plus_phase_product(int n_qubits, double phi) {
    check_qubit_count(n_qubits);
    const size_t dim = hilbert_dim(n_qubits);
    const double scale = std::pow(std::numbers::sqrt2 / 2, n_qubits);
    Amplitudes psi(dim);
    for (size_t b = 0; b < dim; b++) {
        psi[b] = std::polar(scale, phi * std::popcount(b));
    }
    return psi;
}

Amplitudes theta_phi_bell(double theta, double phi) {
    Amplitudes psi(4, 0.0);
    psi[0] = std::cos(theta / 2);
    psi[3] = std::polar(std::sin(theta / 2), phi);
    return psi;
}

Amplitudes uniform_i(int n_qubits) {
    check_qubit_count(n_qubits);
    const size_t dim = hilbert_dim(n_qubits);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    Amplitudes psi(dim, scale);
    psi.back() = std::complex<double>(0, scale);
    return psi;
}

namespace {

struct PureSpec {
    int n_qubits;
    Amplitudes amplitudes;
};

double take(const StateParams &params, std::string_view key, std::string_view state, std::optional<double> fallback) {
    auto it = params.find(key);
    if (it != params.end()) {
        return it->second;
    }
    if (fallback) {
        return *fallback;
    }
    throw ParseError(fmt::format("state \"{}\" needs parameter {}", state, key));
}

int take_qubits(const StateParams &params, std::string_view state) {
    double n = take(params, "N", state, std::nullopt);
    if (n != std::floor(n)) {
        throw ParseError(fmt::format("state \"{}\": N = {} is not an integer", state, n));
    }
    if (n < 1 || n > kMaxQubits) {
        throw CapacityError(fmt::format("state \"{}\": N = {} outside supported range [1, {}]", state, n, kMaxQubits));
    }
    return static_cast<int>(n);
}

void check_keys(const StateParams &params, std::string_view state, std::initializer_list<std::string_view> allowed) {
    for (const auto &[key, value] : params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(fmt::format("state \"{}\" has no parameter \"{}\"", state, key));
        }
    }
}

std::optional<PureSpec> resolve_pure(std::string_view name, const StateParams &params) {
    if (name == "ghz" || name == "ghz_phase") {
        check_keys(params, name, {"N", "phi"});
        int n = take_qubits(params, name);
        return PureSpec{n, ghz_phase(n, take(params, "phi", name, 0.0))};
    }
    if (name == "plus_phase" || name == "plus_phase_product") {
        check_keys(params, name, {"N", "phi"});
        int n = take_qubits(params, name);
        return PureSpec{n, plus_phase_product(n, take(params, "phi", name, 0.0))};
    }
    if (name == "theta_phi" || name == "theta_phi_bell") {
        check_keys(params, name, {"N", "theta", "phi"});
        if (params.contains("N") && take_qubits(params, name) != 2) {
            throw ParseError(fmt::format("state \"{}\" is defined for N = 2 only", name));
        }
        return PureSpec{2, theta_phi_bell(take(params, "theta", name, std::nullopt), take(params, "phi", name, 0.0))};
    }
    if (name == "uniform_i") {
        check_keys(params, name, {"N"});
        int n = take_qubits(params, name);
        return PureSpec{n, uniform_i(n)};
    }
    return std::nullopt;
}

double parse_number(std::string_view text, std::string_view key) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ParseError(fmt::format("parameter {} has non-numeric value \"{}\"", key, text));
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

DensityState named_state(std::string_view name, const StateParams &params) {
    auto spec = resolve_pure(name, params);
    if (!spec) {
        throw ParseError(fmt::format("unknown state name \"{}\"", name));
    }
    return DensityState::pure(spec->n_qubits, spec->amplitudes);
}

ParsedState parse_state(std::string_view expr) {
    expr = trim(expr);
    auto colon = expr.find(':');
    std::string_view name = trim(expr.substr(0, colon));
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : expr.substr(colon + 1);
    if (name.empty()) {
        throw ParseError(fmt::format("empty state name in \"{}\"", expr));
    }

    StateParams params;
    std::string_view base_expr;
    bool has_base = false;
    while (!rest.empty()) {
        auto eq = rest.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(fmt::format("expected key=value in \"{}\"", rest));
        }
        std::string_view key = trim(rest.substr(0, eq));
        rest = rest.substr(eq + 1);
        if (key == "base") {
            // The nested expression runs to the end of the input.
            base_expr = rest;
            has_base = true;
            break;
        }
        auto comma = rest.find(',');
        std::string_view value = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (key.empty()) {
            throw ParseError(fmt::format("empty parameter name in \"{}\"", expr));
        }
        if (!params.emplace(std::string(key), parse_number(value, key)).second) {
            throw ParseError(fmt::format("parameter {} given twice", key));
        }
    }

    ParsedState out;
    out.label = std::string(expr);
    if (name == "werner") {
        if (!has_base) {
            throw ParseError("werner state needs base=<state>");
        }
        check_keys(params, name, {"mu"});
        double mu = take(params, "mu", name, std::nullopt);
        ParsedState base = parse_state(base_expr);
        out.n_qubits = base.n_qubits;
        out.vector = werner_vector(base.vector, mu);
        return out;
    }
    if (has_base) {
        throw ParseError(fmt::format("state \"{}\" takes no base", name));
    }
    if (name == "mixed") {
        check_keys(params, name, {"N"});
        out.n_qubits = take_qubits(params, name);
        std::vector<double> values(num_paulis(out.n_qubits), 0.0);
        values[0] = 1.0;
        out.vector = PauliVector(out.n_qubits, std::move(values));
        return out;
    }
    auto spec = resolve_pure(name, params);
    if (!spec) {
        throw ParseError(fmt::format("unknown state name \"{}\"", name));
    }
    out.n_qubits = spec->n_qubits;
    out.vector = PauliVector(spec->n_qubits, pure_state_expectations(spec->n_qubits, spec->amplitudes));
    return out;
}

}  // namespace stabmagic

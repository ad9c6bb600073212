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

#include <charconv>

#include <fmt/format.h>

#include "stabmagic/errors.h"

namespace stabmagic {

namespace {

int parse_site(std::string_view s, std::string_view whole) {
    int value = -1;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
        throw ParseError(fmt::format("bad site in gate \"{}\"", whole));
    }
    return value;
}

}  // namespace

std::string CliffordGate::str() const {
    switch (kind) {
        case GateKind::H:
            return fmt::format("H{}", q0);
        case GateKind::S:
            return fmt::format("S{}", q0);
        case GateKind::Sdg:
            return fmt::format("Sdg{}", q0);
        case GateKind::CX:
            return fmt::format("CX{},{}", q0, q1);
    }
    return "?";
}

CliffordGate parse_gate(std::string_view text) {
    if (text.starts_with("CX") || text.starts_with("CNOT")) {
        auto body = text.substr(text.starts_with("CX") ? 2 : 4);
        auto comma = body.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError(fmt::format("CX gate needs two sites: \"{}\"", text));
        }
        return {GateKind::CX, parse_site(body.substr(0, comma), text), parse_site(body.substr(comma + 1), text)};
    }
    if (text.starts_with("Sdg")) {
        return {GateKind::Sdg, parse_site(text.substr(3), text)};
    }
    if (text.starts_with("S")) {
        return {GateKind::S, parse_site(text.substr(1), text)};
    }
    if (text.starts_with("H")) {
        return {GateKind::H, parse_site(text.substr(1), text)};
    }
    throw ParseError(fmt::format("unknown gate \"{}\"", text));
}

CliffordGate inverse(const CliffordGate &g) {
    switch (g.kind) {
        case GateKind::S:
            return {GateKind::Sdg, g.q0};
        case GateKind::Sdg:
            return {GateKind::S, g.q0};
        default:
            return g;
    }
}

void check_gate(const CliffordGate &g, int n_qubits) {
    bool ok = g.q0 >= 0 && g.q0 < n_qubits;
    if (g.kind == GateKind::CX) {
        ok = ok && g.q1 >= 0 && g.q1 < n_qubits && g.q1 != g.q0;
    }
    if (!ok) {
        throw ValidationError(fmt::format("gate {} invalid for {} qubits", g.str(), n_qubits));
    }
}

SignedPauli conjugate(const CliffordGate &g, const PauliString &p) {
    int n = p.n_qubits();
    check_gate(g, n);
    uint32_t x = p.x_bits();
    uint32_t z = p.z_bits();
    bool neg = false;
    auto bit = [n](int site) { return uint32_t{1} << (n - 1 - site); };
    switch (g.kind) {
        case GateKind::H: {
            uint32_t m = bit(g.q0);
            neg = (x & z & m) != 0;  // Y -> -Y
            uint32_t xs = x & m;
            uint32_t zs = z & m;
            x = (x & ~m) | zs;
            z = (z & ~m) | xs;
            break;
        }
        case GateKind::S: {
            // X -> Y, Y -> -X
            uint32_t m = bit(g.q0);
            neg = (x & z & m) != 0;
            z ^= x & m;
            break;
        }
        case GateKind::Sdg: {
            // X -> -Y, Y -> X
            uint32_t m = bit(g.q0);
            neg = (x & m) != 0 && (z & m) == 0;
            z ^= x & m;
            break;
        }
        case GateKind::CX: {
            uint32_t mc = bit(g.q0);
            uint32_t mt = bit(g.q1);
            bool xc = x & mc, zc = z & mc, xt = x & mt, zt = z & mt;
            neg = xc && zt && (xt == zc);
            if (xc) {
                x ^= mt;
            }
            if (zt) {
                z ^= mc;
            }
            break;
        }
    }
    return {neg, PauliString::from_bits(n, x, z)};
}

std::vector<CliffordGate> clifford_generators(int n_qubits) {
    check_qubit_count(n_qubits);
    std::vector<CliffordGate> gens;
    for (int q = 0; q < n_qubits; q++) {
        gens.push_back({GateKind::H, q});
    }
    for (int q = 0; q < n_qubits; q++) {
        gens.push_back({GateKind::S, q});
    }
    for (int c = 0; c < n_qubits; c++) {
        for (int t = 0; t < n_qubits; t++) {
            if (c != t) {
                gens.push_back({GateKind::CX, c, t});
            }
        }
    }
    return gens;
}

SignedPermutation::SignedPermutation(std::vector<uint32_t> target, std::vector<int8_t> sign)
    : target_(std::move(target)), sign_(std::move(sign)) {
    if (target_.size() != sign_.size()) {
        throw DimensionError("signed permutation target/sign length mismatch");
    }
}

SignedPermutation SignedPermutation::of_gate(const CliffordGate &g, int n_qubits) {
    check_gate(g, n_qubits);
    size_t size = num_paulis(n_qubits);
    std::vector<uint32_t> target(size);
    std::vector<int8_t> sign(size);
    for (uint32_t k = 0; k < size; k++) {
        auto [neg, image] = conjugate(g, PauliString(n_qubits, k));
        target[k] = image.index();
        sign[k] = neg ? -1 : 1;
    }
    return SignedPermutation(std::move(target), std::move(sign));
}

SignedPermutation SignedPermutation::identity(size_t size) {
    std::vector<uint32_t> target(size);
    for (size_t k = 0; k < size; k++) {
        target[k] = static_cast<uint32_t>(k);
    }
    return SignedPermutation(std::move(target), std::vector<int8_t>(size, 1));
}

SignedPermutation SignedPermutation::compose_after(const SignedPermutation &first) const {
    if (first.size() != size()) {
        throw DimensionError("composing signed permutations of different sizes");
    }
    std::vector<uint32_t> target(size());
    std::vector<int8_t> sign(size());
    for (size_t k = 0; k < size(); k++) {
        uint32_t mid = first.target_[k];
        target[k] = target_[mid];
        sign[k] = static_cast<int8_t>(first.sign_[k] * sign_[mid]);
    }
    return SignedPermutation(std::move(target), std::move(sign));
}

SignedPermutation SignedPermutation::inverse() const {
    std::vector<uint32_t> target(size());
    std::vector<int8_t> sign(size());
    for (size_t k = 0; k < size(); k++) {
        target[target_[k]] = static_cast<uint32_t>(k);
        sign[target_[k]] = sign_[k];
    }
    return SignedPermutation(std::move(target), std::move(sign));
}

PauliVector apply_gate(const CliffordGate &g, const PauliVector &v) {
    auto perm = SignedPermutation::of_gate(g, v.n_qubits);
    return PauliVector(v.n_qubits, perm.apply(v.values));
}

}  // namespace stabmagic

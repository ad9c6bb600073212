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

#ifndef STABMAGIC_STABILIZERS_H
#define STABMAGIC_STABILIZERS_H

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stabmagic/pauli.h"

namespace stabmagic {

/// Number of pure stabilizer states, 2^N * prod_{n=1..N} (2^n + 1).
uint64_t stabilizer_count(int n_qubits);

struct PauliEntry {
    uint32_t pauli_index;
    int8_t sign;

    auto operator<=>(const PauliEntry &) const = default;
};

/// Sparse P-space vector of a pure stabilizer state: +-1 on the 2^N strings of
/// its stabilizer group, zero elsewhere. Entries are sorted by pauli_index.
struct StabilizerVector {
    int n_qubits = 0;
    std::vector<PauliEntry> entries;
    uint64_t id = 0;

    std::vector<double> dense() const;
    /// a . S over the full index range (a has length 4^N).
    template <typename T>
    T dot(std::span<const T> a) const {
        T acc{};
        for (const auto &e : entries) {
            acc += e.sign < 0 ? -a[e.pauli_index] : a[e.pauli_index];
        }
        return acc;
    }
};

struct StructureReport {
    bool ok = true;
    std::string violation;
};

/// Support size 2^N, identity present with +1, pairwise commutation and closure
/// of the signed strings under multiplication.
StructureReport verify_stabilizer_structure(const StabilizerVector &v);

/// Immutable enumeration of all pure stabilizer states of N qubits.
///
/// Storage is one flat arena: vector `id` occupies entries [id * 2^N, (id+1) * 2^N),
/// each packed into 16 bits as pauli_index + (negative ? 4^N : 0). Ids are 0-based
/// and stable within a run only.
class StabilizerSet {
   public:
    StabilizerSet() = default;

    /// Builds a set from explicit vectors (deduplicated, order kept). Used for
    /// oracle comparisons and cache loading.
    static StabilizerSet from_vectors(int n_qubits, const std::vector<StabilizerVector> &vectors);

    int n_qubits() const {
        return n_qubits_;
    }
    size_t size() const {
        return count_;
    }
    size_t stride() const {
        return stride_;
    }
    std::span<const uint16_t> packed(size_t id) const {
        return std::span<const uint16_t>(arena_).subspan(id * stride_, stride_);
    }
    std::span<const uint16_t> arena() const {
        return arena_;
    }
    StabilizerVector vector(size_t id) const;
    std::optional<size_t> find(const StabilizerVector &v) const;

    uint32_t unpack_index(uint16_t e) const {
        return e & (pauli_count_ - 1);
    }
    int unpack_sign(uint16_t e) const {
        return e >= pauli_count_ ? -1 : 1;
    }

   private:
    friend StabilizerSet enumerate_stabilizers(int, bool);
    friend class StabilizerSetBuilder;

    int n_qubits_ = 0;
    size_t stride_ = 0;
    uint32_t pauli_count_ = 0;
    size_t count_ = 0;
    std::vector<uint16_t> arena_;
    std::vector<uint32_t> slots_;  // open-addressing index, id + 1 or 0 for empty
};

/// Orbit of |0...0> under {H_n, S_n, CX_{n,m}}. N <= 4 always; N = 5 only with
/// allow_large. Throws CapacityError outside that range and ConsistencyError if
/// the closure does not reach stabilizer_count(N).
StabilizerSet enumerate_stabilizers(int n_qubits, bool allow_large = false);

/// Expectation vector of a normalized pure state; returns its sparse form when
/// exactly 2^N components are +-1 (within 1e-9) and the rest vanish, nullopt
/// otherwise. Unnormalized input throws ValidationError.
std::optional<StabilizerVector> stabilizer_vector_of_pure_state(int n_qubits,
                                                                std::span<const std::complex<double>> amplitudes);

/// Binary cache: "STBV1", N and D_S as little-endian u64, then 2^N records of
/// (u32 pauli_index, i8 sign) per vector.
void write_stabilizer_cache(const StabilizerSet &set, const std::filesystem::path &path);
StabilizerSet read_stabilizer_cache(const std::filesystem::path &path);

}  // namespace stabmagic

#endif

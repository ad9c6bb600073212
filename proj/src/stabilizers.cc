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

#include "stabmagic/stabilizers.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "stabmagic/clifford.h"
#include "stabmagic/errors.h"
#include "stabmagic/states.h"

namespace stabmagic {

uint64_t stabilizer_count(int n_qubits) {
    check_qubit_count(n_qubits);
    uint64_t count = hilbert_dim(n_qubits);
    for (int n = 1; n <= n_qubits; n++) {
        count *= (uint64_t{1} << n) + 1;
    }
    return count;
}

std::vector<double> StabilizerVector::dense() const {
    std::vector<double> out(num_paulis(n_qubits), 0.0);
    for (const auto &e : entries) {
        out[e.pauli_index] = e.sign;
    }
    return out;
}

StructureReport verify_stabilizer_structure(const StabilizerVector &v) {
    auto fail = [](std::string why) { return StructureReport{false, std::move(why)}; };
    if (v.n_qubits < 1 || v.n_qubits > kMaxQubits) {
        return fail(fmt::format("qubit count {} unsupported", v.n_qubits));
    }
    const size_t expected = hilbert_dim(v.n_qubits);
    if (v.entries.size() != expected) {
        return fail(fmt::format("support has {} entries, expected {}", v.entries.size(), expected));
    }
    std::map<uint32_t, int> sign_of;
    for (const auto &e : v.entries) {
        if (e.pauli_index >= num_paulis(v.n_qubits)) {
            return fail(fmt::format("Pauli index {} out of range", e.pauli_index));
        }
        if (e.sign != 1 && e.sign != -1) {
            return fail(fmt::format("entry {} has sign {}", e.pauli_index, int{e.sign}));
        }
        if (!sign_of.emplace(e.pauli_index, e.sign).second) {
            return fail(fmt::format("duplicate Pauli index {}", e.pauli_index));
        }
    }
    auto id = sign_of.find(0);
    if (id == sign_of.end() || id->second != 1) {
        return fail("identity string missing or negative");
    }
    for (const auto &[pi, ps] : sign_of) {
        PauliString p(v.n_qubits, pi);
        for (const auto &[qi, qs] : sign_of) {
            PauliString q(v.n_qubits, qi);
            if (!commutes(p, q)) {
                return fail(fmt::format("{} and {} anticommute", p.str(), q.str()));
            }
            auto [phase, r] = pauli_product(p, q);
            auto hit = sign_of.find(r.index());
            if (hit == sign_of.end()) {
                return fail(fmt::format("product {}*{} = {} not in support", p.str(), q.str(), r.str()));
            }
            if (hit->second != ps * qs * phase.real_sign()) {
                return fail(fmt::format("sign of {} inconsistent with {}*{}", r.str(), p.str(), q.str()));
            }
        }
    }
    return {};
}

// Arena plus open-addressing dedup index keyed on the packed entry lists.
class StabilizerSetBuilder {
   public:
    StabilizerSetBuilder(int n_qubits, size_t expected) {
        set_.n_qubits_ = n_qubits;
        set_.stride_ = hilbert_dim(n_qubits);
        set_.pauli_count_ = static_cast<uint32_t>(num_paulis(n_qubits));
        set_.arena_.reserve(expected * set_.stride_);
        set_.slots_.assign(std::bit_ceil(std::max<size_t>(16, 2 * expected)), 0);
    }

    size_t count() const {
        return set_.count_;
    }
    const StabilizerSet &set() const {
        return set_;
    }

    /// Returns true when the entries were new.
    bool insert(std::span<const uint16_t> entries) {
        if (2 * (set_.count_ + 1) > set_.slots_.size()) {
            rehash(set_.slots_.size() * 2);
        }
        size_t mask = set_.slots_.size() - 1;
        for (size_t slot = hash(entries) & mask;; slot = (slot + 1) & mask) {
            uint32_t occupant = set_.slots_[slot];
            if (occupant == 0) {
                set_.arena_.insert(set_.arena_.end(), entries.begin(), entries.end());
                set_.slots_[slot] = static_cast<uint32_t>(++set_.count_);
                return true;
            }
            auto existing = set_.packed(occupant - 1);
            if (std::equal(existing.begin(), existing.end(), entries.begin())) {
                return false;
            }
        }
    }

    StabilizerSet finish() {
        return std::move(set_);
    }

    static uint64_t hash(std::span<const uint16_t> entries) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (uint16_t e : entries) {
            h = (h ^ e) * 0x100000001b3ull;
        }
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
        return h;
    }

   private:
    void rehash(size_t capacity) {
        std::vector<uint32_t> slots(capacity, 0);
        size_t mask = capacity - 1;
        for (size_t id = 0; id < set_.count_; id++) {
            size_t slot = hash(set_.packed(id)) & mask;
            while (slots[slot] != 0) {
                slot = (slot + 1) & mask;
            }
            slots[slot] = static_cast<uint32_t>(id + 1);
        }
        set_.slots_ = std::move(slots);
    }

    StabilizerSet set_;
};

namespace {

uint16_t pack_entry(const PauliEntry &e, uint32_t pauli_count) {
    return static_cast<uint16_t>(e.pauli_index + (e.sign < 0 ? pauli_count : 0));
}

void sort_packed(std::span<uint16_t> entries, uint32_t pauli_count) {
    const uint32_t mask = pauli_count - 1;
    // Insertion sort: at most 2^N <= 128 entries, usually nearly sorted.
    for (size_t i = 1; i < entries.size(); i++) {
        uint16_t v = entries[i];
        size_t j = i;
        while (j > 0 && (entries[j - 1] & mask) > (v & mask)) {
            entries[j] = entries[j - 1];
            j--;
        }
        entries[j] = v;
    }
}

}  // namespace

StabilizerVector StabilizerSet::vector(size_t id) const {
    if (id >= count_) {
        throw DimensionError(fmt::format("stabilizer id {} out of range (size {})", id, count_));
    }
    StabilizerVector v;
    v.n_qubits = n_qubits_;
    v.id = id;
    for (uint16_t e : packed(id)) {
        v.entries.push_back({unpack_index(e), static_cast<int8_t>(unpack_sign(e))});
    }
    return v;
}

std::optional<size_t> StabilizerSet::find(const StabilizerVector &v) const {
    if (v.n_qubits != n_qubits_ || v.entries.size() != stride_ || slots_.empty()) {
        return std::nullopt;
    }
    std::vector<uint16_t> key;
    for (const auto &e : v.entries) {
        if (e.pauli_index >= pauli_count_) {
            return std::nullopt;
        }
        key.push_back(pack_entry(e, pauli_count_));
    }
    sort_packed(key, pauli_count_);
    size_t mask = slots_.size() - 1;
    for (size_t slot = StabilizerSetBuilder::hash(key) & mask; slots_[slot] != 0; slot = (slot + 1) & mask) {
        auto existing = packed(slots_[slot] - 1);
        if (std::equal(existing.begin(), existing.end(), key.begin())) {
            return slots_[slot] - 1;
        }
    }
    return std::nullopt;
}

StabilizerSet StabilizerSet::from_vectors(int n_qubits, const std::vector<StabilizerVector> &vectors) {
    check_qubit_count(n_qubits);
    StabilizerSetBuilder builder(n_qubits, vectors.size());
    const auto pauli_count = static_cast<uint32_t>(num_paulis(n_qubits));
    std::vector<uint16_t> key;
    for (const auto &v : vectors) {
        if (v.n_qubits != n_qubits || v.entries.size() != hilbert_dim(n_qubits)) {
            throw DimensionError("stabilizer vector does not match set dimensions");
        }
        key.clear();
        for (const auto &e : v.entries) {
            if (e.pauli_index >= pauli_count) {
                throw DimensionError("Pauli index out of range");
            }
            key.push_back(pack_entry(e, pauli_count));
        }
        sort_packed(key, pauli_count);
        builder.insert(key);
    }
    return builder.finish();
}

StabilizerSet enumerate_stabilizers(int n_qubits, bool allow_large) {
    if (n_qubits < 1 || n_qubits > 5 || (n_qubits == 5 && !allow_large)) {
        throw CapacityError(fmt::format("stabilizer enumeration supports 1 <= N <= 4 (N = 5 with the large-memory flag); "
                                        "got N = {}",
                                        n_qubits));
    }
    const uint64_t expected = stabilizer_count(n_qubits);
    const auto pauli_count = static_cast<uint32_t>(num_paulis(n_qubits));
    const size_t stride = hilbert_dim(n_qubits);

    // Each generator as a lookup table on packed entries.
    std::vector<std::vector<uint16_t>> tables;
    for (const auto &g : clifford_generators(n_qubits)) {
        auto perm = SignedPermutation::of_gate(g, n_qubits);
        std::vector<uint16_t> table(2 * pauli_count);
        for (uint32_t k = 0; k < pauli_count; k++) {
            uint32_t t = perm.target(k);
            bool neg = perm.sign(k) < 0;
            table[k] = static_cast<uint16_t>(t + (neg ? pauli_count : 0));
            table[k + pauli_count] = static_cast<uint16_t>(t + (neg ? 0 : pauli_count));
        }
        tables.push_back(std::move(table));
    }

    StabilizerSetBuilder builder(n_qubits, expected);
    std::vector<uint16_t> seed;
    for (uint32_t z = 0; z < stride; z++) {
        seed.push_back(static_cast<uint16_t>(pauli_index_from_bits(n_qubits, 0, z)));
    }
    sort_packed(seed, pauli_count);
    builder.insert(seed);

    std::vector<uint16_t> current(stride);
    std::vector<uint16_t> image(stride);
    for (size_t id = 0; id < builder.count(); id++) {
        auto src = builder.set().packed(id);
        std::copy(src.begin(), src.end(), current.begin());
        for (const auto &table : tables) {
            for (size_t j = 0; j < stride; j++) {
                image[j] = table[current[j]];
            }
            sort_packed(image, pauli_count);
            builder.insert(image);
        }
        if (builder.count() > expected) {
            break;
        }
    }
    if (builder.count() != expected) {
        throw ConsistencyError(fmt::format("Clifford orbit closure produced {} stabilizer states, expected {}",
                                           builder.count(), expected));
    }
    return builder.finish();
}

std::optional<StabilizerVector> stabilizer_vector_of_pure_state(int n_qubits,
                                                                std::span<const std::complex<double>> amplitudes) {
    check_qubit_count(n_qubits);
    if (amplitudes.size() != hilbert_dim(n_qubits)) {
        throw DimensionError("amplitude vector length does not match qubit count");
    }
    double norm = 0;
    for (const auto &a : amplitudes) {
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > 1e-9) {
        throw ValidationError(fmt::format("state is not normalized (|psi|^2 = {})", norm));
    }
    auto values = pure_state_expectations(n_qubits, amplitudes);
    constexpr double tol = 1e-9;
    StabilizerVector v;
    v.n_qubits = n_qubits;
    for (uint32_t k = 0; k < values.size(); k++) {
        double x = values[k];
        if (std::abs(x - 1.0) <= tol) {
            v.entries.push_back({k, 1});
        } else if (std::abs(x + 1.0) <= tol) {
            v.entries.push_back({k, -1});
        } else if (std::abs(x) > tol) {
            return std::nullopt;
        }
    }
    if (v.entries.size() != hilbert_dim(n_qubits)) {
        return std::nullopt;
    }
    return v;
}

namespace {

constexpr std::array<char, 5> kCacheMagic = {'S', 'T', 'B', 'V', '1'};

void put_u64(std::ostream &out, uint64_t v) {
    for (int i = 0; i < 8; i++) {
        out.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

uint64_t get_u64(std::istream &in) {
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) {
        int c = in.get();
        if (c == EOF) {
            throw ParseError("stabilizer cache truncated in header");
        }
        v |= static_cast<uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

}  // namespace

void write_stabilizer_cache(const StabilizerSet &set, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    out.write(kCacheMagic.data(), kCacheMagic.size());
    put_u64(out, static_cast<uint64_t>(set.n_qubits()));
    put_u64(out, set.size());
    for (uint16_t e : set.arena()) {
        uint32_t index = set.unpack_index(e);
        for (int i = 0; i < 4; i++) {
            out.put(static_cast<char>((index >> (8 * i)) & 0xff));
        }
        out.put(static_cast<char>(static_cast<int8_t>(set.unpack_sign(e))));
    }
    if (!out) {
        throw std::runtime_error(fmt::format("write to {} failed", path.string()));
    }
}

StabilizerSet read_stabilizer_cache(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    std::array<char, 5> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kCacheMagic) {
        throw ParseError(fmt::format("{} is not a stabilizer cache (bad magic)", path.string()));
    }
    uint64_t n = get_u64(in);
    uint64_t count = get_u64(in);
    if (n < 1 || n > 5) {
        throw ParseError(fmt::format("cache declares unsupported N = {}", n));
    }
    int n_qubits = static_cast<int>(n);
    if (count != stabilizer_count(n_qubits)) {
        throw ParseError(fmt::format("cache declares {} vectors, expected {}", count, stabilizer_count(n_qubits)));
    }
    const size_t stride = hilbert_dim(n_qubits);
    StabilizerSetBuilder builder(n_qubits, count);
    const auto pauli_count = static_cast<uint32_t>(num_paulis(n_qubits));
    std::vector<char> buf(stride * 5);
    std::vector<uint16_t> key(stride);
    for (uint64_t i = 0; i < count; i++) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!in) {
            throw ParseError("stabilizer cache truncated");
        }
        for (size_t j = 0; j < stride; j++) {
            const auto *rec = reinterpret_cast<const unsigned char *>(buf.data() + 5 * j);
            uint32_t index = rec[0] | (rec[1] << 8) | (rec[2] << 16) | (uint32_t{rec[3]} << 24);
            auto sign = static_cast<int8_t>(rec[4]);
            if (index >= pauli_count || (sign != 1 && sign != -1)) {
                throw ParseError("stabilizer cache has an invalid record");
            }
            key[j] = pack_entry({index, sign}, pauli_count);
        }
        sort_packed(key, pauli_count);
        if (!builder.insert(key)) {
            throw ParseError("stabilizer cache contains a duplicate vector");
        }
    }
    if (in.peek() != EOF) {
        throw ParseError("stabilizer cache has trailing bytes");
    }
    return builder.finish();
}

}  // namespace stabmagic

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

#include "stabmagic/polytope.h"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "stabmagic/errors.h"
#include "stabmagic/lp.h"

namespace stabmagic {

namespace {

template <typename Fn>
void for_chunks(size_t count, int threads, Fn fn) {
    size_t t = threads <= 1 ? 1 : std::min<size_t>(static_cast<size_t>(threads), std::max<size_t>(1, count / 1024));
    if (t <= 1) {
        fn(size_t{0}, size_t{0}, count);
        return;
    }
    std::vector<std::thread> workers;
    size_t per = (count + t - 1) / t;
    for (size_t c = 0; c < t; c++) {
        size_t begin = std::min(count, c * per);
        size_t end = std::min(count, begin + per);
        workers.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    }
    for (auto &w : workers) {
        w.join();
    }
}

size_t chunk_count(size_t count, int threads) {
    return threads <= 1 ? 1 : std::min<size_t>(static_cast<size_t>(threads), std::max<size_t>(1, count / 1024));
}

void check_length(size_t len, const StabilizerSet &stabs) {
    if (len != num_paulis(stabs.n_qubits())) {
        throw DimensionError(fmt::format("coefficient vector has length {}, expected {}", len, num_paulis(stabs.n_qubits())));
    }
}

// Signed lookup: entry e of a packed vector contributes lut[e].
template <typename T>
std::vector<T> signed_lut(std::span<const T> a) {
    std::vector<T> lut(2 * a.size());
    for (size_t k = 0; k < a.size(); k++) {
        lut[k] = a[k];
        lut[k + a.size()] = -a[k];
    }
    return lut;
}

template <typename T>
T packed_dot(const std::vector<T> &lut, std::span<const uint16_t> entries) {
    T acc{};
    for (uint16_t e : entries) {
        acc += lut[e];
    }
    return acc;
}

template <typename T>
std::pair<T, size_t> argmax_scan(std::span<const T> a, const StabilizerSet &stabs, int threads) {
    check_length(a.size(), stabs);
    if (stabs.size() == 0) {
        throw ValidationError("bound over an empty stabilizer set");
    }
    auto lut = signed_lut(a);
    size_t chunks = chunk_count(stabs.size(), threads);
    std::vector<std::pair<T, size_t>> best(chunks, {T{}, SIZE_MAX});
    for_chunks(stabs.size(), threads, [&](size_t c, size_t begin, size_t end) {
        T b{};
        size_t arg = SIZE_MAX;
        for (size_t id = begin; id < end; id++) {
            T d = packed_dot(lut, stabs.packed(id));
            if (arg == SIZE_MAX || d > b) {
                b = d;
                arg = id;
            }
        }
        best[c] = {b, arg};
    });
    auto out = best[0];
    for (size_t c = 1; c < chunks; c++) {
        if (best[c].second != SIZE_MAX && (out.second == SIZE_MAX || best[c].first > out.first)) {
            out = best[c];
        }
    }
    return out;
}

std::vector<Rational> reduced_row(const StabilizerSet &stabs, size_t id) {
    std::vector<Rational> row(num_paulis(stabs.n_qubits()) - 1, Rational(0));
    for (uint16_t e : stabs.packed(id)) {
        uint32_t k = stabs.unpack_index(e);
        if (k != 0) {
            row[k - 1] = stabs.unpack_sign(e);
        }
    }
    return row;
}

void check_face(const FaceCandidate &face, const StabilizerSet &stabs) {
    if (face.stabilizer_ids.empty()) {
        throw ValidationError("face has no stabilizers");
    }
    std::set<size_t> seen;
    for (size_t id : face.stabilizer_ids) {
        if (id >= stabs.size()) {
            throw DimensionError(fmt::format("stabilizer id {} out of range (size {})", id, stabs.size()));
        }
        if (!seen.insert(id).second) {
            throw ValidationError(fmt::format("stabilizer id {} repeated in face", id));
        }
    }
}

// Integer hyperplane from a rational a (reduced coordinates) with b = 1.
Hyperplane integer_hyperplane(int n_qubits, std::span<const Rational> reduced) {
    std::vector<Rational> joint(reduced.begin(), reduced.end());
    joint.push_back(Rational(1));
    auto ints = primitive_integer_vector(joint);
    Hyperplane h;
    h.n_qubits = n_qubits;
    h.a.assign(num_paulis(n_qubits), 0);
    for (size_t k = 0; k < reduced.size(); k++) {
        if (!ints[k].fits_slong_p()) {
            throw CapacityError("hyperplane coefficient exceeds 64 bits");
        }
        h.a[k + 1] = ints[k].get_si();
    }
    if (!ints.back().fits_slong_p()) {
        throw CapacityError("hyperplane bound exceeds 64 bits");
    }
    h.b = ints.back().get_si();
    return h;
}

// Does some a with a . S_j' = 1 on the face also satisfy a . S_k' <= 1 for all k?
bool face_is_supported(const std::vector<size_t> &face, const StabilizerSet &stabs) {
    const size_t n = num_paulis(stabs.n_qubits()) - 1;
    auto row_of = [&](size_t id) {
        std::vector<double> row(n, 0.0);
        for (uint16_t e : stabs.packed(id)) {
            uint32_t k = stabs.unpack_index(e);
            if (k != 0) {
                row[k - 1] = stabs.unpack_sign(e);
            }
        }
        return row;
    };
    // Every boundary with b = 1 has |a_k| <= 1: averaging the stabilizers
    // with a fixed sign on P_k gives the unit vector along k.
    LpProblem p = LpProblem::with_variables(n, -1.0, 1.0);
    for (size_t id : face) {
        p.constraints.push_back({row_of(id), Relation::kEqual, 1.0});
    }
    if (stabs.size() <= 4096) {
        for (size_t id = 0; id < stabs.size(); id++) {
            p.constraints.push_back({row_of(id), Relation::kLessEqual, 1.0});
        }
        return solve(p).status == LpStatus::kOptimal;
    }
    RowOracle oracle = [&](std::span<const double> x, double tol) {
        std::vector<double> full(n + 1, 0.0);
        std::copy(x.begin(), x.end(), full.begin() + 1);
        std::vector<OracleRow> rows;
        for (const auto &s : top_dots(full, stabs, 1.0 + tol, 64)) {
            OracleRow r;
            for (uint16_t e : stabs.packed(s.id)) {
                uint32_t k = stabs.unpack_index(e);
                if (k != 0) {
                    r.entries.push_back({k - 1, static_cast<double>(stabs.unpack_sign(e))});
                }
            }
            r.rhs = 1.0;
            r.key = s.id;
            rows.push_back(std::move(r));
        }
        return rows;
    };
    return solve_with_rows(p, oracle).status == LpStatus::kOptimal;
}

}  // namespace

Hyperplane Hyperplane::from_terms(int n_qubits, const std::vector<std::pair<std::string, int64_t>> &terms, int64_t b) {
    check_qubit_count(n_qubits);
    Hyperplane h;
    h.n_qubits = n_qubits;
    h.a.assign(num_paulis(n_qubits), 0);
    h.b = b;
    for (const auto &[text, coeff] : terms) {
        PauliString p = PauliString::from_text(text);
        if (p.n_qubits() != n_qubits) {
            throw DimensionError(fmt::format("term {} does not have {} sites", text, n_qubits));
        }
        if (p.is_identity()) {
            throw ValidationError("hyperplanes carry no identity coefficient");
        }
        h.a[p.index()] += coeff;
    }
    return h;
}

void Hyperplane::canonicalize() {
    int64_t g = std::abs(b);
    for (int64_t x : a) {
        g = std::gcd(g, std::abs(x));
    }
    if (g > 1) {
        for (auto &x : a) {
            x /= g;
        }
        b /= g;
    }
}

size_t Hyperplane::support_size() const {
    return static_cast<size_t>(std::count_if(a.begin(), a.end(), [](int64_t x) { return x != 0; }));
}

std::vector<double> Hyperplane::as_double() const {
    return {a.begin(), a.end()};
}

std::string Hyperplane::str() const {
    std::string out;
    for (size_t k = 0; k < a.size(); k++) {
        if (a[k] != 0) {
            out += fmt::format("{}{} {} ", a[k] > 0 ? "+" : "", a[k], PauliString(n_qubits, static_cast<uint32_t>(k)).str());
        }
    }
    return out + fmt::format("<= {}", b);
}

BoundResult bound(std::span<const int64_t> a, const StabilizerSet &stabs, int threads) {
    auto [b, id] = argmax_scan<int64_t>(a, stabs, threads);
    return {b, id};
}

RealBoundResult bound_real(std::span<const double> a, const StabilizerSet &stabs, int threads) {
    auto [b, id] = argmax_scan<double>(a, stabs, threads);
    return {b, id};
}

int64_t lower_bound(std::span<const int64_t> a, const StabilizerSet &stabs, int threads) {
    std::vector<int64_t> neg(a.size());
    std::transform(a.begin(), a.end(), neg.begin(), [](int64_t x) { return -x; });
    return -bound(neg, stabs, threads).b;
}

void all_dots(std::span<const double> a, const StabilizerSet &stabs, std::span<double> out, int threads) {
    check_length(a.size(), stabs);
    if (out.size() != stabs.size()) {
        throw DimensionError("output span does not match stabilizer count");
    }
    auto lut = signed_lut(a);
    for_chunks(stabs.size(), threads, [&](size_t, size_t begin, size_t end) {
        for (size_t id = begin; id < end; id++) {
            out[id] = packed_dot(lut, stabs.packed(id));
        }
    });
}

std::vector<ScoredId> top_dots(std::span<const double> a, const StabilizerSet &stabs, double threshold, size_t k,
                               int threads) {
    check_length(a.size(), stabs);
    auto lut = signed_lut(a);
    auto worse = [](const ScoredId &x, const ScoredId &y) {
        return x.value > y.value || (x.value == y.value && x.id < y.id);
    };
    size_t chunks = chunk_count(stabs.size(), threads);
    std::vector<std::vector<ScoredId>> partial(chunks);
    for_chunks(stabs.size(), threads, [&](size_t c, size_t begin, size_t end) {
        // Min-heap (under `worse`) of the best k seen so far.
        auto &heap = partial[c];
        for (size_t id = begin; id < end; id++) {
            double d = packed_dot(lut, stabs.packed(id));
            if (d <= threshold) {
                continue;
            }
            ScoredId s{d, id};
            if (heap.size() < k) {
                heap.push_back(s);
                std::push_heap(heap.begin(), heap.end(), worse);
            } else if (k > 0 && worse(s, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), worse);
                heap.back() = s;
                std::push_heap(heap.begin(), heap.end(), worse);
            }
        }
    });
    std::vector<ScoredId> out;
    for (auto &p : partial) {
        out.insert(out.end(), p.begin(), p.end());
    }
    std::sort(out.begin(), out.end(), worse);
    if (out.size() > k) {
        out.resize(k);
    }
    return out;
}

bool is_boundary(const Hyperplane &h, const FaceCandidate &face, const StabilizerSet &stabs) {
    check_face(face, stabs);
    check_length(h.a.size(), stabs);
    auto lut = signed_lut<int64_t>(h.a);
    for (size_t id : face.stabilizer_ids) {
        if (packed_dot(lut, stabs.packed(id)) != h.b) {
            return false;
        }
    }
    return bound(h.a, stabs).b == h.b;
}

std::string to_string(FacetStatus status) {
    switch (status) {
        case FacetStatus::kVerified:
            return "verified";
        case FacetStatus::kUnderconstrained:
            return "underconstrained";
        case FacetStatus::kInconsistent:
            return "inconsistent";
        case FacetStatus::kNotBoundary:
            return "not-boundary";
    }
    return "?";
}

FacetResult facet_through(const FaceCandidate &face, const StabilizerSet &stabs) {
    check_face(face, stabs);
    const int n = stabs.n_qubits();
    const size_t width = num_paulis(n) - 1;
    FacetResult result;

    IncrementalSystem diff(width);
    auto first = reduced_row(stabs, face.stabilizer_ids.front());
    IncrementalSystem sys(width);
    for (size_t id : face.stabilizer_ids) {
        auto row = reduced_row(stabs, id);
        std::vector<Rational> delta(width);
        for (size_t k = 0; k < width; k++) {
            delta[k] = row[k] - first[k];
        }
        diff.add(delta, Rational(0));
        if (sys.add(row, Rational(1)) == IncrementalSystem::Outcome::kInconsistent) {
            result.status = FacetStatus::kInconsistent;
            result.violating_id = id;
            result.message = fmt::format("no hyperplane with positive bound passes through the face; "
                                         "stabilizer {} contradicts the earlier members",
                                         id);
        }
    }
    result.difference_rank = diff.rank();
    if (result.status == FacetStatus::kInconsistent && result.violating_id) {
        return result;
    }

    AffineSolution reduced = sys.solution();
    result.family.consistent = true;
    result.family.rank = reduced.rank;
    auto lift = [](const RationalVector &v) {
        RationalVector full(v.size() + 1, Rational(0));
        std::copy(v.begin(), v.end(), full.begin() + 1);
        return full;
    };
    result.family.particular = lift(reduced.particular);
    for (const auto &nb : reduced.null_basis) {
        result.family.null_basis.push_back(lift(nb));
    }

    if (reduced.null_basis.empty()) {
        Hyperplane h = integer_hyperplane(n, reduced.particular);
        BoundResult br = bound(h.a, stabs);
        if (br.b == h.b) {
            h.verified = true;
            result.status = FacetStatus::kVerified;
        } else {
            result.status = FacetStatus::kNotBoundary;
            result.violating_id = br.argmax_id;
            result.message = fmt::format("stabilizer {} reaches {} > {}", br.argmax_id, br.b, h.b);
        }
        result.hyperplane = std::move(h);
        return result;
    }

    result.status = FacetStatus::kUnderconstrained;
    const size_t k = reduced.null_basis.size();
    std::vector<std::vector<int>> grid;
    if (k <= 6) {
        size_t total = 1;
        for (size_t j = 0; j < k; j++) {
            total *= 3;
        }
        for (size_t code = 0; code < total; code++) {
            std::vector<int> t(k);
            size_t c = code;
            for (size_t j = 0; j < k; j++) {
                t[j] = static_cast<int>(c % 3) - 1;
                c /= 3;
            }
            grid.push_back(std::move(t));
        }
    } else {
        grid.push_back(std::vector<int>(k, 0));
        for (size_t j = 0; j < k; j++) {
            for (int s : {-1, 1}) {
                std::vector<int> t(k, 0);
                t[j] = s;
                grid.push_back(std::move(t));
            }
        }
    }
    for (auto &t : grid) {
        RationalVector a = reduced.particular;
        for (size_t j = 0; j < k; j++) {
            if (t[j] == 0) {
                continue;
            }
            for (size_t c = 0; c < width; c++) {
                a[c] += t[j] * reduced.null_basis[j][c];
            }
        }
        FamilySample sample;
        sample.t = std::move(t);
        sample.hyperplane = integer_hyperplane(n, a);
        sample.boundary = bound(sample.hyperplane.a, stabs).b == sample.hyperplane.b;
        sample.hyperplane.verified = sample.boundary;
        result.samples.push_back(std::move(sample));
    }
    result.message = fmt::format("{} free parameter(s)", k);
    return result;
}

FaceCandidate grow_face(const FaceCandidate &seed, const StabilizerSet &stabs, const GrowOptions &options) {
    check_face(seed, stabs);
    const size_t width = num_paulis(stabs.n_qubits()) - 1;
    IncrementalSystem sys(width);
    std::vector<size_t> face;
    std::vector<bool> member(stabs.size(), false);
    for (size_t id : seed.stabilizer_ids) {
        if (sys.add(reduced_row(stabs, id), Rational(1)) == IncrementalSystem::Outcome::kInconsistent) {
            throw ValidationError(fmt::format("seed stabilizer {} admits no common hyperplane with the others", id));
        }
        face.push_back(id);
        member[id] = true;
    }
    if (!face_is_supported(face, stabs)) {
        throw ValidationError("seed does not lie on a common boundary of the polytope");
    }

    std::vector<size_t> order(stabs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    if (options.order_by) {
        std::vector<double> overlap(stabs.size());
        all_dots(*options.order_by, stabs, overlap);
        std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return overlap[x] > overlap[y]; });
    }

    for (size_t id : order) {
        if (sys.full_rank()) {
            break;
        }
        if (member[id]) {
            continue;
        }
        auto row = reduced_row(stabs, id);
        auto outcome = sys.test(row, Rational(1));
        if (outcome == IncrementalSystem::Outcome::kInconsistent) {
            continue;
        }
        if (outcome == IncrementalSystem::Outcome::kIndependent) {
            face.push_back(id);
            if (!face_is_supported(face, stabs)) {
                face.pop_back();
                continue;
            }
        } else {
            face.push_back(id);
        }
        sys.add(row, Rational(1));
        member[id] = true;
    }

    if (sys.full_rank()) {
        AffineSolution sol = sys.solution();
        Hyperplane h = integer_hyperplane(stabs.n_qubits(), sol.particular);
        auto lut = signed_lut<int64_t>(h.a);
        for (size_t id = 0; id < stabs.size(); id++) {
            if (!member[id] && packed_dot(lut, stabs.packed(id)) == h.b) {
                face.push_back(id);
                member[id] = true;
            }
        }
    }
    std::sort(face.begin(), face.end());
    return FaceCandidate{face};
}

FaceCandidate vicinity_seed(const PauliVector &v, const StabilizerSet &stabs, size_t k) {
    if (v.n_qubits != stabs.n_qubits()) {
        throw DimensionError("state and stabilizer set have different qubit counts");
    }
    FaceCandidate seed;
    for (const auto &s : top_dots(v.values, stabs, -kInf, k)) {
        seed.stabilizer_ids.push_back(s.id);
    }
    return seed;
}

Hyperplane clifford_map(const Hyperplane &h, const CliffordGate &g) {
    auto perm = SignedPermutation::of_gate(g, h.n_qubits);
    Hyperplane out = h;
    out.a = perm.apply(h.a);
    return out;
}

Hyperplane reflect(const Hyperplane &h, int site, Pauli axis) {
    if (site < 0 || site >= h.n_qubits) {
        throw ValidationError(fmt::format("site {} invalid for {} qubits", site, h.n_qubits));
    }
    if (axis == Pauli::I) {
        throw ValidationError("reflection axis must be X, Y or Z");
    }
    Hyperplane out = h;
    for (uint32_t k = 0; k < out.a.size(); k++) {
        if (PauliString(h.n_qubits, k).at(site) == axis) {
            out.a[k] = -out.a[k];
        }
    }
    return out;
}

Hyperplane reflect_all(const Hyperplane &h, Pauli axis) {
    Hyperplane out = h;
    for (int site = 0; site < h.n_qubits; site++) {
        out = reflect(out, site, axis);
    }
    return out;
}

Orbit symmetry_orbit(const Hyperplane &h, size_t max_size) {
    Orbit orbit;
    if (max_size == 0) {
        orbit.truncated = true;
        return orbit;
    }
    std::vector<SignedPermutation> moves;
    for (const auto &g : clifford_generators(h.n_qubits)) {
        moves.push_back(SignedPermutation::of_gate(g, h.n_qubits));
    }
    std::set<std::pair<std::vector<int64_t>, int64_t>> seen;
    std::deque<size_t> frontier;
    auto visit = [&](Hyperplane x) {
        if (!seen.insert({x.a, x.b}).second) {
            return true;
        }
        if (orbit.members.size() >= max_size) {
            orbit.truncated = true;
            return false;
        }
        orbit.members.push_back(std::move(x));
        frontier.push_back(orbit.members.size() - 1);
        return true;
    };
    Hyperplane start = h;
    start.canonicalize();
    visit(start);
    while (!frontier.empty()) {
        Hyperplane cur = orbit.members[frontier.front()];
        frontier.pop_front();
        for (const auto &m : moves) {
            Hyperplane next = cur;
            next.a = m.apply(cur.a);
            if (!visit(std::move(next))) {
                return orbit;
            }
        }
        for (Pauli axis : {Pauli::X, Pauli::Y, Pauli::Z}) {
            if (!visit(reflect_all(cur, axis))) {
                return orbit;
            }
        }
    }
    return orbit;
}

namespace {

// Signed permutation of the axes (X, Y, Z): axis j+1 goes to perm[j]+1 with sign[j].
struct AxisMap {
    std::array<int, 3> perm;
    std::array<int, 3> sign;
    int det() const {
        int inversions = 0;
        for (int i = 0; i < 3; i++) {
            for (int j = i + 1; j < 3; j++) {
                inversions += perm[i] > perm[j];
            }
        }
        return (inversions % 2 ? -1 : 1) * sign[0] * sign[1] * sign[2];
    }
};

std::vector<AxisMap> octahedral_group() {
    std::vector<AxisMap> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
        for (int s = 0; s < 8; s++) {
            out.push_back({perm, {s & 1 ? -1 : 1, s & 2 ? -1 : 1, s & 4 ? -1 : 1}});
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

int digit_at(uint32_t k, int n, int site) {
    return static_cast<int>((k >> (2 * (n - 1 - site))) & 3);
}

uint32_t with_digit(uint32_t k, int n, int site, int d) {
    int shift = 2 * (n - 1 - site);
    return (k & ~(uint32_t{3} << shift)) | (static_cast<uint32_t>(d) << shift);
}

SignedPermutation axis_map_on(const AxisMap &m, int n, const std::vector<int> &sites) {
    size_t size = num_paulis(n);
    std::vector<uint32_t> target(size);
    std::vector<int8_t> sign(size);
    for (uint32_t k = 0; k < size; k++) {
        uint32_t t = k;
        int s = 1;
        for (int site : sites) {
            int d = digit_at(k, n, site);
            if (d != 0) {
                t = with_digit(t, n, site, m.perm[d - 1] + 1);
                s *= m.sign[d - 1];
            }
        }
        target[k] = t;
        sign[k] = static_cast<int8_t>(s);
    }
    return SignedPermutation(std::move(target), std::move(sign));
}

SignedPermutation site_permutation(int n, const std::vector<int> &image) {
    size_t size = num_paulis(n);
    std::vector<uint32_t> target(size);
    for (uint32_t k = 0; k < size; k++) {
        uint32_t t = 0;
        for (int site = 0; site < n; site++) {
            t = with_digit(t, n, image[site], digit_at(k, n, site));
        }
        target[k] = t;
    }
    return SignedPermutation(std::move(target), std::vector<int8_t>(size, 1));
}

}  // namespace

std::vector<SignedPermutation> polytope_symmetry_candidates(int n_qubits) {
    check_qubit_count(n_qubits);
    std::vector<SignedPermutation> out;
    std::vector<int> all_sites(n_qubits);
    std::iota(all_sites.begin(), all_sites.end(), 0);
    for (const AxisMap &m : octahedral_group()) {
        bool identity = m.perm == std::array<int, 3>{0, 1, 2} && m.sign == std::array<int, 3>{1, 1, 1};
        if (identity) {
            continue;
        }
        // Rotations are local Cliffords; the antiunitary half is only a
        // symmetry when applied on every site at once.
        if (m.det() > 0 && n_qubits > 1) {
            for (int site = 0; site < n_qubits; site++) {
                out.push_back(axis_map_on(m, n_qubits, {site}));
            }
        }
        out.push_back(axis_map_on(m, n_qubits, all_sites));
    }
    for (int i = 0; i < n_qubits; i++) {
        for (int j = i + 1; j < n_qubits; j++) {
            std::vector<int> image = all_sites;
            std::swap(image[i], image[j]);
            out.push_back(site_permutation(n_qubits, image));
        }
    }
    if (n_qubits > 2) {
        std::vector<int> shift(n_qubits);
        for (int i = 0; i < n_qubits; i++) {
            shift[i] = (i + 1) % n_qubits;
        }
        out.push_back(site_permutation(n_qubits, shift));
    }
    return out;
}

std::vector<double> SymmetryReduction::expand(std::span<const double> z) const {
    if (z.size() != num_classes) {
        throw DimensionError(fmt::format("reduced vector of length {}, expected {}", z.size(), num_classes));
    }
    std::vector<double> a(cls.size(), 0.0);
    for (size_t k = 0; k < cls.size(); k++) {
        if (cls[k] >= 0) {
            a[k] = sign[k] * z[static_cast<size_t>(cls[k])];
        }
    }
    return a;
}

std::vector<double> SymmetryReduction::project(std::span<const double> u) const {
    if (u.size() != cls.size()) {
        throw DimensionError(fmt::format("vector of length {}, expected {}", u.size(), cls.size()));
    }
    std::vector<double> z(num_classes, 0.0);
    for (size_t k = 0; k < cls.size(); k++) {
        if (cls[k] >= 0) {
            z[static_cast<size_t>(cls[k])] += sign[k] * u[k];
        }
    }
    return z;
}

std::vector<std::pair<uint32_t, double>> SymmetryReduction::project_stabilizer(const StabilizerSet &stabs,
                                                                               size_t id) const {
    std::vector<std::pair<uint32_t, double>> out;
    for (uint16_t e : stabs.packed(id)) {
        int32_t c = cls[stabs.unpack_index(e)];
        if (c >= 0) {
            out.push_back({static_cast<uint32_t>(c), static_cast<double>(sign[stabs.unpack_index(e)] * stabs.unpack_sign(e))});
        }
    }
    std::sort(out.begin(), out.end());
    // Merge repeated classes and drop cancellations.
    std::vector<std::pair<uint32_t, double>> merged;
    for (const auto &[c, x] : out) {
        if (!merged.empty() && merged.back().first == c) {
            merged.back().second += x;
        } else {
            merged.push_back({c, x});
        }
    }
    std::erase_if(merged, [](const auto &p) { return p.second == 0.0; });
    return merged;
}

SymmetryReduction identity_reduction(int n_qubits) {
    SymmetryReduction r;
    r.n_qubits = n_qubits;
    size_t size = num_paulis(n_qubits);
    r.num_classes = size - 1;
    r.cls.resize(size);
    r.sign.assign(size, 1);
    r.cls[0] = -1;
    for (size_t k = 1; k < size; k++) {
        r.cls[k] = static_cast<int32_t>(k - 1);
    }
    return r;
}

SymmetryReduction symmetry_reduction(const PauliVector &v, double tol) {
    const int n = v.n_qubits;
    const size_t size = v.size();
    // Union-find with a sign relative to the root: a_k = parity[k] * a_root.
    std::vector<uint32_t> parent(size);
    std::vector<int8_t> parity(size, 1);
    std::vector<bool> zero(size, false);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](uint32_t k) {
        int8_t s = 1;
        uint32_t r = k;
        while (parent[r] != r) {
            s = static_cast<int8_t>(s * parity[r]);
            r = parent[r];
        }
        // Path compression keeps the accumulated sign.
        uint32_t cur = k;
        int8_t cs = s;
        while (parent[cur] != cur) {
            uint32_t next = parent[cur];
            int8_t ns = static_cast<int8_t>(cs * parity[cur]);
            parent[cur] = r;
            parity[cur] = cs;
            cur = next;
            cs = ns;
        }
        return std::pair<uint32_t, int8_t>{r, s};
    };

    SymmetryReduction red;
    red.n_qubits = n;
    for (const SignedPermutation &g : polytope_symmetry_candidates(n)) {
        bool fixes = true;
        for (size_t k = 0; k < size && fixes; k++) {
            fixes = std::abs(g.sign(k) * v[k] - v[g.target(k)]) <= tol;
        }
        if (!fixes) {
            continue;
        }
        red.generators++;
        for (uint32_t k = 0; k < size; k++) {
            auto [rk, sk] = find(k);
            auto [rt, st] = find(g.target(k));
            // a_target = sign * a_k
            int8_t rel = static_cast<int8_t>(sk * st * g.sign(k));
            if (rk == rt) {
                if (rel < 0) {
                    zero[rk] = true;
                }
            } else {
                parent[rt] = rk;
                parity[rt] = rel;
                zero[rk] = zero[rk] || zero[rt];
            }
        }
    }

    red.cls.assign(size, -1);
    red.sign.assign(size, 1);
    std::vector<int32_t> root_class(size, -1);
    auto [root0, sign0] = find(0);
    for (uint32_t k = 1; k < size; k++) {
        auto [r, s] = find(k);
        if (zero[r] || r == root0) {
            continue;
        }
        if (root_class[r] < 0) {
            root_class[r] = static_cast<int32_t>(red.num_classes++);
        }
        red.cls[k] = root_class[r];
        red.sign[k] = s;
    }
    return red;
}

std::string to_json_line(const Hyperplane &h) {
    nlohmann::ordered_json a = nlohmann::ordered_json::object();
    for (size_t k = 0; k < h.a.size(); k++) {
        if (h.a[k] != 0) {
            a[std::to_string(k)] = h.a[k];
        }
    }
    nlohmann::ordered_json j;
    j["n"] = h.n_qubits;
    j["a"] = std::move(a);
    j["b"] = h.b;
    j["verified"] = h.verified;
    return j.dump();
}

Hyperplane hyperplane_from_json(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(fmt::format("facet line is not JSON: {}", e.what()));
    }
    try {
        Hyperplane h;
        h.n_qubits = j.at("n").get<int>();
        check_qubit_count(h.n_qubits);
        h.a.assign(num_paulis(h.n_qubits), 0);
        for (const auto &[key, value] : j.at("a").items()) {
            size_t pos = 0;
            unsigned long k = std::stoul(key, &pos);
            if (pos != key.size() || k >= h.a.size()) {
                throw ParseError(fmt::format("facet coefficient key \"{}\" is not a Pauli index", key));
            }
            if (k == 0 && value.get<int64_t>() != 0) {
                throw ParseError("facet has a nonzero identity coefficient");
            }
            h.a[k] = value.get<int64_t>();
        }
        h.b = j.at("b").get<int64_t>();
        h.verified = j.value("verified", false);
        return h;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(fmt::format("malformed facet record: {}", e.what()));
    } catch (const std::logic_error &e) {
        throw ParseError(fmt::format("malformed facet record: {}", e.what()));
    }
}

std::vector<Hyperplane> read_facet_library(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open facet library {}", path.string()));
    }
    std::vector<Hyperplane> out;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        out.push_back(hyperplane_from_json(line));
    }
    return out;
}

void write_facet_library(const std::vector<Hyperplane> &facets, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write facet library {}", path.string()));
    }
    for (const auto &h : facets) {
        out << to_json_line(h) << '\n';
    }
}

}  // namespace stabmagic

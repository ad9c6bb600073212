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

#ifndef STABMAGIC_POLYTOPE_H
#define STABMAGIC_POLYTOPE_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabmagic/clifford.h"
#include "stabmagic/pauli.h"
#include "stabmagic/rational.h"
#include "stabmagic/stabilizers.h"

namespace stabmagic {

/// The half-space a . <P> <= b with integer a (a[0] = 0) and integer b.
struct Hyperplane {
    int n_qubits = 0;
    std::vector<int64_t> a;
    int64_t b = 0;
    /// Set once b has been checked to equal max_i a . S_i over a full enumeration.
    bool verified = false;

    /// Builds a from Pauli-text terms, e.g. {{"XX", 1}, {"YY", -1}}.
    static Hyperplane from_terms(int n_qubits, const std::vector<std::pair<std::string, int64_t>> &terms, int64_t b);

    /// Divides a and b by their positive common gcd. The sign is never
    /// flipped, since that would turn the half-space around.
    void canonicalize();
    size_t support_size() const;
    std::vector<double> as_double() const;
    /// "+1 XX -1 YY ... <= 1".
    std::string str() const;

    bool operator==(const Hyperplane &other) const {
        return n_qubits == other.n_qubits && a == other.a && b == other.b;
    }
};

struct FaceCandidate {
    std::vector<size_t> stabilizer_ids;
};

struct BoundResult {
    int64_t b = 0;
    size_t argmax_id = 0;
};
struct RealBoundResult {
    double b = 0;
    size_t argmax_id = 0;
};

/// b(a) = max_i a . S_i, with the lowest maximizing id. a has length 4^N.
/// threads > 1 splits the scan into contiguous chunks; the result does not
/// depend on the thread count.
BoundResult bound(std::span<const int64_t> a, const StabilizerSet &stabs, int threads = 1);
RealBoundResult bound_real(std::span<const double> a, const StabilizerSet &stabs, int threads = 1);
/// -b(-a): the smallest value of a . S_i.
int64_t lower_bound(std::span<const int64_t> a, const StabilizerSet &stabs, int threads = 1);

/// a . S_i for every id.
void all_dots(std::span<const double> a, const StabilizerSet &stabs, std::span<double> out, int threads = 1);

struct ScoredId {
    double value;
    size_t id;
};
/// The (at most) k ids with the largest a . S_i above threshold, largest
/// first, ties to the lower id.
std::vector<ScoredId> top_dots(std::span<const double> a, const StabilizerSet &stabs, double threshold, size_t k,
                               int threads = 1);

/// a . S_j takes the common value h.b on every face member and no stabilizer
/// exceeds it. Throws ValidationError on an empty face.
bool is_boundary(const Hyperplane &h, const FaceCandidate &face, const StabilizerSet &stabs);

enum class FacetStatus {
    kVerified,          // fully constrained and a bound of the polytope
    kUnderconstrained,  // a family of solutions, returned unresolved
    kInconsistent,      // no common hyperplane through the face
    kNotBoundary,       // fully constrained but some stabilizer lies beyond it
};
std::string to_string(FacetStatus status);

/// One integer point of an underconstrained family, checked against the polytope.
struct FamilySample {
    std::vector<int> t;
    Hyperplane hyperplane;
    bool boundary = false;
};

struct FacetResult {
    FacetStatus status = FacetStatus::kInconsistent;
    /// kVerified: the facet. kNotBoundary: the rejected candidate.
    Hyperplane hyperplane;
    /// Solutions of a . S_j = 1 over the face in full coordinates (a[0] = 0):
    /// particular + sum_j t_j null_basis[j].
    AffineSolution family;
    /// Rank of the difference system a . (S_j - S_first) = 0.
    size_t difference_rank = 0;
    std::optional<size_t> violating_id;
    std::vector<FamilySample> samples;
    std::string message;
};

/// Solves for the hyperplane through a face in exact rationals. The common
/// value is normalized to 1 before scaling back to primitive integers, which
/// is possible because b(a) > 0 for every a != 0.
FacetResult facet_through(const FaceCandidate &face, const StabilizerSet &stabs);

struct GrowOptions {
    /// When set, candidates are tried in descending S_i . order_by (ties by id)
    /// instead of ascending id.
    std::optional<std::vector<double>> order_by;
};

/// Greedy face growth. A stabilizer joins when the equations stay solvable
/// and some member of the resulting family still bounds every stabilizer;
/// once the family is a single hyperplane, every stabilizer on it is added.
/// Returns the ids sorted ascending. Throws ValidationError on a seed that
/// lies on no common polytope boundary.
FaceCandidate grow_face(const FaceCandidate &seed, const StabilizerSet &stabs, const GrowOptions &options = {});

/// Seed of the k stabilizers with the largest overlap S_i . v (ties by id).
FaceCandidate vicinity_seed(const PauliVector &v, const StabilizerSet &stabs, size_t k);

Hyperplane clifford_map(const Hyperplane &h, const CliffordGate &g);
/// Negates a_k whenever site `site` of P_k carries `axis`.
Hyperplane reflect(const Hyperplane &h, int site, Pauli axis);
/// The reflection applied on every site: a_k picks up (-1)^(number of sites
/// carrying axis). For axis Y this is complex conjugation of the state.
Hyperplane reflect_all(const Hyperplane &h, Pauli axis);

/// Signed Pauli permutations that map the stabilizer set onto itself: the
/// 24 single-qubit Clifford rotations on each site, the 48 octahedral maps
/// applied uniformly on every site, site transpositions and the cyclic shift.
std::vector<SignedPermutation> polytope_symmetry_candidates(int n_qubits);

/// Coordinates a_k = sign[k] * z[cls[k]] of the subspace fixed by every
/// candidate symmetry that leaves v unchanged. cls[k] = -1 marks coordinates
/// forced to zero (the identity always is). Convex problems over the polytope
/// whose objective is invariant under these maps have an optimum here.
struct SymmetryReduction {
    int n_qubits = 0;
    size_t num_classes = 0;
    std::vector<int32_t> cls;
    std::vector<int8_t> sign;
    /// Number of generators that fixed v.
    size_t generators = 0;

    /// z -> a (length 4^N, a[0] = 0).
    std::vector<double> expand(std::span<const double> z) const;
    /// u -> E^T u, summing signed components per class.
    std::vector<double> project(std::span<const double> u) const;
    /// Stabilizer id in reduced coordinates as sparse (class, coefficient) pairs.
    std::vector<std::pair<uint32_t, double>> project_stabilizer(const StabilizerSet &stabs, size_t id) const;
};

/// The trivial reduction: one class per non-identity Pauli string.
SymmetryReduction identity_reduction(int n_qubits);
SymmetryReduction symmetry_reduction(const PauliVector &v, double tol = 1e-10);

struct Orbit {
    std::vector<Hyperplane> members;
    bool truncated = false;
};
/// Closure of h under every Clifford generator and the global reflections,
/// in breadth-first order, cut at max_size.
Orbit symmetry_orbit(const Hyperplane &h, size_t max_size);

/// {"n": N, "a": {"idx": coeff, ...}, "b": b, "verified": bool}
std::string to_json_line(const Hyperplane &h);
Hyperplane hyperplane_from_json(std::string_view line);
/// One hyperplane per line; blank lines and lines starting with '#' are skipped.
std::vector<Hyperplane> read_facet_library(const std::filesystem::path &path);
void write_facet_library(const std::vector<Hyperplane> &facets, const std::filesystem::path &path);

}  // namespace stabmagic

#endif

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

#ifndef STABMAGIC_MAGIC_H
#define STABMAGIC_MAGIC_H

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stabmagic/lp.h"
#include "stabmagic/pauli.h"
#include "stabmagic/polytope.h"
#include "stabmagic/stabilizers.h"

namespace stabmagic {

struct MeasureOptions {
    int threads = 1;
    /// Rows handed back by the oracle per scan.
    size_t oracle_batch = 64;
    size_t max_rounds = 10'000;
    double tol = 1e-9;
    /// Restrict the LPs to the subspace fixed by the state's symmetries.
    bool symmetry = true;
};

struct LpStats {
    size_t rounds = 0;
    size_t generated_rows = 0;
    size_t pivots = 0;
};

/// (1/2^N) sum_k |v_k|.
double stabilizer_norm(const PauliVector &v);

struct MonotoneResult {
    /// max(1, optimum).
    double value = 1;
    /// The LP optimum before the clamp.
    double optimum = 0;
    /// Integer witness with b = b(a) checked by bound(); a = 0, b = 0 when the
    /// trivial hyperplane wins.
    Hyperplane witness;
    bool witness_integer = true;
    /// The optimal a as returned by the LP (full coordinates, a[0] = 0).
    std::vector<double> real_witness;
    LpStats stats;
};

/// The polytope gauge: max a . v' subject to a . S_i' <= 1 for all i, primes
/// dropping the identity component, solved by row generation.
MonotoneResult monotone_M_exact(const PauliVector &v, const StabilizerSet &stabs, const MeasureOptions &options = {});

struct SearchOptions {
    /// Cap on steepest-ascent steps summed over all seeds.
    size_t budget = 20'000;
    /// Largest coefficient magnitude the search may reach.
    int max_coefficient = 64;
    /// Extra seeds.
    std::vector<Hyperplane> library;
    /// Orbit members evaluated around the best hyperplane found.
    size_t orbit_size = 64;
    int threads = 1;
};

struct SearchResult {
    /// Best ratio a . v / b(a) found, at least 1.
    double value = 1;
    Hyperplane hyperplane;
    size_t steps = 0;
    size_t bound_evaluations = 0;
};

/// Discrete search over integer a: steepest-ascent single-coordinate moves
/// on a . v' / b(a), seeded from sgn(v), the library and symmetry images of
/// the best hyperplane. Always a lower bound on the exact value.
SearchResult monotone_M_search(const PauliVector &v, const StabilizerSet &stabs, const SearchOptions &options = {});

struct WitnessResult {
    /// max(0, t*).
    double value = 0;
    /// The maximizing a (full coordinates, a[0] = 0).
    std::vector<double> a;
    LpStats stats;
};

/// max t subject to a . v' - a . S_i' >= t for every i, -1 <= a_k <= 1.
WitnessResult witness_W(const PauliVector &v, const StabilizerSet &stabs, const MeasureOptions &options = {});

enum class YNorm { kL2, kLinf };

struct YResult {
    double value = 0;
    /// True when the value is only a lower bound on the maximum.
    bool lower_bound_only = false;
};

/// max (a . v' - b(a)) / ||a||. The infinity norm reduces to W; for the
/// Euclidean norm the best of the W maximizer and the M witness, each
/// normalized, is reported as a lower bound.
YResult witness_Y(const PauliVector &v, const StabilizerSet &stabs, YNorm norm, const MeasureOptions &options = {});

struct RomDecomposition {
    std::map<size_t, double> coefficients;
    double l1_norm = 0;
};

struct RomResult {
    double value = 1;
    RomDecomposition decomposition;
};

/// min sum |x_i| subject to sum x_i S_i = v, by the dense simplex. N >= 5
/// throws PolicyError.
RomResult robustness(const PauliVector &v, const StabilizerSet &stabs);
/// The dual form max y . v subject to |y . S_i| <= 1, by row generation.
/// Used as an independent cross-check.
double robustness_dual(const PauliVector &v, const StabilizerSet &stabs, const MeasureOptions &options = {});

struct ReportOptions {
    bool monotone = true;
    bool witness = true;
    bool st_norm = true;
    bool rom = true;
    bool search = false;
    SearchOptions search_options;
    MeasureOptions measure;
};

struct MagicReport {
    std::string state_label;
    int n_qubits = 0;
    std::optional<double> M;
    std::optional<double> W;
    std::optional<double> st_norm;
    std::optional<double> rom;
    std::optional<double> M_search;
    std::optional<Hyperplane> witness_hyperplane;
    std::vector<std::string> method_flags;
    /// Wall time per quantifier in seconds.
    std::map<std::string, double> seconds;

    bool magic_detected() const;
};

/// Computes the requested quantifiers over one shared enumeration. When both
/// M and W are computed, (M > 1) and (W > 0) must agree outside a 1e-6 band,
/// otherwise ConsistencyError is thrown.
MagicReport full_report(const std::string &label, const PauliVector &v, const StabilizerSet &stabs,
                        const ReportOptions &options = {});

/// Smallest mu in [start, end] with excess(mu) > eps: the first grid point
/// above eps, refined by bisection against the previous grid point to tol.
/// nullopt when no grid point exceeds eps.
std::optional<double> crossing_threshold(const std::function<double(double)> &excess, double start, double end,
                                         double step, double eps = 1e-9, double tol = 1e-6);

}  // namespace stabmagic

#endif

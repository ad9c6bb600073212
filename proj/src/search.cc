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

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "stabmagic/errors.h"
#include "stabmagic/magic.h"

namespace stabmagic {

namespace {

// Steepest ascent on r(a) = a . v / b(a) over integer a with |a_k| <= L.
//
// Keeps d_i = a . S_i for every stabilizer. One pass over the enumeration
// collects, for each Pauli index k, the largest d_i among stabilizers holding
// +P_k and -P_k, and how many stabilizers on each of the top levels hold P_k.
// From these b(a + delta e_k) is exact for |delta| < kLevels without another
// scan: stabilizers not holding P_k keep their value, and the largest of those
// is the top level that P_k does not cover completely.
class Ascent {
   public:
    static constexpr int kLevels = 8;

    Ascent(const PauliVector &v, const StabilizerSet &stabs)
        : v_(v), stabs_(stabs), p_(v.size()), d_(stabs.size()), pplus_(p_), pminus_(p_), cnt_(p_) {
    }

    void reset(std::vector<int32_t> a) {
        a_ = std::move(a);
        av_ = 0;
        for (size_t k = 1; k < p_; k++) {
            av_ += a_[k] * v_[k];
        }
        std::vector<int32_t> lut(2 * p_);
        for (size_t k = 0; k < p_; k++) {
            lut[k] = a_[k];
            lut[k + p_] = -a_[k];
        }
        b_ = INT32_MIN;
        for (size_t id = 0; id < stabs_.size(); id++) {
            int32_t acc = 0;
            for (uint16_t e : stabs_.packed(id)) {
                acc += lut[e];
            }
            d_[id] = acc;
            b_ = std::max(b_, acc);
        }
        passes_++;
        collect(0, 0, b_);
    }

    const std::vector<int32_t> &a() const {
        return a_;
    }
    int32_t b() const {
        return b_;
    }
    double ratio() const {
        return b_ > 0 ? av_ / b_ : -kInf;
    }
    size_t passes() const {
        return passes_;
    }

    struct Move {
        size_t k = 0;
        int delta = 0;
        int32_t new_b = 0;
        double ratio = -kInf;
    };

    /// Best strictly improving move with |a_k + delta| <= limit, if any.
    std::optional<Move> best_move(int limit) const {
        std::optional<Move> best;
        double current = ratio();
        double bar = current + 1e-12 * std::max(1.0, std::abs(current));
        for (size_t k = 1; k < p_; k++) {
            double vk = v_[k];
            // Largest d_i over stabilizers without P_k.
            int32_t comp = INT32_MIN;
            bool exact = false;
            for (int l = 0; l < kLevels; l++) {
                if (total_[l] > cnt_[k][l]) {
                    comp = b_ - l;
                    exact = true;
                    break;
                }
            }
            if (!exact) {
                comp = b_ - kLevels;
            }
            int lo = std::max(-kLevels + 1, -limit - a_[k]);
            int hi = std::min(kLevels - 1, limit - a_[k]);
            for (int delta = lo; delta <= hi; delta++) {
                if (delta == 0) {
                    continue;
                }
                int32_t held = std::max(pplus_[k] == INT32_MIN ? INT32_MIN : pplus_[k] + delta,
                                        pminus_[k] == INT32_MIN ? INT32_MIN : pminus_[k] - delta);
                if (!exact && held < b_ - kLevels) {
                    continue;  // the untracked levels could decide b
                }
                int32_t nb = std::max(comp, held);
                if (nb <= 0) {
                    continue;
                }
                double r = (av_ + delta * vk) / nb;
                if (r > bar && (!best || r > best->ratio)) {
                    best = Move{k, delta, nb, r};
                }
            }
        }
        return best;
    }

    void apply(const Move &m) {
        a_[m.k] += m.delta;
        av_ += m.delta * v_[m.k];
        passes_++;
        collect(m.k, m.delta, m.new_b);
        if (b_ != m.new_b) {
            throw ConsistencyError(fmt::format("search predicted b = {} but found {}", m.new_b, b_));
        }
    }

   private:
    // Applies a pending single-coordinate change to d, then gathers the
    // per-index statistics relative to the predicted top level.
    void collect(size_t move_k, int delta, int32_t predicted_b) {
        std::fill(pplus_.begin(), pplus_.end(), INT32_MIN);
        std::fill(pminus_.begin(), pminus_.end(), INT32_MIN);
        for (auto &c : cnt_) {
            c.fill(0);
        }
        total_.fill(0);
        const uint32_t mask = static_cast<uint32_t>(p_ - 1);
        const uint16_t plus_key = static_cast<uint16_t>(move_k);
        const uint16_t minus_key = static_cast<uint16_t>(move_k + p_);
        int32_t actual_b = INT32_MIN;
        for (size_t id = 0; id < stabs_.size(); id++) {
            auto entries = stabs_.packed(id);
            int32_t di = d_[id];
            if (delta != 0) {
                for (uint16_t e : entries) {
                    if (e == plus_key) {
                        di += delta;
                    } else if (e == minus_key) {
                        di -= delta;
                    }
                }
                d_[id] = di;
            }
            actual_b = std::max(actual_b, di);
            int level = predicted_b - di;
            bool tracked = level >= 0 && level < kLevels;
            if (tracked) {
                total_[level]++;
            }
            for (uint16_t e : entries) {
                uint32_t k = e & mask;
                if (e == k) {
                    pplus_[k] = std::max(pplus_[k], di);
                } else {
                    pminus_[k] = std::max(pminus_[k], di);
                }
                if (tracked) {
                    cnt_[k][level]++;
                }
            }
        }
        b_ = actual_b;
    }

    const PauliVector &v_;
    const StabilizerSet &stabs_;
    size_t p_;
    std::vector<int32_t> a_;
    std::vector<int32_t> d_;
    double av_ = 0;
    int32_t b_ = 0;
    std::vector<int32_t> pplus_;
    std::vector<int32_t> pminus_;
    std::vector<std::array<uint32_t, kLevels>> cnt_;
    std::array<uint64_t, kLevels> total_{};
    size_t passes_ = 0;
};

// The ascent in symmetry-adapted coordinates a = E z, where a move shifts
// a whole signed orbit of Pauli coordinates. b(E z) is the largest z . u over
// the distinct projected stabilizers u = E^T S_i; a symmetric state has few
// of them, so every candidate move is scored exactly and the neighbourhood
// can hold simultaneous moves of several classes.
class ClassSearch {
   public:
    /// Nullopt when the distinct rows would exceed max_entries integers.
    static std::optional<ClassSearch> build(const PauliVector &v, const StabilizerSet &stabs,
                                            const SymmetryReduction &red, size_t max_entries) {
        const size_t c = red.num_classes;
        std::set<std::vector<int16_t>> rows;
        std::vector<int16_t> u(c);
        for (size_t id = 0; id < stabs.size(); id++) {
            std::fill(u.begin(), u.end(), int16_t{0});
            for (uint16_t e : stabs.packed(id)) {
                uint32_t k = stabs.unpack_index(e);
                if (red.cls[k] >= 0) {
                    u[static_cast<size_t>(red.cls[k])] += static_cast<int16_t>(red.sign[k] * stabs.unpack_sign(e));
                }
            }
            rows.insert(u);
            if (rows.size() * c > max_entries) {
                return std::nullopt;
            }
        }
        ClassSearch out;
        out.c_ = c;
        out.vz_ = red.project(v.values);
        out.red_ = &red;
        out.rows_.reserve(rows.size() * c);
        for (const auto &row : rows) {
            out.rows_.insert(out.rows_.end(), row.begin(), row.end());
        }
        out.n_rows_ = rows.size();
        out.d_.resize(out.n_rows_);
        out.build_moves();
        return out;
    }

    size_t num_classes() const {
        return c_;
    }
    size_t evaluations() const {
        return evaluations_;
    }
    const std::vector<double> &vz() const {
        return vz_;
    }

    /// Steepest ascent from z with lattice refinement; returns the best (z, b).
    std::pair<std::vector<int32_t>, int64_t> climb(std::vector<int32_t> z, int max_coefficient, size_t &steps,
                                                   size_t budget) {
        int limit = 1;
        for (int32_t x : z) {
            limit = std::max(limit, std::abs(x));
        }
        set(z);
        while (steps < budget) {
            double current = ratio();
            double bar = current + 1e-12 * std::max(1.0, std::abs(current));
            const Move *best = nullptr;
            double best_ratio = bar;
            for (const Move &m : moves_) {
                bool fits = true;
                double num = zv_;
                for (const auto &[cls, delta] : m) {
                    fits = fits && std::abs(z_[cls] + delta) <= limit;
                    num += delta * vz_[cls];
                }
                if (!fits || num <= 0) {
                    continue;
                }
                int64_t nb = moved_bound(m);
                if (nb > 0 && num / static_cast<double>(nb) > best_ratio) {
                    best_ratio = num / static_cast<double>(nb);
                    best = &m;
                }
            }
            if (best) {
                for (const auto &[cls, delta] : *best) {
                    z_[cls] += delta;
                }
                set(z_);
                steps++;
                continue;
            }
            if (2 * limit > max_coefficient) {
                break;
            }
            for (auto &x : z_) {
                x *= 2;
            }
            limit *= 2;
            set(z_);
        }
        return {z_, b_};
    }

   private:
    using Move = std::vector<std::pair<size_t, int>>;

    static constexpr size_t kMaxMoves = 20'000;
    static constexpr int kMaxDelta = 7;

    void build_moves() {
        // Largest K with (2K + 1)^C <= kMaxMoves.
        int k = 0;
        while (true) {
            double count = std::pow(2.0 * (k + 1) + 1.0, static_cast<double>(c_));
            if (count > static_cast<double>(kMaxMoves)) {
                break;
            }
            k++;
        }
        if (k >= 1) {
            std::vector<int> digits(c_, -k);
            while (true) {
                Move m;
                for (size_t i = 0; i < c_; i++) {
                    if (digits[i] != 0) {
                        m.push_back({i, digits[i]});
                    }
                }
                if (!m.empty()) {
                    moves_.push_back(std::move(m));
                }
                size_t i = 0;
                while (i < c_ && digits[i] == k) {
                    digits[i++] = -k;
                }
                if (i == c_) {
                    break;
                }
                digits[i]++;
            }
            return;
        }
        for (size_t i = 0; i < c_; i++) {
            for (int d = -kMaxDelta; d <= kMaxDelta; d++) {
                if (d != 0) {
                    moves_.push_back({{i, d}});
                }
            }
        }
        for (size_t i = 0; i < c_; i++) {
            for (size_t j = i + 1; j < c_; j++) {
                for (int di : {-1, 1}) {
                    for (int dj : {-1, 1}) {
                        moves_.push_back({{i, di}, {j, dj}});
                    }
                }
            }
        }
    }

    void set(const std::vector<int32_t> &z) {
        z_ = z;
        zv_ = 0;
        for (size_t i = 0; i < c_; i++) {
            zv_ += z_[i] * vz_[i];
        }
        b_ = INT64_MIN;
        for (size_t r = 0; r < n_rows_; r++) {
            int64_t acc = 0;
            const int16_t *u = &rows_[r * c_];
            for (size_t i = 0; i < c_; i++) {
                acc += static_cast<int64_t>(z_[i]) * u[i];
            }
            d_[r] = acc;
            b_ = std::max(b_, acc);
        }
        evaluations_++;
    }

    double ratio() const {
        return b_ > 0 ? zv_ / static_cast<double>(b_) : -kInf;
    }

    int64_t moved_bound(const Move &m) {
        int64_t nb = INT64_MIN;
        for (size_t r = 0; r < n_rows_; r++) {
            const int16_t *u = &rows_[r * c_];
            int64_t acc = d_[r];
            for (const auto &[cls, delta] : m) {
                acc += static_cast<int64_t>(delta) * u[cls];
            }
            nb = std::max(nb, acc);
        }
        evaluations_++;
        return nb;
    }

    size_t c_ = 0;
    std::vector<double> vz_;
    const SymmetryReduction *red_ = nullptr;
    std::vector<int16_t> rows_;
    size_t n_rows_ = 0;
    std::vector<Move> moves_;
    std::vector<int32_t> z_;
    std::vector<int64_t> d_;
    double zv_ = 0;
    int64_t b_ = 0;
    size_t evaluations_ = 0;
};

// Distinct projected rows times classes kept for the symmetric phase.
constexpr size_t kMaxClassRowEntries = 4'000'000;

double ratio_of(const Hyperplane &h, const PauliVector &v) {
    if (h.b <= 0) {
        return -kInf;
    }
    double av = 0;
    for (size_t k = 1; k < v.size(); k++) {
        av += static_cast<double>(h.a[k]) * v[k];
    }
    return av / static_cast<double>(h.b);
}

}  // namespace

SearchResult monotone_M_search(const PauliVector &v, const StabilizerSet &stabs, const SearchOptions &options) {
    if (v.n_qubits != stabs.n_qubits()) {
        throw DimensionError("state and stabilizer set have different qubit counts");
    }
    validate_state_vector(v, 1e-9);
    const size_t p = v.size();

    SearchResult result;
    result.hyperplane.n_qubits = v.n_qubits;
    result.hyperplane.a.assign(p, 0);
    result.hyperplane.b = 0;
    result.hyperplane.verified = true;
    double best_ratio = 1.0;

    Ascent ascent(v, stabs);
    auto climb = [&](std::vector<int32_t> a) {
        int limit = 1;
        for (size_t k = 1; k < p; k++) {
            limit = std::max(limit, std::abs(a[k]));
        }
        ascent.reset(std::move(a));
        while (result.steps < options.budget) {
            auto move = ascent.best_move(limit);
            if (move) {
                ascent.apply(*move);
                result.steps++;
                continue;
            }
            if (2 * limit > options.max_coefficient) {
                break;
            }
            // Refine the lattice: doubling a keeps the ratio and halves the step.
            std::vector<int32_t> doubled = ascent.a();
            for (auto &x : doubled) {
                x *= 2;
            }
            limit *= 2;
            ascent.reset(std::move(doubled));
        }
        if (ascent.b() > 0 && ascent.ratio() > best_ratio + 1e-12) {
            best_ratio = ascent.ratio();
            Hyperplane h;
            h.n_qubits = v.n_qubits;
            h.a.assign(ascent.a().begin(), ascent.a().end());
            h.b = ascent.b();
            h.verified = true;
            h.canonicalize();
            result.hyperplane = std::move(h);
            return true;
        }
        return false;
    };

    std::vector<std::vector<int32_t>> seeds;
    std::vector<int32_t> sgn(p, 0);
    bool nonzero = false;
    for (size_t k = 1; k < p; k++) {
        if (v[k] > 1e-12) {
            sgn[k] = 1;
        } else if (v[k] < -1e-12) {
            sgn[k] = -1;
        }
        nonzero = nonzero || sgn[k] != 0;
    }
    if (nonzero) {
        seeds.push_back(std::move(sgn));
    }
    for (const auto &h : options.library) {
        if (h.n_qubits != v.n_qubits || h.a.size() != p) {
            continue;
        }
        std::vector<int32_t> a(p, 0);
        bool fits = true;
        for (size_t k = 1; k < p; k++) {
            fits = fits && std::abs(h.a[k]) <= options.max_coefficient;
            a[k] = static_cast<int32_t>(h.a[k]);
        }
        if (fits) {
            seeds.push_back(std::move(a));
        }
    }
    // Every seed is scored; the budget only limits the steps taken from them.
    for (auto &seed : seeds) {
        climb(std::move(seed));
    }

    // Symmetry images of the best hyperplane share its b; restart from any
    // image that scores higher on this state.
    while (result.hyperplane.b > 0 && options.orbit_size > 0 && result.steps < options.budget) {
        Orbit orbit = symmetry_orbit(result.hyperplane, options.orbit_size);
        const Hyperplane *best_image = nullptr;
        double best_image_ratio = best_ratio + 1e-12;
        for (const auto &h : orbit.members) {
            double r = ratio_of(h, v);
            if (r > best_image_ratio) {
                best_image = &h;
                best_image_ratio = r;
            }
        }
        if (!best_image) {
            break;
        }
        std::vector<int32_t> a(best_image->a.begin(), best_image->a.end());
        if (!climb(std::move(a))) {
            break;
        }
    }
    // Moves along whole symmetry orbits reach hyperplanes that single
    // coordinate steps cannot, since those leave the symmetric subspace.
    const SymmetryReduction red = symmetry_reduction(v);
    size_t class_evaluations = 0;
    std::optional<ClassSearch> classes;
    if (red.generators > 0 && red.num_classes > 0 && result.steps < options.budget) {
        classes = ClassSearch::build(v, stabs, red, kMaxClassRowEntries);
    }
    if (classes) {
        auto record = [&](const std::pair<std::vector<int32_t>, int64_t> &found) {
            const auto &[z, b] = found;
            double zv = 0;
            for (size_t c = 0; c < z.size(); c++) {
                zv += z[c] * classes->vz()[c];
            }
            if (b <= 0 || zv / static_cast<double>(b) <= best_ratio + 1e-12) {
                return;
            }
            Hyperplane h;
            h.n_qubits = v.n_qubits;
            h.a.assign(p, 0);
            for (size_t k = 0; k < p; k++) {
                if (red.cls[k] >= 0) {
                    h.a[k] = red.sign[k] * z[static_cast<size_t>(red.cls[k])];
                }
            }
            // Cross-check the projected bound against the full enumeration.
            h.b = bound(h.a, stabs, options.threads).b;
            if (h.b != b) {
                throw ConsistencyError(fmt::format("symmetric search bound {} disagrees with full scan {}", b, h.b));
            }
            h.verified = true;
            h.canonicalize();
            best_ratio = zv / static_cast<double>(b);
            result.hyperplane = std::move(h);
        };
        std::vector<int32_t> zsgn(classes->num_classes(), 0);
        for (size_t c = 0; c < zsgn.size(); c++) {
            double x = classes->vz()[c];
            zsgn[c] = x > 1e-12 ? 1 : (x < -1e-12 ? -1 : 0);
        }
        record(classes->climb(std::move(zsgn), options.max_coefficient, result.steps, options.budget));
        if (result.hyperplane.b > 0 && result.steps < options.budget) {
            // Orbit average of the best hyperplane, rounded onto a finer lattice.
            std::vector<double> sum(red.num_classes, 0.0);
            std::vector<double> size(red.num_classes, 0.0);
            for (size_t k = 0; k < p; k++) {
                if (red.cls[k] >= 0) {
                    sum[static_cast<size_t>(red.cls[k])] += red.sign[k] * static_cast<double>(result.hyperplane.a[k]);
                    size[static_cast<size_t>(red.cls[k])] += 1;
                }
            }
            double scale = 0;
            for (size_t c = 0; c < sum.size(); c++) {
                scale = std::max(scale, std::abs(sum[c] / size[c]));
            }
            if (scale > 0) {
                std::vector<int32_t> z(red.num_classes);
                for (size_t c = 0; c < z.size(); c++) {
                    z[c] = static_cast<int32_t>(std::lround(8.0 * sum[c] / size[c] / scale));
                }
                record(classes->climb(std::move(z), options.max_coefficient, result.steps, options.budget));
            }
        }
        class_evaluations = classes->evaluations();
        if (result.hyperplane.b > 0 && result.steps < options.budget) {
            std::vector<int32_t> a(result.hyperplane.a.begin(), result.hyperplane.a.end());
            bool fits = std::all_of(a.begin(), a.end(), [&](int32_t x) { return std::abs(x) <= options.max_coefficient; });
            if (fits) {
                climb(std::move(a));
            }
        }
    }
    result.bound_evaluations = ascent.passes() + class_evaluations;
    result.value = std::max(1.0, best_ratio);
    return result;
}

}  // namespace stabmagic

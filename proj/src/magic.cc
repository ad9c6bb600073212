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

#include "stabmagic/magic.h"

#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "stabmagic/errors.h"
#include "stabmagic/rational.h"

namespace stabmagic {

namespace {

void check_state(const PauliVector &v, const StabilizerSet &stabs) {
    if (v.n_qubits != stabs.n_qubits()) {
        throw DimensionError(fmt::format("{}-qubit state against a {}-qubit enumeration", v.n_qubits, stabs.n_qubits()));
    }
    validate_state_vector(v, 1e-9);
}

LpStats stats_of(const LpSolution &s) {
    return {s.rounds, s.generated_rows, s.iterations};
}

void require_optimal(const LpSolution &s, const char *what) {
    if (s.status != LpStatus::kOptimal) {
        throw SolverError(fmt::format("{} LP ended {}", what, to_string(s.status)));
    }
}

}  // namespace

double stabilizer_norm(const PauliVector &v) {
    double acc = 0;
    for (double x : v.values) {
        acc += std::abs(x);
    }
    return acc / static_cast<double>(hilbert_dim(v.n_qubits));
}

namespace {

SymmetryReduction reduction_for(const PauliVector &v, const MeasureOptions &options) {
    return options.symmetry ? symmetry_reduction(v) : identity_reduction(v.n_qubits);
}

// Stabilizer rows in reduced coordinates. Symmetric images of one stabilizer
// collapse onto a single row, so the scan asks for more candidates than it
// keeps and labels each distinct row by the first id that produced it.
class ReducedRows {
   public:
    ReducedRows(const SymmetryReduction &red, const StabilizerSet &stabs, const MeasureOptions &options)
        : red_(red), stabs_(stabs), options_(options) {
    }

    template <typename Emit>
    void collect(std::span<const double> full, double threshold, Emit &&emit) {
        size_t want = options_.oracle_batch;
        size_t scan = red_.generators > 0 ? 16 * want : want;
        size_t kept = 0;
        std::set<uint64_t> batch_keys;
        for (const auto &s : top_dots(full, stabs_, threshold, scan, options_.threads)) {
            auto row = red_.project_stabilizer(stabs_, s.id);
            auto [it, inserted] = keys_.emplace(row, s.id);
            if (!batch_keys.insert(it->second).second) {
                continue;
            }
            emit(it->first, it->second);
            if (++kept == want) {
                break;
            }
        }
    }

   private:
    const SymmetryReduction &red_;
    const StabilizerSet &stabs_;
    const MeasureOptions &options_;
    std::map<std::vector<std::pair<uint32_t, double>>, uint64_t> keys_;
};

RowGenerationOptions row_options(const MeasureOptions &options) {
    RowGenerationOptions rg;
    rg.tol = options.tol;
    rg.max_rounds = options.max_rounds;
    return rg;
}

}  // namespace

MonotoneResult monotone_M_exact(const PauliVector &v, const StabilizerSet &stabs, const MeasureOptions &options) {
    check_state(v, stabs);
    const SymmetryReduction red = reduction_for(v, options);
    const size_t n = red.num_classes;
    // |a_k| <= 1 holds for every feasible a: the stabilizers with a fixed
    // sign on P_k average to the unit vector along k.
    LpProblem p = LpProblem::with_variables(n, -1.0, 1.0);
    p.objective = red.project(v.values);
    ReducedRows reduced(red, stabs, options);
    RowOracle oracle = [&](std::span<const double> x, double tol) {
        std::vector<OracleRow> rows;
        reduced.collect(red.expand(x), 1.0 + tol, [&](const auto &entries, uint64_t key) {
            rows.push_back({entries, 1.0, key});
        });
        return rows;
    };
    LpSolution sol;
    sol.status = LpStatus::kOptimal;
    if (n > 0) {
        sol = solve_with_rows(p, oracle, row_options(options));
    }
    require_optimal(sol, "gauge");

    MonotoneResult out;
    out.optimum = sol.objective_value;
    out.value = std::max(1.0, sol.objective_value);
    out.stats = stats_of(sol);
    out.real_witness = red.expand(sol.x);

    out.witness.n_qubits = v.n_qubits;
    out.witness.a.assign(v.size(), 0);
    out.witness.b = 0;
    out.witness.verified = true;
    if (sol.objective_value <= 1.0 + options.tol) {
        return out;
    }
    // Rationalize (a, 1), scale to primitive integers and re-derive b exactly.
    std::vector<Rational> joint;
    for (size_t k = 1; k < v.size(); k++) {
        joint.push_back(rationalize(out.real_witness[k], 1'000'000));
    }
    joint.push_back(Rational(1));
    auto ints = primitive_integer_vector(joint);
    bool fits = true;
    for (const auto &z : ints) {
        fits = fits && z.fits_slong_p() && abs(z) < (mpz_class(1) << 40);
    }
    if (fits) {
        Hyperplane h;
        h.n_qubits = v.n_qubits;
        h.a.assign(v.size(), 0);
        for (size_t k = 1; k < v.size(); k++) {
            h.a[k] = ints[k - 1].get_si();
        }
        h.b = bound(h.a, stabs, options.threads).b;
        h.verified = true;
        double ratio = 0;
        if (h.b > 0) {
            for (size_t k = 0; k < v.size(); k++) {
                ratio += static_cast<double>(h.a[k]) * v[k];
            }
            ratio /= static_cast<double>(h.b);
        }
        if (h.b > 0 && std::abs(ratio - sol.objective_value) <= 1e-7 * std::max(1.0, sol.objective_value)) {
            out.witness = std::move(h);
            return out;
        }
    }
    out.witness_integer = false;
    out.witness.verified = false;
    return out;
}

WitnessResult witness_W(const PauliVector &v, const StabilizerSet &stabs, const MeasureOptions &options) {
    check_state(v, stabs);
    const SymmetryReduction red = reduction_for(v, options);
    const size_t n = red.num_classes;
    const double t_cap = 2.0 * static_cast<double>(v.size() - 1) + 1.0;
    LpProblem p = LpProblem::with_variables(n + 1, -1.0, 1.0);
    p.lower[n] = -t_cap;
    p.upper[n] = t_cap;
    p.objective[n] = 1.0;
    const std::vector<double> vz = red.project(v.values);
    ReducedRows reduced(red, stabs, options);
    RowOracle oracle = [&](std::span<const double> x, double tol) {
        double av = 0;
        for (size_t c = 0; c < n; c++) {
            av += x[c] * vz[c];
        }
        std::vector<OracleRow> rows;
        reduced.collect(red.expand(x.first(n)), av - x[n] + tol, [&](const auto &entries, uint64_t key) {
            // a . (S_i' - v') + t <= 0
            std::vector<double> coeff(n);
            for (size_t c = 0; c < n; c++) {
                coeff[c] = -vz[c];
            }
            for (auto [c, sgn] : entries) {
                coeff[c] += sgn;
            }
            OracleRow row;
            for (size_t c = 0; c < n; c++) {
                if (coeff[c] != 0.0) {
                    row.entries.push_back({static_cast<uint32_t>(c), coeff[c]});
                }
            }
            row.entries.push_back({static_cast<uint32_t>(n), 1.0});
            row.rhs = 0.0;
            row.key = key;
            rows.push_back(std::move(row));
        });
        return rows;
    };
    LpSolution sol = solve_with_rows(p, oracle, row_options(options));
    require_optimal(sol, "witness");
    WitnessResult out;
    out.value = std::max(0.0, sol.objective_value);
    out.a = red.expand(std::span<const double>(sol.x).first(n));
    out.stats = stats_of(sol);
    return out;
}

YResult witness_Y(const PauliVector &v, const StabilizerSet &stabs, YNorm norm, const MeasureOptions &options) {
    WitnessResult w = witness_W(v, stabs, options);
    if (norm == YNorm::kLinf) {
        return {w.value, false};
    }
    auto normalized_gap = [&](const std::vector<double> &a) {
        double norm2 = 0;
        double av = 0;
        for (size_t k = 1; k < a.size(); k++) {
            norm2 += a[k] * a[k];
            av += a[k] * v[k];
        }
        if (norm2 == 0) {
            return 0.0;
        }
        double b = bound_real(a, stabs, options.threads).b;
        return (av - b) / std::sqrt(norm2);
    };
    double best = std::max(0.0, normalized_gap(w.a));
    MonotoneResult m = monotone_M_exact(v, stabs, options);
    best = std::max(best, normalized_gap(m.real_witness));
    return {best, true};
}

RomResult robustness(const PauliVector &v, const StabilizerSet &stabs) {
    if (v.n_qubits >= 5) {
        throw PolicyError("robustness of magic is refused for N >= 5 (dense LP over 2.4M stabilizer states)");
    }
    check_state(v, stabs);
    const size_t ds = stabs.size();
    LpProblem p = LpProblem::with_variables(2 * ds, 0.0, kInf);
    p.sense = Sense::kMinimize;
    std::fill(p.objective.begin(), p.objective.end(), 1.0);
    p.constraints.resize(v.size());
    for (size_t k = 0; k < v.size(); k++) {
        p.constraints[k].coeffs.assign(2 * ds, 0.0);
        p.constraints[k].relation = Relation::kEqual;
        p.constraints[k].rhs = v[k];
    }
    for (size_t id = 0; id < ds; id++) {
        for (uint16_t e : stabs.packed(id)) {
            double s = stabs.unpack_sign(e);
            p.constraints[stabs.unpack_index(e)].coeffs[id] = s;
            p.constraints[stabs.unpack_index(e)].coeffs[ds + id] = -s;
        }
    }
    LpSolution sol = solve(p);
    require_optimal(sol, "robustness");
    RomResult out;
    out.value = sol.objective_value;
    for (size_t id = 0; id < ds; id++) {
        double x = sol.x[id] - sol.x[ds + id];
        if (std::abs(x) > 1e-12) {
            out.decomposition.coefficients[id] = x;
            out.decomposition.l1_norm += std::abs(x);
        }
    }
    return out;
}

double robustness_dual(const PauliVector &v, const StabilizerSet &stabs, const MeasureOptions &options) {
    check_state(v, stabs);
    const SymmetryReduction red = reduction_for(v, options);
    const size_t n = red.num_classes;
    // Variables (y_0, z). Averaging stabilizers with a fixed sign on P_k
    // bounds |y_0 +- y_k| by 1, hence the unit box.
    LpProblem p = LpProblem::with_variables(n + 1, -1.0, 1.0);
    p.objective[0] = v[0];
    const std::vector<double> vz = red.project(v.values);
    std::copy(vz.begin(), vz.end(), p.objective.begin() + 1);
    ReducedRows up_rows(red, stabs, options);
    ReducedRows down_rows(red, stabs, options);
    RowOracle oracle = [&](std::span<const double> y, double tol) {
        std::vector<double> a = red.expand(y.subspan(1));
        std::vector<std::pair<double, OracleRow>> merged;
        auto add = [&](double s, uint64_t key, const auto &entries) {
            OracleRow r;
            r.entries.push_back({0, s});
            for (auto [c, x] : entries) {
                r.entries.push_back({c + 1, s * x});
            }
            r.rhs = 1.0;
            r.key = key;
            double value = 0;
            for (auto [k, x] : r.entries) {
                value += x * y[k];
            }
            merged.push_back({value, std::move(r)});
        };
        // y . S_i = y_0 + a . S_i'
        up_rows.collect(a, 1.0 - y[0] + tol, [&](const auto &e, uint64_t key) { add(1.0, 2 * key, e); });
        for (auto &x : a) {
            x = -x;
        }
        down_rows.collect(a, 1.0 + y[0] + tol, [&](const auto &e, uint64_t key) { add(-1.0, 2 * key + 1, e); });
        std::stable_sort(merged.begin(), merged.end(), [](const auto &x, const auto &y) { return x.first > y.first; });
        std::vector<OracleRow> rows;
        for (auto &m : merged) {
            rows.push_back(std::move(m.second));
        }
        return rows;
    };
    LpSolution sol = solve_with_rows(p, oracle, row_options(options));
    require_optimal(sol, "robustness dual");
    return sol.objective_value;
}

bool MagicReport::magic_detected() const {
    return M && *M > 1.0 + 1e-9;
}

MagicReport full_report(const std::string &label, const PauliVector &v, const StabilizerSet &stabs,
                        const ReportOptions &options) {
    using Clock = std::chrono::steady_clock;
    auto timed = [](auto &&fn) {
        auto t0 = Clock::now();
        fn();
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };
    check_state(v, stabs);
    MagicReport r;
    r.state_label = label;
    r.n_qubits = v.n_qubits;
    if (options.st_norm) {
        r.seconds["ST"] = timed([&] { r.st_norm = stabilizer_norm(v); });
        r.method_flags.push_back("st:closed-form");
    }
    if (options.monotone) {
        r.seconds["M"] = timed([&] {
            MonotoneResult m = monotone_M_exact(v, stabs, options.measure);
            r.M = m.value;
            r.witness_hyperplane = m.witness;
        });
        r.method_flags.push_back("M:row-generation");
    }
    if (options.search) {
        r.seconds["M_search"] = timed([&] {
            SearchResult s = monotone_M_search(v, stabs, options.search_options);
            r.M_search = s.value;
            if (!r.witness_hyperplane) {
                r.witness_hyperplane = s.hyperplane;
            }
        });
        r.method_flags.push_back("M:discrete-search");
    }
    if (options.witness) {
        r.seconds["W"] = timed([&] { r.W = witness_W(v, stabs, options.measure).value; });
        r.method_flags.push_back("W:row-generation");
    }
    if (options.rom) {
        r.seconds["RoM"] = timed([&] { r.rom = robustness(v, stabs).value; });
        r.method_flags.push_back("RoM:simplex");
    }
    if (r.M && r.W) {
        bool m_pos = *r.M - 1.0 > 1e-6;
        bool w_pos = *r.W > 1e-6 * static_cast<double>(hilbert_dim(v.n_qubits));
        if ((m_pos && *r.W <= 1e-9) || (w_pos && *r.M - 1.0 <= 1e-9)) {
            throw ConsistencyError(fmt::format("monotone M = {} and witness W = {} disagree on magic", *r.M, *r.W));
        }
    }
    return r;
}

std::optional<double> crossing_threshold(const std::function<double(double)> &excess, double start, double end,
                                         double step, double eps, double tol) {
    if (!(step > 0) || start > end) {
        throw ValidationError("threshold grid needs start <= end and step > 0");
    }
    double prev = start;
    for (size_t j = 0;; j++) {
        double mu = std::min(end, start + static_cast<double>(j) * step);
        if (excess(mu) > eps) {
            if (j == 0) {
                return mu;
            }
            double lo = prev;
            double hi = mu;
            while (hi - lo > tol) {
                double mid = 0.5 * (lo + hi);
                if (excess(mid) > eps) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        }
        if (mu >= end) {
            return std::nullopt;
        }
        prev = mu;
    }
}

}  // namespace stabmagic

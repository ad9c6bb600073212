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

#include "stabmagic/cli.h"

#include <array>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "stabmagic/errors.h"
#include "stabmagic/magic.h"
#include "stabmagic/polytope.h"
#include "stabmagic/stabilizers.h"
#include "stabmagic/states.h"

namespace stabmagic {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
    return fmt::format("{:.12f}", x);
}

struct CommonFlags {
    std::string stab_cache;
    std::string facet_lib;
    int threads = 1;
    bool allow_large = false;
};

StabilizerSet load_stabilizers(int n, const CommonFlags &flags, std::ostream &err) {
    if (n >= 5 && !flags.allow_large) {
        throw CapacityError(fmt::format("N = {} needs --allow-large (2,423,520 stabilizer states at N = 5)", n));
    }
    if (!flags.stab_cache.empty() && std::filesystem::exists(flags.stab_cache)) {
        StabilizerSet set = read_stabilizer_cache(flags.stab_cache);
        if (set.n_qubits() != n) {
            throw ValidationError(fmt::format("cache {} holds N = {}, expected N = {}", flags.stab_cache, set.n_qubits(), n));
        }
        return set;
    }
    auto t0 = Clock::now();
    StabilizerSet set = enumerate_stabilizers(n, flags.allow_large);
    err << fmt::format("# enumerated {} stabilizer states in {:.3f} s\n", set.size(), seconds_since(t0));
    if (!flags.stab_cache.empty()) {
        write_stabilizer_cache(set, flags.stab_cache);
    }
    return set;
}

struct Quantifiers {
    bool M = false, W = false, ST = false, RoM = false, search = false;
};

Quantifiers parse_quantifiers(const std::string &text, int n, bool for_sweep) {
    Quantifiers q;
    if (text.empty()) {
        q.M = q.W = q.ST = true;
        q.RoM = n <= 4;
        return q;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "M") {
            q.M = true;
        } else if (item == "W") {
            q.W = true;
        } else if (item == "ST") {
            q.ST = true;
        } else if (item == "RoM") {
            q.RoM = true;
        } else if (item == "search" && !for_sweep) {
            q.search = true;
        } else {
            throw ParseError(fmt::format("unknown quantifier \"{}\"", item));
        }
    }
    if (q.RoM && n >= 5) {
        throw PolicyError("robustness of magic is refused for N >= 5");
    }
    return q;
}

Json hyperplane_json(const Hyperplane &h) {
    return Json::parse(to_json_line(h));
}

int cmd_enumerate(int n, const CommonFlags &flags, std::ostream &out, std::ostream &err) {
    if (n < 1) {
        throw ParseError(fmt::format("N must be at least 1, got {}", n));
    }
    StabilizerSet set = load_stabilizers(n, flags, err);
    if (set.size() != stabilizer_count(n)) {
        err << fmt::format("error: found {} stabilizer states, expected {}\n", set.size(), stabilizer_count(n));
        return kExitVerify;
    }
    out << "D_S=" << set.size() << "\n";
    return kExitOk;
}

std::vector<Hyperplane> library_of(const CommonFlags &flags) {
    if (flags.facet_lib.empty()) {
        return {};
    }
    return read_facet_library(flags.facet_lib);
}

int cmd_eval(const std::string &expr, const std::string &quantifiers, const CommonFlags &flags, std::ostream &out,
             std::ostream &err) {
    ParsedState state = parse_state(expr);
    Quantifiers q = parse_quantifiers(quantifiers, state.n_qubits, false);
    StabilizerSet stabs = load_stabilizers(state.n_qubits, flags, err);

    ReportOptions options;
    options.monotone = q.M;
    options.witness = q.W;
    options.st_norm = q.ST;
    options.rom = q.RoM;
    options.search = q.search;
    options.measure.threads = flags.threads;
    options.search_options.threads = flags.threads;
    options.search_options.library = library_of(flags);
    MagicReport r = full_report(state.label, state.vector, stabs, options);

    Json j;
    j["state"] = r.state_label;
    j["n"] = r.n_qubits;
    if (r.M) {
        j["M"] = *r.M;
    }
    if (r.M_search) {
        j["M_search"] = *r.M_search;
    }
    if (r.W) {
        j["W"] = *r.W;
    }
    if (r.st_norm) {
        j["st_norm"] = *r.st_norm;
    }
    if (r.rom) {
        j["rom"] = *r.rom;
    }
    j["magic_detected"] = r.M ? r.magic_detected() : (r.M_search && *r.M_search > 1.0 + 1e-9);
    if (r.witness_hyperplane) {
        j["witness"] = hyperplane_json(*r.witness_hyperplane);
    }
    j["methods"] = r.method_flags;
    Json manifest;
    manifest["version"] = kVersion;
    manifest["N"] = state.n_qubits;
    manifest["D_S"] = stabs.size();
    manifest["seconds"] = r.seconds;
    manifest["threads"] = flags.threads;
    j["manifest"] = std::move(manifest);
    out << j.dump(2) << "\n";
    return kExitOk;
}

struct SweepRow {
    double mu = 0;
    double M = 0, W = 0, ST = 0, RoM = 0;
};

int cmd_sweep(const std::string &expr, double mu_start, double mu_end, double mu_step, const std::string &quantifiers,
              const std::string &output, const std::string &format, bool raw, const CommonFlags &flags,
              std::ostream &out, std::ostream &err) {
    if (!(mu_start >= 0 && mu_start <= mu_end && mu_end <= 1 && mu_step > 0)) {
        throw ParseError("sweep needs 0 <= mu-start <= mu-end <= 1 and mu-step > 0");
    }
    if (format != "csv" && format != "jsonl") {
        throw ParseError(fmt::format("unknown format \"{}\"", format));
    }
    ParsedState base = parse_state(expr);
    Quantifiers q = parse_quantifiers(quantifiers, base.n_qubits, true);
    StabilizerSet stabs = load_stabilizers(base.n_qubits, flags, err);

    std::vector<double> grid;
    for (size_t j = 0;; j++) {
        double mu = mu_start + static_cast<double>(j) * mu_step;
        if (mu > mu_end + 1e-12) {
            break;
        }
        grid.push_back(std::min(mu, mu_end));
    }
    std::vector<SweepRow> rows(grid.size());
    std::array<std::atomic<int64_t>, 4> micros{};
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            size_t i = next++;
            if (i >= grid.size()) {
                return;
            }
            try {
                SweepRow &row = rows[i];
                row.mu = grid[i];
                PauliVector v = werner_vector(base.vector, row.mu);
                auto time = [&](int slot, auto &&fn) {
                    auto t0 = Clock::now();
                    fn();
                    micros[slot] += static_cast<int64_t>(seconds_since(t0) * 1e6);
                };
                if (q.M) {
                    time(0, [&] { row.M = monotone_M_exact(v, stabs).value; });
                }
                if (q.W) {
                    time(1, [&] { row.W = witness_W(v, stabs).value; });
                }
                if (q.ST) {
                    time(2, [&] { row.ST = stabilizer_norm(v); });
                }
                if (q.RoM) {
                    time(3, [&] { row.RoM = robustness(v, stabs).value; });
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = grid.size();
                return;
            }
        }
    };
    int threads = std::max(1, flags.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; t++) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::ofstream file;
    std::ostream *sink = &out;
    if (!output.empty() && output != "-") {
        file.open(output);
        if (!file) {
            throw std::runtime_error(fmt::format("cannot write {}", output));
        }
        sink = &file;
    }
    std::vector<std::string> names;
    names.push_back("mu");
    if (q.M) {
        names.push_back("M");
    }
    if (q.W) {
        names.push_back(raw ? "W" : "W_plus_1");
    }
    if (q.ST) {
        names.push_back(raw ? "st_norm" : "ST");
    }
    if (q.RoM) {
        names.push_back("RoM");
    }
    auto values_of = [&](const SweepRow &r) {
        std::vector<double> vals{r.mu};
        if (q.M) {
            vals.push_back(r.M);
        }
        if (q.W) {
            vals.push_back(raw ? r.W : r.W + 1.0);
        }
        if (q.ST) {
            vals.push_back(raw ? r.ST : std::max(1.0, r.ST));
        }
        if (q.RoM) {
            vals.push_back(r.RoM);
        }
        return vals;
    };
    std::string qlist;
    for (size_t i = 1; i < names.size(); i++) {
        qlist += (i > 1 ? "," : "") + names[i];
    }
    if (format == "csv") {
        *sink << fmt::format("{}\n", fmt::join(names, ","));
        for (const auto &r : rows) {
            std::vector<std::string> cells;
            for (double x : values_of(r)) {
                cells.push_back(num(x));
            }
            *sink << fmt::format("{}\n", fmt::join(cells, ","));
        }
        *sink << fmt::format("# stabmagic {} state={} N={} D_S={} columns={} raw={}\n", kVersion, base.label,
                             base.n_qubits, stabs.size(), qlist, raw ? 1 : 0);
    } else {
        for (const auto &r : rows) {
            Json j;
            auto vals = values_of(r);
            for (size_t i = 0; i < names.size(); i++) {
                j[names[i]] = vals[i];
            }
            *sink << j.dump() << "\n";
        }
        Json m;
        m["manifest"] = {{"version", kVersion}, {"state", base.label}, {"N", base.n_qubits},
                         {"D_S", stabs.size()},  {"columns", qlist},    {"raw", raw}};
        *sink << m.dump() << "\n";
    }
    // Timings vary run to run, so they stay out of the data file.
    err << fmt::format("# wall seconds: M={:.3f} W={:.3f} ST={:.3f} RoM={:.3f} threads={}\n", micros[0] * 1e-6,
                       micros[1] * 1e-6, micros[2] * 1e-6, micros[3] * 1e-6, threads);
    return kExitOk;
}

// "+XX -YY -2ZZ +XY" style sums of Pauli strings.
Hyperplane hyperplane_from_terms(const std::string &terms, int64_t b) {
    static const std::regex token(R"(([+-]?)\s*(\d*)\s*([IXYZ_]+))");
    std::vector<std::pair<std::string, int64_t>> parsed;
    std::string rest;
    int n = -1;
    auto begin = std::sregex_iterator(terms.begin(), terms.end(), token);
    size_t covered = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const auto &m = *it;
        for (size_t c = covered; c < static_cast<size_t>(m.position()); c++) {
            if (!std::isspace(static_cast<unsigned char>(terms[c]))) {
                throw ParseError(fmt::format("cannot parse facet terms \"{}\"", terms));
            }
        }
        covered = static_cast<size_t>(m.position() + m.length());
        int64_t coeff = m[2].length() ? std::stoll(m[2].str()) : 1;
        if (m[1].str() == "-") {
            coeff = -coeff;
        }
        std::string text = m[3].str();
        if (n >= 0 && static_cast<int>(text.size()) != n) {
            throw ParseError("facet terms have different lengths");
        }
        n = static_cast<int>(text.size());
        parsed.push_back({text, coeff});
    }
    for (size_t c = covered; c < terms.size(); c++) {
        if (!std::isspace(static_cast<unsigned char>(terms[c]))) {
            throw ParseError(fmt::format("cannot parse facet terms \"{}\"", terms));
        }
    }
    if (parsed.empty()) {
        throw ParseError("no facet terms given");
    }
    return Hyperplane::from_terms(n, parsed, b);
}

std::vector<Hyperplane> facets_from_flags(const CommonFlags &flags, const std::string &facet_json,
                                          const std::string &terms, int64_t b) {
    std::vector<Hyperplane> facets = library_of(flags);
    if (!facet_json.empty()) {
        facets.push_back(hyperplane_from_json(facet_json));
    }
    if (!terms.empty()) {
        facets.push_back(hyperplane_from_terms(terms, b));
    }
    if (facets.empty()) {
        throw ParseError("no facets given (use --facet-lib, --facet or --terms)");
    }
    return facets;
}

int cmd_facet_verify(const std::vector<Hyperplane> &facets, const CommonFlags &flags, std::ostream &out,
                     std::ostream &err) {
    int code = kExitOk;
    std::map<int, StabilizerSet> sets;
    for (const auto &h : facets) {
        if (!sets.contains(h.n_qubits)) {
            sets.emplace(h.n_qubits, load_stabilizers(h.n_qubits, flags, err));
        }
        const StabilizerSet &stabs = sets.at(h.n_qubits);
        BoundResult br = bound(h.a, stabs, flags.threads);
        int64_t lower = lower_bound(h.a, stabs, flags.threads);
        FaceCandidate face;
        std::vector<double> a(h.a.begin(), h.a.end());
        std::vector<double> dots(stabs.size());
        all_dots(a, stabs, dots, flags.threads);
        for (size_t id = 0; id < stabs.size(); id++) {
            if (dots[id] == static_cast<double>(br.b)) {
                face.stabilizer_ids.push_back(id);
            }
        }
        bool ok = br.b == h.b && is_boundary(h, face, stabs);
        Hyperplane reported = h;
        reported.verified = ok;
        Json j = hyperplane_json(reported);
        j["computed_b"] = br.b;
        j["lower_bound"] = lower;
        j["face_size"] = face.stabilizer_ids.size();
        j["face_rank"] = facet_through(face, stabs).family.rank;
        out << j.dump() << "\n";
        if (!ok) {
            err << fmt::format("facet {} does not verify: claimed b = {}, max over stabilizers = {} (id {})\n", h.str(),
                               h.b, br.b, br.argmax_id);
            code = kExitVerify;
        }
    }
    return code;
}

int cmd_facet_discover(const std::string &expr, size_t seed_size, const std::string &order, const CommonFlags &flags,
                       std::ostream &out, std::ostream &err) {
    ParsedState state = parse_state(expr);
    StabilizerSet stabs = load_stabilizers(state.n_qubits, flags, err);
    FaceCandidate seed = vicinity_seed(state.vector, stabs, seed_size);
    GrowOptions grow;
    if (order == "overlap") {
        grow.order_by = state.vector.values;
    } else if (order != "id") {
        throw ParseError(fmt::format("unknown growth order \"{}\"", order));
    }
    FaceCandidate face = grow_face(seed, stabs, grow);
    FacetResult result = facet_through(face, stabs);
    Json j;
    j["status"] = to_string(result.status);
    j["seed"] = seed.stabilizer_ids;
    j["face_size"] = face.stabilizer_ids.size();
    j["face"] = face.stabilizer_ids;
    if (result.status == FacetStatus::kVerified) {
        j["facet"] = hyperplane_json(result.hyperplane);
        j["terms"] = result.hyperplane.str();
        j["support"] = result.hyperplane.support_size();
    } else {
        j["message"] = result.message;
        j["free_parameters"] = result.family.null_basis.size();
    }
    out << j.dump() << "\n";
    return result.status == FacetStatus::kVerified ? kExitOk : kExitVerify;
}

int cmd_facet_orbit(const std::vector<Hyperplane> &facets, size_t max_size, std::ostream &out, std::ostream &err) {
    for (const auto &h : facets) {
        Orbit orbit = symmetry_orbit(h, max_size);
        for (const auto &m : orbit.members) {
            out << to_json_line(m) << "\n";
        }
        err << fmt::format("# orbit of {}: {} member(s){}\n", h.str(), orbit.members.size(),
                           orbit.truncated ? " (truncated)" : "");
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stabilizer polytope magic quantifiers", "stabmagic"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    CommonFlags flags;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--stab-cache", flags.stab_cache, "Binary enumeration cache (read if present, else written)");
        sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::Range(1, 256));
        sub->add_flag("--allow-large", flags.allow_large, "Permit the N = 5 enumeration");
    };

    int n = 0;
    auto *enumerate = app.add_subcommand("enumerate", "Enumerate pure stabilizer states and print D_S");
    enumerate->add_option("-N,--n", n, "Qubit count")->required();
    add_common(enumerate);

    std::string state_expr;
    std::string quantifiers;
    auto *eval = app.add_subcommand("eval", "Evaluate magic quantifiers of one state as JSON");
    eval->add_option("state", state_expr, "State expression, e.g. ghz:N=2,phi=0.7854")->required();
    eval->add_option("--quantifiers", quantifiers, "Comma list of M,W,ST,RoM,search");
    eval->add_option("--facet-lib", flags.facet_lib, "Facet library seeding the discrete search");
    add_common(eval);

    double mu_start = 0, mu_end = 1, mu_step = 0.01;
    std::string output, format = "csv";
    bool raw = false;
    auto *sweep = app.add_subcommand("sweep", "Werner-family sweep over mu");
    sweep->add_option("state", state_expr, "Pure base state expression")->required();
    sweep->add_option("--mu-start", mu_start, "First mu (default 0)");
    sweep->add_option("--mu-end", mu_end, "Last mu (default 1)");
    sweep->add_option("--mu-step", mu_step, "Grid step (default 0.01)");
    sweep->add_option("--quantifiers", quantifiers, "Comma list of M,W,ST,RoM");
    sweep->add_option("-o,--output", output, "Output path (default stdout)");
    sweep->add_option("--format", format, "csv or jsonl");
    sweep->add_flag("--raw", raw, "Print W and the stabilizer norm without the plotting offsets");
    add_common(sweep);

    std::string facet_json, terms;
    int64_t facet_b = 1;
    size_t max_size = 100000, seed_size = 2;
    std::string order = "id";
    auto *facet = app.add_subcommand("facet", "Facet verification, discovery and symmetry orbits");
    facet->require_subcommand(1);
    auto add_facet_input = [&](CLI::App *sub) {
        sub->add_option("--facet-lib", flags.facet_lib, "JSON-lines facet library");
        sub->add_option("--facet", facet_json, "One facet as a JSON object");
        sub->add_option("--terms", terms, "Facet as a sum of Pauli strings, e.g. \"+XX -YY -ZZ\"");
        sub->add_option("--b", facet_b, "Bound for --terms");
    };
    auto *verify = facet->add_subcommand("verify", "Check b(a) over the full enumeration");
    add_facet_input(verify);
    add_common(verify);
    auto *discover = facet->add_subcommand("discover", "Grow a face from stabilizers near a state and solve it");
    discover->add_option("--state", state_expr, "State whose vicinity seeds the face")->required();
    discover->add_option("--seed-size", seed_size, "Number of seed stabilizers");
    discover->add_option("--order", order, "Growth order: id or overlap");
    add_common(discover);
    auto *orbit = facet->add_subcommand("orbit", "Emit the symmetry orbit of each facet");
    add_facet_input(orbit);
    orbit->add_option("--max-size", max_size, "Truncate each orbit at this size");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (enumerate->parsed()) {
            return cmd_enumerate(n, flags, out, err);
        }
        if (eval->parsed()) {
            return cmd_eval(state_expr, quantifiers, flags, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(state_expr, mu_start, mu_end, mu_step, quantifiers, output, format, raw, flags, out, err);
        }
        if (verify->parsed()) {
            return cmd_facet_verify(facets_from_flags(flags, facet_json, terms, facet_b), flags, out, err);
        }
        if (discover->parsed()) {
            return cmd_facet_discover(state_expr, seed_size, order, flags, out, err);
        }
        if (orbit->parsed()) {
            return cmd_facet_orbit(facets_from_flags(flags, facet_json, terms, facet_b), max_size, out, err);
        }
    } catch (const PolicyError &e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const SolverError &e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const ConsistencyError &e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace stabmagic

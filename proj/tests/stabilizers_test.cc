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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "stabmagic/clifford.h"
#include "stabmagic/errors.h"

using namespace stabmagic;

namespace {

using Signed = std::set<std::pair<uint32_t, int>>;

// Independent enumeration for N <= 2: every abelian group generated by N
// independent commuting signed Pauli strings that avoids -I.
std::set<Signed> brute_force_groups(int n) {
    std::vector<std::pair<int, PauliString>> gens;
    for (uint32_t k = 1; k < num_paulis(n); k++) {
        gens.push_back({1, PauliString(n, k)});
        gens.push_back({-1, PauliString(n, k)});
    }
    std::set<Signed> out;
    auto close = [&](const std::vector<std::pair<int, PauliString>> &g) -> std::optional<Signed> {
        std::vector<std::pair<std::complex<double>, PauliString>> elems{{1.0, PauliString::identity(n)}};
        for (const auto &[s, p] : g) {
            size_t m = elems.size();
            for (size_t i = 0; i < m; i++) {
                auto [ph, r] = pauli_product(elems[i].second, p);
                elems.push_back({elems[i].first * ph.value() * static_cast<double>(s), r});
            }
        }
        Signed set;
        for (const auto &[c, p] : elems) {
            if (std::abs(c.imag()) > 1e-12) {
                return std::nullopt;
            }
            set.insert({p.index(), c.real() > 0 ? 1 : -1});
        }
        std::set<uint32_t> idx;
        for (const auto &[k, s] : set) {
            idx.insert(k);
        }
        if (idx.size() != hilbert_dim(n) || set.size() != hilbert_dim(n)) {
            return std::nullopt;
        }
        return set;
    };
    if (n == 1) {
        for (const auto &g : gens) {
            if (auto s = close({g})) {
                out.insert(*s);
            }
        }
    } else {
        for (const auto &g1 : gens) {
            for (const auto &g2 : gens) {
                if (!commutes(g1.second, g2.second)) {
                    continue;
                }
                if (auto s = close({g1, g2})) {
                    out.insert(*s);
                }
            }
        }
    }
    return out;
}

Signed as_set(const StabilizerVector &v) {
    Signed s;
    for (const auto &e : v.entries) {
        s.insert({e.pauli_index, e.sign});
    }
    return s;
}

Eigen::MatrixXcd projector(const StabilizerVector &v) {
    auto d = static_cast<Eigen::Index>(hilbert_dim(v.n_qubits));
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &e : v.entries) {
        rho += static_cast<double>(e.sign) * dense_matrix(PauliString(v.n_qubits, e.pauli_index));
    }
    return rho / static_cast<double>(d);
}

}  // namespace

TEST(stabilizers, count_formula) {
    EXPECT_EQ(stabilizer_count(1), 6u);
    EXPECT_EQ(stabilizer_count(2), 60u);
    EXPECT_EQ(stabilizer_count(3), 1080u);
    EXPECT_EQ(stabilizer_count(4), 36720u);
    EXPECT_EQ(stabilizer_count(5), 2423520u);
}

TEST(stabilizers, enumeration_counts) {
    for (int n = 1; n <= 4; n++) {
        auto set = enumerate_stabilizers(n);
        EXPECT_EQ(set.size(), stabilizer_count(n));
        EXPECT_EQ(set.stride(), hilbert_dim(n));
        EXPECT_EQ(set.n_qubits(), n);
    }
}

TEST(stabilizers, capacity_limits) {
    EXPECT_THROW(enumerate_stabilizers(5), CapacityError);
    EXPECT_THROW(enumerate_stabilizers(6, true), CapacityError);
    EXPECT_THROW(enumerate_stabilizers(0), CapacityError);
}

TEST(stabilizers, every_vector_is_a_stabilizer_group) {
    for (int n = 1; n <= 3; n++) {
        auto set = enumerate_stabilizers(n);
        std::set<Signed> seen;
        for (size_t id = 0; id < set.size(); id++) {
            auto v = set.vector(id);
            auto report = verify_stabilizer_structure(v);
            EXPECT_TRUE(report.ok) << report.violation;
            EXPECT_TRUE(seen.insert(as_set(v)).second) << "duplicate id " << id;
            EXPECT_EQ(set.find(v), id);
        }
    }
}

TEST(stabilizers, matches_brute_force_groups) {
    for (int n = 1; n <= 2; n++) {
        auto oracle = brute_force_groups(n);
        auto set = enumerate_stabilizers(n);
        ASSERT_EQ(oracle.size(), set.size());
        for (size_t id = 0; id < set.size(); id++) {
            EXPECT_TRUE(oracle.contains(as_set(set.vector(id))));
        }
    }
}

TEST(stabilizers, vectors_are_rank_one_projectors) {
    auto set = enumerate_stabilizers(2);
    for (size_t id = 0; id < set.size(); id++) {
        Eigen::MatrixXcd rho = projector(set.vector(id));
        EXPECT_TRUE((rho * rho).isApprox(rho, 1e-12));
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    }
}

TEST(stabilizers, closed_under_clifford_generators) {
    int n = 3;
    auto set = enumerate_stabilizers(n);
    for (const auto &g : clifford_generators(n)) {
        for (size_t id = 0; id < set.size(); id += 7) {
            auto v = set.vector(id);
            StabilizerVector w{n, {}, 0};
            for (const auto &e : v.entries) {
                auto [neg, image] = conjugate(g, PauliString(n, e.pauli_index));
                w.entries.push_back({image.index(), static_cast<int8_t>(neg ? -e.sign : e.sign)});
            }
            std::sort(w.entries.begin(), w.entries.end());
            EXPECT_TRUE(set.find(w).has_value());
        }
    }
}

TEST(stabilizers, structure_violations_detected) {
    StabilizerVector v{1, {{0, 1}, {1, 1}}, 0};
    EXPECT_TRUE(verify_stabilizer_structure(v).ok);
    StabilizerVector neg_identity{1, {{0, -1}, {1, 1}}, 0};
    EXPECT_FALSE(verify_stabilizer_structure(neg_identity).ok);
    StabilizerVector anticommuting{2, {{0, 1}, {4, 1}, {12, 1}, {8, 1}}, 0};  // XI, ZI, YI
    EXPECT_FALSE(verify_stabilizer_structure(anticommuting).ok);
    StabilizerVector wrong_sign{2, {{0, 1}, {5, 1}, {15, 1}, {10, 1}}, 0};  // XX ZZ YY all +1
    EXPECT_FALSE(verify_stabilizer_structure(wrong_sign).ok);
    StabilizerVector bell{2, {{0, 1}, {5, 1}, {10, -1}, {15, 1}}, 0};
    EXPECT_TRUE(verify_stabilizer_structure(bell).ok);
}

TEST(stabilizers, pure_state_bridge) {
    const double r = 1.0 / std::numbers::sqrt2;
    std::vector<std::complex<double>> plus{r, r};
    auto v = stabilizer_vector_of_pure_state(1, plus);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->entries, (std::vector<PauliEntry>{{0, 1}, {1, 1}}));

    std::vector<std::complex<double>> bell{r, 0, 0, r};
    auto b = stabilizer_vector_of_pure_state(2, bell);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->entries, (std::vector<PauliEntry>{{0, 1}, {5, 1}, {10, -1}, {15, 1}}));

    std::vector<std::complex<double>> t{r, std::polar(r, std::numbers::pi / 4)};
    EXPECT_FALSE(stabilizer_vector_of_pure_state(1, t).has_value());

    std::vector<std::complex<double>> unnormalized{1, 1};
    EXPECT_THROW(stabilizer_vector_of_pure_state(1, unnormalized), ValidationError);
}

TEST(stabilizers, cache_round_trip) {
    auto path = std::filesystem::temp_directory_path() / "stabmagic_cache_test.bin";
    auto set = enumerate_stabilizers(3);
    write_stabilizer_cache(set, path);
    auto back = read_stabilizer_cache(path);
    ASSERT_EQ(back.size(), set.size());
    EXPECT_EQ(back.n_qubits(), 3);
    for (size_t id = 0; id < set.size(); id++) {
        EXPECT_EQ(back.vector(id).entries, set.vector(id).entries);
    }
    std::filesystem::remove(path);
}

TEST(stabilizers, cache_rejects_garbage) {
    auto path = std::filesystem::temp_directory_path() / "stabmagic_cache_bad.bin";
    {
        std::ofstream f(path, std::ios::binary);
        f << "NOTACACHE";
    }
    EXPECT_THROW(read_stabilizer_cache(path), ParseError);
    std::filesystem::remove(path);
}

TEST(stabilizers, from_vectors_deduplicates) {
    StabilizerVector zero{1, {{0, 1}, {3, 1}}, 0};
    StabilizerVector plus{1, {{0, 1}, {1, 1}}, 0};
    auto set = StabilizerSet::from_vectors(1, {zero, plus, zero});
    EXPECT_EQ(set.size(), 2u);
    EXPECT_EQ(set.find(plus), 1u);
}

// Copyright 2026 The vbscale Authors
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


#include <cmath>
#include <map>
#include <set>
#include <random>

#include <gtest/gtest.h>

#include "vbscale/families.hpp"
#include "vbscale/infotheory.hpp"
#include "vbscale/stabilizer_cmi.hpp"

namespace vbscale {
namespace {

GF2Matrix rows(std::vector<std::string> r, std::size_t n) { return GF2Matrix::from_rows(r, n); }

ZCheckSystem random_feasible(std::size_t n, std::size_t checks, std::mt19937_64 &rng) {
    GF2Matrix m(checks, n);
    for (std::size_t i = 0; i < checks; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.set(i, j, rng() & 1u);
        }
    }
    // Syndrome of a random string is always feasible.
    BitString z(n);
    for (auto &b : z) {
        b = rng() & 1u;
    }
    return ZCheckSystem(m, multiply(m, z));
}

// Plug-in entropy of the uniform distribution over `support`, restricted to `pos`.
double restricted_entropy(const std::vector<BitString> &support, const std::vector<std::size_t> &pos) {
    std::map<BitString, double> counts;
    for (const auto &z : support) {
        BitString key;
        for (auto p : pos) {
            key.push_back(z[p]);
        }
        counts[key] += 1.0;
    }
    double h = 0.0;
    for (const auto &[k, c] : counts) {
        const double p = c / static_cast<double>(support.size());
        h -= p * std::log2(p);
    }
    return h;
}

TEST(ZSubgroup, Examples) {
    StabilizerTableau t{2, GF2Matrix(2, 2), GF2Matrix::identity(2)};
    EXPECT_EQ(rank(z_subgroup(t)), 2u);

    StabilizerTableau bell{2, rows({"11", "00"}, 2), rows({"00", "11"}, 2)};
    const auto m = z_subgroup(bell);
    ASSERT_EQ(m.rows(), 1u);
    EXPECT_EQ(to_string(m.row(0)), "11");

    StabilizerTableau bad{1, rows({"1", "0"}, 1), rows({"0", "1"}, 1)};
    EXPECT_THROW(z_subgroup(bad), std::invalid_argument);
}

TEST(ZSubgroup, ToricTableauGivesPlaquettes) {
    for (std::size_t l : {2u, 3u, 4u}) {
        const auto m = z_subgroup(toric_tableau(l));
        const auto plaq = build_toric(l).plaquettes;
        EXPECT_EQ(rank(m), l * l - 1);
        // Same row space: stacking does not raise the rank.
        GF2Matrix both = m;
        for (std::size_t r = 0; r < plaq.rows(); ++r) {
            both.append_row(plaq.row(r));
        }
        EXPECT_EQ(rank(both), rank(m));
    }
}

TEST(RankFormula, Examples) {
    EXPECT_EQ(cmi_rank_formula(GF2Matrix::identity(6), Bipartition::middle(6)).value_bits, 0.0);
    EXPECT_EQ(cmi_rank_formula(rows({"11"}, 2), Bipartition::middle(2)).value_bits, 1.0);
    EXPECT_EQ(cmi_rank_formula(rows({"11"}, 2), Bipartition::middle(2)).method, CmiMethod::rank_formula);
}

TEST(RankFormula, SyndromeIndependent) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto sys = random_feasible(10, 4, rng);
        const ZCheckSystem zero(sys.m());
        const auto cut = Bipartition::middle(10);
        EXPECT_EQ(cmi_brute_force(sys, cut).value_bits, cmi_brute_force(zero, cut).value_bits);
        EXPECT_EQ(cmi_rank_formula(sys.m(), cut).value_bits, cmi_brute_force(sys, cut).value_bits);
    }
}

TEST(BruteForce, EqualsRankFormulaOnRandomSystems) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sys = random_feasible(8, 4, rng);
        std::vector<std::size_t> a;
        for (std::size_t j = 0; j < 8; ++j) {
            if (rng() & 1u) {
                a.push_back(j);
            }
        }
        const auto cut = Bipartition::from_subset(8, a);
        const auto bf = cmi_brute_force(sys, cut);
        EXPECT_EQ(bf.value_bits, cmi_rank_formula(sys.m(), cut).value_bits);
        EXPECT_GE(bf.value_bits, 0.0);
        EXPECT_LE(bf.value_bits, static_cast<double>(std::min(cut.a.size(), cut.b.size())));
    }
    EXPECT_EQ(cmi_brute_force(ZCheckSystem(rows({"11"}, 2)), Bipartition::middle(2)).value_bits, 1.0);
    EXPECT_EQ(cmi_brute_force(ZCheckSystem(GF2Matrix::identity(5)), Bipartition::middle(5)).value_bits, 0.0);
}

TEST(BruteForce, MatchesIndependentPlugIn) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sys = random_feasible(9, 3, rng);
        const auto cut = Bipartition::middle(9);
        const auto sup = enumerate_support(sys);
        const double mi = restricted_entropy(sup, cut.a) + restricted_entropy(sup, cut.b) -
                          std::log2(static_cast<double>(sup.size()));
        EXPECT_NEAR(cmi_brute_force(sys, cut).value_bits, mi, 1e-12);
    }
}

TEST(Support, Enumeration) {
    const auto zero = enumerate_support(ZCheckSystem(rows({"11"}, 2)));
    ASSERT_EQ(zero.size(), 2u);
    EXPECT_EQ(to_string(zero[0]), "00");
    EXPECT_EQ(to_string(zero[1]), "11");
    const auto one = enumerate_support(ZCheckSystem(rows({"11"}, 2), {1}));
    ASSERT_EQ(one.size(), 2u);
    std::set<std::string> got{to_string(one[0]), to_string(one[1])};
    EXPECT_EQ(got, (std::set<std::string>{"01", "10"}));

    EXPECT_THROW(enumerate_support(ZCheckSystem(rows({"10", "10"}, 2), {0, 1})), InfeasibleSystem);
    EXPECT_THROW(enumerate_support(ZCheckSystem(GF2Matrix(1, 30))), SupportTooLarge);
}

TEST(Support, ToricL2AgainstDirectParities) {
    const auto t = build_toric(2);
    const ZCheckSystem sys(t.plaquettes);
    const auto sup = enumerate_support(sys);
    EXPECT_EQ(sup.size(), 32u);
    std::set<BitString> listed(sup.begin(), sup.end());
    std::size_t direct = 0;
    for (std::uint32_t z = 0; z < 256; ++z) {
        BitString v(8);
        for (std::size_t j = 0; j < 8; ++j) {
            v[j] = (z >> j) & 1u;
        }
        bool ok = true;
        for (std::size_t p = 0; p < t.plaquettes.rows(); ++p) {
            unsigned parity = 0;
            for (std::size_t j = 0; j < 8; ++j) {
                parity ^= t.plaquettes.get(p, j) & v[j];
            }
            ok = ok && parity == 0;
        }
        if (ok) {
            ++direct;
            EXPECT_TRUE(listed.count(v));
        }
    }
    EXPECT_EQ(direct, 32u);
}

TEST(Support, MarginalIsUniform) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sys = random_feasible(10, 5, rng);
        const auto cut = Bipartition::middle(10);
        const auto sup = enumerate_support(sys);
        const auto r = sys.rank();
        const auto rb = rank(column_restrict(sys.m(), cut.b));
        const double expect = std::ldexp(1.0, -static_cast<int>(cut.a.size() - r + rb));
        std::map<BitString, double> pa;
        for (const auto &z : sup) {
            BitString key;
            for (auto p : cut.a) {
                key.push_back(z[p]);
            }
            pa[key] += 1.0 / static_cast<double>(sup.size());
        }
        for (const auto &[k, p] : pa) {
            EXPECT_NEAR(p, expect, 1e-15);
        }
        // The projected-kernel marginal agrees string by string.
        StabilizerDistribution dist(sys);
        const auto marg = dist.marginal(cut.a);
        for (const auto &z : sup) {
            EXPECT_NEAR(std::exp(marg.log_prob(z)), expect, 1e-12);
        }
    }
}

TEST(Sampling, BellFrequenciesAndDeterministicCase) {
    std::mt19937_64 rng(37);
    const auto s = sample_support(ZCheckSystem(rows({"11"}, 2)), rng, 10000);
    double n00 = 0;
    for (const auto &z : s) {
        EXPECT_EQ(z[0], z[1]);
        n00 += z[0] == 0;
    }
    EXPECT_NEAR(n00 / 10000.0, 0.5, 0.02);
    for (const auto &z : sample_support(ZCheckSystem(GF2Matrix::identity(5)), rng, 100)) {
        EXPECT_EQ(z, BitString(5, 0));
    }
}

TEST(Sampling, CheckerboardExactLogProbEstimator) {
    // Plug-in entropies are meaningless for 2^60 supports; use exact marginal
    // log-probabilities instead.
    const auto fam = build_checkerboard(8, 0.5);
    const auto sys = checkerboard_zsystem(fam);
    const auto cut = lattice_middle_cut(8, CutAxis::vertical);
    StabilizerDistribution dist(sys);
    const auto ma = dist.marginal(cut.a);
    const auto mb = dist.marginal(cut.b);
    const ExactSampler draw = [&](std::mt19937_64 &g) {
        const auto z = dist.sample(g);
        return ExactLogProbs{dist.log_prob(z), ma.log_prob(z), mb.log_prob(z)};
    };
    std::mt19937_64 rng(41);
    const auto est = mi_from_exact_logprobs(draw, 20000, rng);
    EXPECT_NEAR(est.mi_bits, cmi_rank_formula(sys.m(), cut).value_bits, 0.1);
}

TEST(Bipartition, Validation) {
    EXPECT_THROW(Bipartition::from_subset(3, {5}), std::out_of_range);
    Bipartition bad{{0, 1}, {1, 2}};
    EXPECT_THROW(bad.validate(3), std::invalid_argument);
    Bipartition partial{{0}, {1}};
    EXPECT_THROW(partial.validate(3), std::invalid_argument);
}

}  // namespace
}  // namespace vbscale

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


#include <random>
#include <set>

#include <gtest/gtest.h>

#include "vbscale/gf2.hpp"

namespace vbscale {
namespace {

GF2Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64 &rng) {
    GF2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m.set(i, j, rng() & 1u);
        }
    }
    return m;
}

TEST(Gf2Rank, SmallExamples) {
    EXPECT_EQ(rank(GF2Matrix::identity(4)), 4u);
    EXPECT_EQ(rank(GF2Matrix::from_rows(std::vector<std::string>{"111", "111", "111"}, 3)), 1u);
    EXPECT_EQ(rank(GF2Matrix::from_rows(std::vector<std::string>{"110", "011", "101"}, 3)), 2u);
    EXPECT_EQ(rank(GF2Matrix(0, 5)), 0u);
}

TEST(Gf2Rank, MatchesSpanEnumeration) {
    // Oracle: count distinct XOR combinations of rows; rank = log2 of that.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 1 + rng() % 8;
        const std::size_t c = 1 + rng() % 70;
        const auto m = random_matrix(r, c, rng);
        std::set<BitString> span;
        for (std::uint64_t mask = 0; mask < (1u << r); ++mask) {
            BitString v(c, 0);
            for (std::size_t i = 0; i < r; ++i) {
                if ((mask >> i) & 1u) {
                    const auto row = m.row(i);
                    for (std::size_t j = 0; j < c; ++j) {
                        v[j] ^= row[j];
                    }
                }
            }
            span.insert(v);
        }
        std::size_t expect = 0;
        while ((std::size_t{1} << expect) < span.size()) {
            ++expect;
        }
        EXPECT_EQ(rank(m), expect);
    }
}

TEST(Gf2Rank, InvariantUnderRowOperations) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = random_matrix(6, 90, rng);
        const auto r0 = rank(m);
        m.swap_rows(0, 5);
        m.xor_row_into(2, 4);
        EXPECT_EQ(rank(m), r0);
    }
}

TEST(Gf2Rank, DoesNotMutateInput) {
    const auto m = GF2Matrix::from_rows(std::vector<std::string>{"110", "011", "101"}, 3);
    const auto copy = m;
    (void)rank(m);
    EXPECT_EQ(format_matrix(m), format_matrix(copy));
}

TEST(Gf2Matrix, PaddingBitsStayZero) {
    GF2Matrix m(2, 70);
    m.set(0, 69, true);
    m.flip(1, 3);
    for (std::size_t r = 0; r < 2; ++r) {
        const auto w = m.row_words(r);
        EXPECT_EQ(w.back() >> (70 - 64), 0u);
    }
    EXPECT_EQ(m.transposed().transposed().row(0), m.row(0));
}

TEST(Gf2Restrict, SelectsColumnsInOrder) {
    const auto m = GF2Matrix::from_rows(std::vector<std::string>{"11"}, 2);
    EXPECT_EQ(to_string(column_restrict(m, std::vector<std::size_t>{0}).row(0)), "1");
    const auto i4 = column_restrict(GF2Matrix::identity(4), std::vector<std::size_t>{0, 1});
    EXPECT_EQ(to_string(i4.row(0)), "10");
    EXPECT_EQ(to_string(i4.row(1)), "01");
    EXPECT_TRUE(i4.row_is_zero(2));
    const auto sw = column_restrict(GF2Matrix::identity(3), std::vector<std::size_t>{2, 0});
    EXPECT_EQ(to_string(sw.row(2)), "10");
    EXPECT_THROW(column_restrict(m, std::vector<std::size_t>{2}), std::out_of_range);
    EXPECT_THROW(column_restrict(m, std::vector<std::size_t>{0, 0}), std::invalid_argument);
}

TEST(Gf2Restrict, SubadditiveOverBipartitions) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_matrix(5, 12, rng);
        std::vector<std::size_t> a;
        std::vector<std::size_t> b;
        for (std::size_t j = 0; j < 12; ++j) {
            ((rng() & 1u) ? a : b).push_back(j);
        }
        EXPECT_GE(rank(column_restrict(m, a)) + rank(column_restrict(m, b)), rank(m));
    }
}

TEST(Gf2Solve, Examples) {
    const auto bell = GF2Matrix::from_rows(std::vector<std::string>{"11"}, 2);
    const auto sol = solve(bell, {0});
    ASSERT_TRUE(sol);
    EXPECT_EQ(to_string(sol->particular), "00");
    ASSERT_EQ(sol->kernel.size(), 1u);
    EXPECT_EQ(to_string(sol->kernel[0]), "11");

    const auto bad = GF2Matrix::from_rows(std::vector<std::string>{"10", "10"}, 2);
    EXPECT_FALSE(solve(bad, {0, 1}));
    EXPECT_THROW(solve(bad, {0}), std::invalid_argument);
}

TEST(Gf2Solve, SolutionCountMatchesExhaustiveSearch) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t c = 1 + rng() % 12;
        const std::size_t r = 1 + rng() % 6;
        const auto m = random_matrix(r, c, rng);
        BitString s(r);
        for (auto &x : s) {
            x = rng() & 1u;
        }
        std::size_t count = 0;
        for (std::uint64_t z = 0; z < (1u << c); ++z) {
            BitString v(c);
            for (std::size_t j = 0; j < c; ++j) {
                v[j] = (z >> j) & 1u;
            }
            count += multiply(m, v) == s;
        }
        const auto sol = solve(m, s);
        if (count == 0) {
            EXPECT_FALSE(sol);
            continue;
        }
        ASSERT_TRUE(sol);
        EXPECT_EQ(multiply(m, sol->particular), s);
        for (const auto &k : sol->kernel) {
            EXPECT_EQ(multiply(m, k), BitString(r, 0));
        }
        EXPECT_EQ(count, std::size_t{1} << (c - rank(m)));
        EXPECT_EQ(sol->kernel.size(), c - rank(m));
    }
}

TEST(Gf2Text, RoundTrip) {
    const auto m = parse_matrix("2 3\n101\n011\n");
    EXPECT_EQ(format_matrix(m), "2 3\n101\n011\n");
    EXPECT_THROW(parse_matrix("2 3\n101\n"), std::invalid_argument);
    EXPECT_THROW(parse_matrix("1 3\n1021\n"), std::invalid_argument);
    EXPECT_THROW(bits_from_string("01x"), std::invalid_argument);
}

}  // namespace
}  // namespace vbscale

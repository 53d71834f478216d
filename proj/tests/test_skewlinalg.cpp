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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "vbscale/skewlinalg.hpp"

namespace vbscale {
namespace {

Eigen::MatrixXd random_skew(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = g(rng);
            a(j, i) = -a(i, j);
        }
    }
    return a;
}

// Expansion along the first row.
double pf_expand(const Eigen::MatrixXd &a, std::vector<int> idx) {
    if (idx.empty()) {
        return 1.0;
    }
    const int first = idx[0];
    double acc = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        std::vector<int> rest;
        for (std::size_t m = 1; m < idx.size(); ++m) {
            if (m != k) {
                rest.push_back(idx[m]);
            }
        }
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        acc += sign * a(first, idx[k]) * pf_expand(a, rest);
    }
    return acc;
}

Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd &a) {
    // Scale down, sum the series, square back up.
    int s = 0;
    double norm = a.lpNorm<Eigen::Infinity>();
    while (norm > 0.1) {
        norm /= 2;
        ++s;
    }
    const Eigen::MatrixXd b = a / std::ldexp(1.0, s);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * b / k;
        sum += term;
    }
    for (int k = 0; k < s; ++k) {
        sum = sum * sum;
    }
    return sum;
}

TEST(SignLog, Arithmetic) {
    const auto a = SignLog::from_value(-3.0);
    const auto b = SignLog::from_value(2.0);
    EXPECT_NEAR((a * b).value(), -6.0, 1e-14);
    EXPECT_NEAR((a / b).value(), -1.5, 1e-14);
    EXPECT_NEAR((a + b).value(), -1.0, 1e-14);
    EXPECT_NEAR((b + b).value(), 4.0, 1e-14);
    EXPECT_EQ((a + (-a)).sign, 0);
    EXPECT_EQ(SignLog::zero().value(), 0.0);
    EXPECT_NEAR(SignLog::from_value(-9.0).sqrt_abs().value(), 3.0, 1e-14);
    EXPECT_THROW(a / SignLog::zero(), std::domain_error);
    // Far beyond double range.
    SignLog huge{1, 2000.0};
    EXPECT_NEAR((huge * huge).log_abs, 4000.0, 1e-9);
}

TEST(Pfaffian, SmallClosedForms) {
    Eigen::MatrixXd a2(2, 2);
    a2 << 0, 1.7, -1.7, 0;
    EXPECT_NEAR(pfaffian(a2).value(), 1.7, 1e-14);
    Eigen::MatrixXd a4 = Eigen::MatrixXd::Zero(4, 4);
    a4(0, 1) = 1;
    a4(0, 2) = 2;
    a4(0, 3) = 3;
    a4(1, 2) = 4;
    a4(1, 3) = 5;
    a4(2, 3) = 6;
    a4 = (a4 - a4.transpose()).eval();
    EXPECT_NEAR(pfaffian(a4).value(), 1 * 6 - 2 * 5 + 3 * 4, 1e-12);
    EXPECT_EQ(pfaffian(Eigen::MatrixXd(0, 0)).value(), 1.0);
    EXPECT_THROW(pfaffian(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
    EXPECT_THROW(pfaffian(Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
}

TEST(Pfaffian, MatchesExpansionAndDeterminant) {
    std::mt19937_64 rng(1);
    for (int n : {2, 4, 6, 8, 10}) {
        for (int t = 0; t < 10; ++t) {
            const auto a = random_skew(n, rng);
            std::vector<int> idx(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                idx[static_cast<std::size_t>(i)] = i;
            }
            const double pf = pfaffian(a).value();
            EXPECT_NEAR(pf, pf_expand(a, idx), 1e-9 * std::max(1.0, std::abs(pf)));
            EXPECT_NEAR(pf * pf, a.determinant(), 1e-8 * std::max(1.0, std::abs(pf * pf)));
        }
    }
}

TEST(Pfaffian, CongruenceRule) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        const auto a = random_skew(6, rng);
        Eigen::MatrixXd b(6, 6);
        for (int i = 0; i < b.size(); ++i) {
            b.data()[i] = g(rng);
        }
        const Eigen::MatrixXd c = b * a * b.transpose();
        EXPECT_NEAR(pfaffian(c).value(), b.determinant() * pfaffian(a).value(),
                    1e-8 * std::max(1.0, std::abs(pfaffian(c).value())));
    }
}

TEST(Pfaffian, RowSwapFlipsSign) {
    std::mt19937_64 rng(3);
    const auto a = random_skew(6, rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(6);
    p.setIdentity();
    p.applyTranspositionOnTheRight(1, 4);
    const Eigen::MatrixXd swapped = p.transpose() * a * p;
    EXPECT_NEAR(pfaffian(swapped).value(), -pfaffian(a).value(), 1e-10);
}

TEST(Expm, MatchesTaylor) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd a(5, 5);
        for (int i = 0; i < a.size(); ++i) {
            a.data()[i] = 2.0 * g(rng);
        }
        const Eigen::MatrixXd e = expm(a);
        const Eigen::MatrixXd ref = taylor_exp(a);
        EXPECT_LT((e - ref).norm(), 1e-9 * ref.norm());
    }
    Eigen::MatrixXd rot(2, 2);
    rot << 0, -1, 1, 0;
    const Eigen::MatrixXd e = expm(rot * M_PI);
    EXPECT_NEAR(e(0, 0), -1.0, 1e-12);
    EXPECT_NEAR(e(1, 0), 0.0, 1e-12);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 0) = std::nan("");
    EXPECT_THROW(expm(bad), std::invalid_argument);
}

TEST(Lu, DeterminantAndInverse) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(6, 6);
    for (int i = 0; i < a.size(); ++i) {
        a.data()[i] = g(rng);
    }
    const auto lu = lu_det_inverse(a);
    EXPECT_NEAR(lu.det.value(), a.determinant(), 1e-10 * std::abs(a.determinant()));
    EXPECT_LT((lu.inv * a - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-10);
    EXPECT_NEAR(log_det(a).value(), a.determinant(), 1e-10 * std::abs(a.determinant()));

    Eigen::MatrixXd sing = a;
    sing.row(3) = sing.row(1);
    EXPECT_THROW(lu_det_inverse(sing), SingularMatrix);
    EXPECT_EQ(log_det(Eigen::MatrixXd::Zero(3, 3)).sign, 0);
}

}  // namespace
}  // namespace vbscale

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

#include <gtest/gtest.h>

#include "dense_fock.hpp"
#include "vbscale/tfim_tfd.hpp"

namespace vbscale {
namespace {

double dense_copy_mi(std::size_t n, double j, double h, double beta) {
    const auto half = oracle::sym_exp(oracle::tfim_hamiltonian(n, j, h), 0.5 * beta);
    Eigen::MatrixXd w = half.array().square();
    w /= w.sum();
    const Eigen::VectorXd pa = w.rowwise().sum();
    const Eigen::VectorXd pb = w.colwise().sum();
    double acc = 0.0;
    for (Eigen::Index a = 0; a < w.rows(); ++a) {
        for (Eigen::Index b = 0; b < w.cols(); ++b) {
            if (w(a, b) > 0) {
                acc += w(a, b) * std::log2(w(a, b) / (pa(a) * pb(b)));
            }
        }
    }
    return acc;
}

TEST(Tfim, ModelValidation) {
    EXPECT_THROW(cmi_exact(TfimModel{1, 1.0, 0.5}, 1.0), std::invalid_argument);
    EXPECT_THROW(cmi_exact(TfimModel{11, 1.0, 0.5}, 1.0), std::invalid_argument);
    EXPECT_TRUE((TfimModel{4, 1.0, 1.0}).at_critical_point());
}

TEST(Tfim, PartitionFunctionMatchesTrace) {
    for (std::size_t n = 2; n <= 8; ++n) {
        for (double h : {0.6, 1.0, 1.4, -0.3}) {
            for (double beta : {0.1, 1.0, 5.0}) {
                const double ref = oracle::sym_exp(oracle::tfim_hamiltonian(n, 1.0, h), beta).trace();
                const auto z = partition_function(TfimModel{n, 1.0, h}, beta);
                EXPECT_EQ(z.sign, 1);
                EXPECT_NEAR(z.log_abs, std::log(ref), 1e-8) << "n=" << n << " h=" << h << " beta=" << beta;
            }
        }
    }
}

TEST(Tfim, KernelMatchesDenseExponential) {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (double h : {0.6, 1.3}) {
            for (double tau : {0.05, 0.5, 2.0}) {
                const auto dense = oracle::sym_exp(oracle::tfim_hamiltonian(n, 1.0, h), tau);
                const auto k = build_kernel(TfimModel{n, 1.0, h}, tau);
                const std::size_t dim = std::size_t{1} << n;
                for (std::size_t a = 0; a < dim; ++a) {
                    for (std::size_t b = 0; b < dim; ++b) {
                        const double got =
                            kernel_element(k, oracle::bits_of(a, n), oracle::bits_of(b, n)).value();
                        EXPECT_NEAR(got, dense(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), 1e-7)
                            << "n=" << n << " a=" << a << " b=" << b;
                    }
                }
            }
        }
    }
}

TEST(Tfim, WeightsNormalize) {
    const TfimModel m{4, 1.0, 0.6};
    const TfimWeights w(m, 1.3);
    double joint = 0.0;
    double marg = 0.0;
    for (std::size_t a = 0; a < 16; ++a) {
        const auto sa = oracle::bits_of(a, 4);
        marg += (w.marginal(sa) / w.z_beta()).value();
        for (std::size_t b = 0; b < 16; ++b) {
            joint += (w.joint(sa, oracle::bits_of(b, 4)) / w.z_beta()).value();
        }
    }
    EXPECT_NEAR(joint, 1.0, 1e-10);
    EXPECT_NEAR(marg, 1.0, 1e-10);
}

TEST(Tfim, CmiExactMatchesDense) {
    for (std::size_t n : {2u, 3u, 4u, 6u}) {
        for (double beta : {0.2, 1.0, 3.0}) {
            EXPECT_NEAR(cmi_exact(TfimModel{n, 1.0, 0.6}, beta).value_bits, dense_copy_mi(n, 1.0, 0.6, beta), 1e-8);
        }
    }
}

TEST(Tfim, InfiniteTemperatureLimit) {
    for (std::size_t n : {2u, 4u, 6u}) {
        EXPECT_NEAR(cmi_exact(TfimModel{n, 1.0, 0.6}, 1e-6).value_bits, static_cast<double>(n), 1e-4);
    }
}

TEST(Tfim, SmallBetaExpansion) {
    const std::size_t n = 4;
    for (double beta : {0.01, 0.02, 0.05}) {
        const double exact = cmi_exact(TfimModel{n, 1.0, 0.6}, beta).value_bits;
        const double bound = 5.0 * n * beta * beta * beta * std::abs(std::log(beta));
        EXPECT_LE(std::abs(exact - small_beta_formula(n, beta, 1.0, 0.6)), bound);
    }
    EXPECT_DOUBLE_EQ(small_beta_formula(3, 0.0, 1.0, 0.6), 3.0);
    EXPECT_NEAR(small_beta_formula(2, 0.1, 0.0, 1.0), 2.0 - 0.01 / std::log(2.0), 1e-15);
}

TEST(Tfim, McmcAgreesWithExact) {
    const TfimModel m{4, 1.0, 0.6};
    std::mt19937_64 rng(5);
    const auto est = cmi_mcmc(m, 1.0, McmcOptions{60000, 0, 50}, rng);
    ASSERT_TRUE(est.stderr_bits.has_value());
    EXPECT_NEAR(est.value_bits, cmi_exact(m, 1.0).value_bits, 4.0 * *est.stderr_bits + 1e-3);
}

}  // namespace
}  // namespace vbscale

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


#ifndef VBSCALE_INFOTHEORY_HPP
#define VBSCALE_INFOTHEORY_HPP

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace vbscale {

/// Joint distribution of two discrete variables; rows index A, columns B.
struct JointTable {
    Eigen::MatrixXd p;

    JointTable() = default;
    explicit JointTable(Eigen::MatrixXd probs);

    std::size_t a_size() const { return static_cast<std::size_t>(p.rows()); }
    std::size_t b_size() const { return static_cast<std::size_t>(p.cols()); }
    std::vector<double> marginal_a() const;
    std::vector<double> marginal_b() const;

    /// Throws std::invalid_argument on negative entries or mass off 1 by more than 1e-12.
    void validate() const;
};

struct EntropyEstimate {
    double bits = 0.0;
    double stderr_bits = 0.0;
    std::size_t n_samples = 0;
};

/// Shannon entropy in bits, 0 log 0 = 0. Throws on negative or unnormalized input.
double entropy(const std::vector<double> &p);

/// h2(x) = -x log2 x - (1-x) log2 (1-x).
double binary_entropy(double x);

double mutual_information(const JointTable &q);

struct RankBound {
    double mi_bits = 0.0;
    std::size_t rank = 0;
    double log2_rank = 0.0;
    bool holds = false;
};

/// Numeric rank keeps singular values above 1e-10 * sigma_max.
RankBound rank_bound_check(const JointTable &q);

struct Chi2Check {
    double chi2 = 0.0;
    double frobenius_sq = 0.0;  // ||M||_F^2 with M_ab = P(a,b)/sqrt(pA pB)
    double deviation = 0.0;     // | ||M||_F^2 - 1 - chi2 |
    bool mi_bound_holds = false;  // I <= log2(1 + chi2)
};

/// Throws std::invalid_argument when a marginal entry is zero.
Chi2Check chi2_identity_check(const JointTable &q);

struct ContinuityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double eps = 0.0;
    bool holds = false;
};

/// |H(p) - H(q)| against (eps/2) log2(d-1) + h2(eps/2), eps = ||p - q||_1.
ContinuityCheck entropy_continuity_check(const std::vector<double> &p, const std::vector<double> &q);

/// One sample together with exact natural-log probabilities of the joint
/// string and of its A and B restrictions.
struct ExactLogProbs {
    double log_joint = 0.0;
    double log_a = 0.0;
    double log_b = 0.0;
};

struct MiEstimate {
    EntropyEstimate h_a;
    EntropyEstimate h_b;
    EntropyEstimate h_ab;
    double mi_bits = 0.0;
    double stderr_bits = 0.0;
};

using ExactSampler = std::function<ExactLogProbs(std::mt19937_64 &)>;

/// Monte Carlo entropies from exact log-probabilities. The MI standard error
/// comes from the per-sample combination log P(a,b) - log P(a) - log P(b),
/// which is far tighter than adding the three entropy errors.
MiEstimate mi_from_exact_logprobs(const ExactSampler &draw, std::size_t n_samples, std::mt19937_64 &rng);

}  // namespace vbscale

#endif  // VBSCALE_INFOTHEORY_HPP

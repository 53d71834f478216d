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


#ifndef VBSCALE_FERMION_TFD_HPP
#define VBSCALE_FERMION_TFD_HPP

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vbscale/gf2.hpp"
#include "vbscale/stabilizer_cmi.hpp"

namespace vbscale {

/// Open spinless p-wave chain
///   H = sum_{j<n} [-J (c_j^+ c_{j+1} + h.c.) - J (c_j^+ c_{j+1}^+ + h.c.)] + 2h sum_j (n_j - 1/2).
struct BcsChain {
    std::size_t n = 0;
    double j_coupling = 1.0;
    double h_field = 0.0;

    void validate() const;
    /// H = 1/2 Psi^+ M Psi with Psi = (c, c^+): M = [[A, B], [-B, -A]].
    Eigen::MatrixXd bdg_matrix() const;
};

/// Quasiparticles eta_mu = x_mu . c + y_mu . c^+ with [H, eta_mu] = -eps_mu eta_mu.
struct BdgModes {
    Eigen::VectorXd eps;  // ascending, >= 0
    Eigen::MatrixXd x;    // n x n, column mu
    Eigen::MatrixXd y;
    std::size_t zero_modes = 0;
};

BdgModes diagonalize(const BcsChain &chain);

/// The doubled TFD as a pure Gaussian state on d = (c_A, c_B).
struct GaussianTFD {
    BcsChain chain;
    double beta = 0.0;
    Eigen::VectorXd eps;
    Eigen::VectorXd occ;       // f_mu = 1 / (exp(beta eps) + 1)
    Eigen::MatrixXd pairing;   // F, 2n x 2n antisymmetric
    double log_norm = 0.0;     // log N, with Psi(x) = N pf(F[S(x)])
    Eigen::MatrixXd hopping;   // <d_i^+ d_j>
    Eigen::MatrixXd anomalous; // <d_i d_j>
    Eigen::MatrixXd majorana;  // Gamma_kl = i <m_k m_l>, m_2u = d_u + d_u^+, m_2u+1 = -i (d_u - d_u^+)
    bool regularized = false;  // pairing solve needed the 1e-12 shift

    std::size_t n_modes() const { return 2 * chain.n; }
};

GaussianTFD build_tfd(const BcsChain &chain, double beta);

/// <x|TFD>, x = (a, b) in doubled mode order.
double amplitude(const GaussianTFD &t, const BitString &x);

/// Order in which the doubled modes are visited; perm[t] is the mode at step t.
struct Ordering {
    std::vector<std::size_t> perm;
    std::string name;

    /// a_1 .. a_n b_1 .. b_n
    static Ordering separate(std::size_t n);
    /// a_1 b_1 a_2 b_2 ...
    static Ordering alternate(std::size_t n);
    static Ordering custom(std::vector<std::size_t> perm);
    /// Tokens [cut, end) followed by [0, cut).
    Ordering b_first(std::size_t cut) const;
    void validate(std::size_t n_modes) const;
};

Ordering ordering_from_name(const std::string &name, std::size_t n);

/// Majorana covariance conditioned on a prefix of the ordering. Fixed modes
/// decouple and are dropped, so the live matrix shrinks by two per step.
class SamplerState {
   public:
    SamplerState(const GaussianTFD &t, const Ordering &o);

    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == perm_.size(); }
    std::size_t next_mode() const { return perm_[pos_]; }
    /// P(next bit = 1 | prefix), clamped to [0, 1].
    double conditional_prob() const;
    /// Fix the next mode to `bit` and accumulate its log-probability.
    /// Throws std::runtime_error when that outcome has probability below 1e-12.
    void condition(std::uint8_t bit);
    double log_prob() const { return log_prob_; }
    /// Largest amount by which a conditional probability was clamped.
    double max_clamp() const { return max_clamp_; }

   private:
    std::vector<std::size_t> perm_;
    std::size_t pos_ = 0;
    Eigen::MatrixXd g_;
    double log_prob_ = 0.0;
    mutable double max_clamp_ = 0.0;
};

struct TfdSample {
    BitString bits;  // doubled mode order
    double log_prob = 0.0;
};

TfdSample sample(const GaussianTFD &t, const Ordering &o, std::mt19937_64 &rng);

/// Log-probability of the first `steps` tokens of `o` taking their values in `x`.
double prefix_log_prob(const GaussianTFD &t, const Ordering &o, const BitString &x, std::size_t steps);

enum class TfdCmiMode { automatic, exact, sampled };

inline constexpr std::size_t kMaxExactTfdModes = 20;

/// Mutual information between the first `cut` tokens of `o` and the rest.
/// `automatic` enumerates when 2n <= 20 and samples otherwise.
CmiResult tfd_cmi(const GaussianTFD &t, const Ordering &o, std::size_t cut, std::size_t n_samples,
                  std::mt19937_64 &rng, TfdCmiMode mode = TfdCmiMode::automatic);

}  // namespace vbscale

#endif  // VBSCALE_FERMION_TFD_HPP

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


#ifndef VBSCALE_ARNN_HPP
#define VBSCALE_ARNN_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vbscale/fermion_tfd.hpp"
#include "vbscale/gf2.hpp"
#include "vbscale/stabilizer_cmi.hpp"

namespace vbscale {

/// Gated recurrent cell over one-hot inputs of the previous bit.
///
///   z = sig(Wz x + Uz h + bz),  r = sig(Wr x + Ur h + br)
///   c = tanh(Wc x + Uc (r * h) + bc),  h' = (1 - z) * h + z * c
///   P(s_i | s_<i) = softmax(V h_i + d)
///
/// x_i is the one-hot encoding of s_{i-1} (zero for i = 0), h_0 = 0.
struct ArnnParams {
    Eigen::MatrixXd wz, wr, wc;  // n_d x 2
    Eigen::MatrixXd uz, ur, uc;  // n_d x n_d
    Eigen::VectorXd bz, br, bc;  // n_d
    Eigen::MatrixXd v;           // 2 x n_d
    Eigen::VectorXd d;           // 2

    static ArnnParams zeros(std::size_t n_d);
    std::size_t width() const { return static_cast<std::size_t>(bz.size()); }
    std::size_t size() const;
    Eigen::VectorXd flatten() const;
    void unflatten(const Eigen::VectorXd &flat);
    /// Names in flatten() order, one per tensor, with their lengths.
    static std::vector<std::pair<std::string, std::size_t>> layout(std::size_t n_d);
};

class ArnnModel {
   public:
    ArnnModel(std::size_t n_sites, std::size_t n_d);
    /// Uniform(-1/sqrt(n_d), 1/sqrt(n_d)) initialization.
    static ArnnModel random(std::size_t n_sites, std::size_t n_d, std::mt19937_64 &rng);

    std::size_t n_sites() const { return n_sites_; }
    std::size_t width() const { return params_.width(); }
    const ArnnParams &params() const { return params_; }
    ArnnParams &params() { return params_; }

    /// Natural-log probability of a full string.
    double log_prob(const BitString &s) const;
    std::vector<double> log_prob(const std::vector<BitString> &batch) const;

    /// Mean negative log-likelihood over the batch and its gradient.
    std::pair<double, ArnnParams> nll_and_grad(const std::vector<BitString> &batch) const;

    /// Ancestral samples with their log-probabilities.
    std::vector<std::pair<BitString, double>> sample(std::mt19937_64 &rng, std::size_t count) const;

   private:
    std::size_t n_sites_ = 0;
    ArnnParams params_;
};

/// A distribution the model is trained to reproduce. Exact log-probabilities
/// are required for fidelity estimates.
class Target {
   public:
    virtual ~Target() = default;
    virtual std::size_t n_sites() const = 0;
    virtual BitString sample(std::mt19937_64 &rng) const = 0;
    virtual double log_prob(const BitString &s) const = 0;
    /// Strings with nonzero probability and their probabilities, when small enough to list.
    virtual std::optional<std::vector<std::pair<BitString, double>>> support() const { return std::nullopt; }
    virtual std::string name() const = 0;
};

/// Uniform distribution on {z : Mz = s}.
class StabilizerTarget : public Target {
   public:
    StabilizerTarget(ZCheckSystem sys, std::string name);
    std::size_t n_sites() const override { return sys_.n(); }
    BitString sample(std::mt19937_64 &rng) const override { return dist_.sample(rng); }
    double log_prob(const BitString &s) const override { return dist_.log_prob(s); }
    std::optional<std::vector<std::pair<BitString, double>>> support() const override;
    std::string name() const override { return name_; }

   private:
    ZCheckSystem sys_;
    StabilizerDistribution dist_;
    std::string name_;
};

inline constexpr std::size_t kMaxListedSupport = 16;  // log2 of the largest listed support

/// n/2 adjacent pairs (2k, 2k+1), each uniform on {00, 11}. Requires even n.
std::unique_ptr<Target> bell_chain_target(std::size_t n);
/// All-zero string with probability one.
std::unique_ptr<Target> delta_target(std::size_t n);
/// Checkerboard family on an L x L torus, bits in qubit-index order.
std::unique_ptr<Target> checkerboard_target(std::size_t l, double gamma);
/// Toric-code Z-basis distribution, bits in edge-label order.
std::unique_ptr<Target> toric_target(std::size_t l);
/// TFD amplitude distribution read in the given ordering.
std::unique_ptr<Target> tfd_target(const GaussianTFD &t, const Ordering &o);

enum class FidelityMode { automatic, exact, sampled };

struct FidelityEstimate {
    double value = 0.0;
    double stderr_value = 0.0;  // zero for exact evaluation
    bool exact = false;
};

/// Classical fidelity (sum_s sqrt(P_t P_m))^2. Exact over the listed target
/// support, otherwise (E_{s~P_m} sqrt(P_t/P_m))^2 from model samples.
FidelityEstimate fidelity(const ArnnModel &m, const Target &t, std::mt19937_64 &rng,
                          FidelityMode mode = FidelityMode::automatic, std::size_t n_samples = 4096);

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 256;
    std::size_t max_epochs = 5000;
    /// One epoch is this many Adam steps, each on a fresh target batch.
    std::size_t steps_per_epoch = 16;
    std::size_t eval_every = 100;  // epochs
    std::size_t seeds = 3;
    double target_fidelity = 0.95;
    FidelityMode eval_mode = FidelityMode::automatic;
    std::size_t eval_samples = 4096;
    bool stop_at_target = true;
    std::uint64_t seed = 1;
};

struct EvalPoint {
    std::size_t epoch = 0;
    double loss = 0.0;
    double fidelity = 0.0;
};

struct TrainResult {
    std::vector<EvalPoint> history;
    double final_fidelity = 0.0;
    double best_fidelity = 0.0;
    std::size_t epochs = 0;
    bool success = false;
    bool diverged = false;
};

/// Minimizes the cross-entropy -E_target[log P_model] with Adam.
TrainResult train(ArnnModel &m, const Target &t, const TrainConfig &cfg, std::uint64_t seed);

struct SweepCell {
    std::size_t width = 0;
    std::size_t seed = 0;
    TrainResult result;
};

struct SweepResult {
    std::size_t size = 0;
    std::vector<std::size_t> widths;         // widths actually trained
    std::vector<double> best_fidelity;       // best over seeds, per trained width
    std::optional<std::size_t> n_d_min;
    std::vector<SweepCell> cells;
};

inline const std::vector<std::size_t> kDefaultWidthGrid{1, 2, 4, 6, 8, 12, 16, 24, 32, 48, 64};

/// Trains ascending widths (best of cfg.seeds) and stops at the first width
/// whose best fidelity reaches the target.
SweepResult sweep_min_width(const Target &t, std::size_t size, const std::vector<std::size_t> &widths,
                            const TrainConfig &cfg);

}  // namespace vbscale

#endif  // VBSCALE_ARNN_HPP

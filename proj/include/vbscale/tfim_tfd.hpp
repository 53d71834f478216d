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


#ifndef VBSCALE_TFIM_TFD_HPP
#define VBSCALE_TFIM_TFD_HPP

#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "vbscale/gf2.hpp"
#include "vbscale/skewlinalg.hpp"
#include "vbscale/stabilizer_cmi.hpp"

namespace vbscale {

/// H = -J sum_{i<n} X_i X_{i+1} + J X_n X_1 - h sum_i Z_i.
/// Bit 1 means Z = -1, i.e. an occupied Jordan-Wigner fermion.
struct TfimModel {
    std::size_t n = 0;
    double j_coupling = 1.0;
    double h_field = 0.0;

    void validate() const;
    bool at_critical_point() const { return h_field == j_coupling; }
    /// Fermion-parity sector (+1 even, -1 odd): [[A, B], [-B, -A]] with
    /// A = 2h I - J (S + S^T), B = -J (S - S^T), S_{j,j+1} = 1, S_{n,1} = parity.
    Eigen::MatrixXd sector_matrix(int parity) const;
};

/// Blocks of T = exp(-tau M) for one parity sector.
struct SectorKernel {
    int parity = 1;
    Eigen::MatrixXd t22;
    Eigen::MatrixXd x;      // T12 T22^-1
    Eigen::MatrixXd z;      // T22^-1 T21
    Eigen::MatrixXd exp_y;  // (T22^T)^-1
    Eigen::MatrixXd big;    // [[X, e^Y], [-(e^Y)^T, Z]]
    SignLog det_t22;
};

/// Matrix elements of exp(-tau H) in both parity sectors.
struct TfimKernel {
    std::size_t n = 0;
    double tau = 0.0;
    SectorKernel even;
    SectorKernel odd;

    const SectorKernel &sector(int parity) const { return parity > 0 ? even : odd; }
};

TfimKernel build_kernel(const TfimModel &m, double tau);

/// <a| exp(-tau H) |b>; zero (sign 0) when the parities of a and b differ.
/// The square root of det(T22) is taken on |det|.
SignLog kernel_element(const TfimKernel &k, const BitString &a, const BitString &b);

/// Z(beta) from the momentum-space products over the periodic and
/// antiperiodic grids, in log form.
SignLog partition_function(const TfimModel &m, double beta);

/// Unnormalized joint weight w(a,b) = |<a|e^{-beta H/2}|b>|^2 and the
/// marginal weight w_A(a) = <a|e^{-beta H}|a>.
class TfimWeights {
   public:
    TfimWeights(const TfimModel &m, double beta);

    const TfimModel &model() const { return model_; }
    double beta() const { return beta_; }
    SignLog z_beta() const { return z_; }
    SignLog joint(const BitString &a, const BitString &b) const;
    SignLog marginal(const BitString &a) const;

   private:
    TfimModel model_;
    double beta_ = 0.0;
    TfimKernel half_;
    TfimKernel full_;
    SignLog z_;
};

inline constexpr std::size_t kMaxExactTfimSites = 10;

/// Exact mutual information between the two copies, summing all 4^n weights.
CmiResult cmi_exact(const TfimModel &m, double beta);

struct McmcOptions {
    std::size_t n_steps = 100000;
    std::size_t burn_in = 0;     // default: n_steps / 10
    std::size_t n_batches = 50;
};

/// Metropolis over (a, b) with parity-preserving proposals; the estimator
/// log2 Z + mean[log2 w - log2 w_A - log2 w_B] with a batch-means error.
CmiResult cmi_mcmc(const TfimModel &m, double beta, const McmcOptions &opt, std::mt19937_64 &rng);

/// n - (beta^2 / 2 ln 2) h^2 n - (beta^2 / 4) J^2 n [1/ln 2 - log2(beta^2 J^2 / 4)].
double small_beta_formula(std::size_t n, double beta, double j, double h);

}  // namespace vbscale

#endif  // VBSCALE_TFIM_TFD_HPP

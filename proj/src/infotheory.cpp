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


#include "vbscale/infotheory.hpp"

#include <cmath>
#include <stdexcept>

namespace vbscale {

namespace {

constexpr double kNormTol = 1e-9;

double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

EntropyEstimate mean_and_stderr(const std::vector<double> &v) {
    EntropyEstimate e;
    e.n_samples = v.size();
    if (v.empty()) {
        return e;
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    e.bits = mean;
    if (v.size() > 1) {
        e.stderr_bits = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return e;
}

}  // namespace

JointTable::JointTable(Eigen::MatrixXd probs) : p(std::move(probs)) { validate(); }

void JointTable::validate() const {
    if ((p.array() < 0.0).any()) {
        throw std::invalid_argument("joint table has negative entries");
    }
    if (std::abs(p.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("joint table mass differs from 1");
    }
}

std::vector<double> JointTable::marginal_a() const {
    Eigen::VectorXd r = p.rowwise().sum();
    return {r.data(), r.data() + r.size()};
}

std::vector<double> JointTable::marginal_b() const {
    Eigen::VectorXd c = p.colwise().sum().transpose();
    return {c.data(), c.data() + c.size()};
}

double entropy(const std::vector<double> &p) {
    double total = 0.0;
    double acc = 0.0;
    for (double x : p) {
        if (x < 0.0) {
            throw std::invalid_argument("probability vector has negative entries");
        }
        total += x;
        acc -= plogp(x);
    }
    if (std::abs(total - 1.0) > kNormTol) {
        throw std::invalid_argument("probability vector is not normalized");
    }
    return acc;
}

double binary_entropy(double x) { return -plogp(x) - plogp(1.0 - x); }

double mutual_information(const JointTable &q) {
    const auto pa = q.marginal_a();
    const auto pb = q.marginal_b();
    double mi = 0.0;
    for (Eigen::Index a = 0; a < q.p.rows(); ++a) {
        for (Eigen::Index b = 0; b < q.p.cols(); ++b) {
            const double x = q.p(a, b);
            if (x > 0.0) {
                mi += x * std::log2(x / (pa[static_cast<std::size_t>(a)] * pb[static_cast<std::size_t>(b)]));
            }
        }
    }
    return mi;
}

RankBound rank_bound_check(const JointTable &q) {
    RankBound out;
    out.mi_bits = mutual_information(q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q.p);
    const auto &s = svd.singularValues();
    const double tol = 1e-10 * (s.size() > 0 ? s(0) : 0.0);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) > tol) {
            ++out.rank;
        }
    }
    out.log2_rank = out.rank > 0 ? std::log2(static_cast<double>(out.rank)) : 0.0;
    out.holds = out.mi_bits <= out.log2_rank + 1e-9;
    return out;
}

Chi2Check chi2_identity_check(const JointTable &q) {
    const auto pa = q.marginal_a();
    const auto pb = q.marginal_b();
    for (double x : pa) {
        if (!(x > 0.0)) {
            throw std::invalid_argument("chi-squared identity needs strictly positive marginals");
        }
    }
    for (double x : pb) {
        if (!(x > 0.0)) {
            throw std::invalid_argument("chi-squared identity needs strictly positive marginals");
        }
    }
    Chi2Check out;
    for (Eigen::Index a = 0; a < q.p.rows(); ++a) {
        for (Eigen::Index b = 0; b < q.p.cols(); ++b) {
            const double prod = pa[static_cast<std::size_t>(a)] * pb[static_cast<std::size_t>(b)];
            const double x = q.p(a, b);
            out.chi2 += (x - prod) * (x - prod) / prod;
            out.frobenius_sq += x * x / prod;
        }
    }
    out.deviation = std::abs(out.frobenius_sq - 1.0 - out.chi2);
    out.mi_bound_holds = mutual_information(q) <= std::log2(1.0 + out.chi2) + 1e-9;
    return out;
}

ContinuityCheck entropy_continuity_check(const std::vector<double> &p, const std::vector<double> &q) {
    if (p.size() != q.size() || p.size() < 2) {
        throw std::invalid_argument("continuity check needs two vectors of the same size >= 2");
    }
    ContinuityCheck out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        out.eps += std::abs(p[k] - q[k]);
    }
    if (out.eps > 1.0 + 1e-12) {
        throw std::invalid_argument("continuity bound needs ||p - q||_1 <= 1");
    }
    const double half = std::min(out.eps, 1.0) / 2.0;
    out.lhs = std::abs(entropy(p) - entropy(q));
    out.rhs = half * std::log2(static_cast<double>(p.size() - 1)) + binary_entropy(half);
    out.holds = out.lhs <= out.rhs + 1e-9;
    return out;
}

MiEstimate mi_from_exact_logprobs(const ExactSampler &draw, std::size_t n_samples, std::mt19937_64 &rng) {
    if (!draw) {
        throw std::invalid_argument("sampler must provide exact log-probabilities");
    }
    std::vector<double> ha;
    std::vector<double> hb;
    std::vector<double> hab;
    std::vector<double> mi;
    ha.reserve(n_samples);
    hb.reserve(n_samples);
    hab.reserve(n_samples);
    mi.reserve(n_samples);
    const double inv_ln2 = 1.0 / std::log(2.0);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const auto lp = draw(rng);
        if (!std::isfinite(lp.log_joint) || !std::isfinite(lp.log_a) || !std::isfinite(lp.log_b)) {
            throw std::runtime_error("sampler returned a string of zero probability");
        }
        ha.push_back(-lp.log_a * inv_ln2);
        hb.push_back(-lp.log_b * inv_ln2);
        hab.push_back(-lp.log_joint * inv_ln2);
        mi.push_back((lp.log_joint - lp.log_a - lp.log_b) * inv_ln2);
    }
    MiEstimate out;
    out.h_a = mean_and_stderr(ha);
    out.h_b = mean_and_stderr(hb);
    out.h_ab = mean_and_stderr(hab);
    const auto m = mean_and_stderr(mi);
    out.mi_bits = m.bits;
    out.stderr_bits = m.stderr_bits;
    return out;
}

}  // namespace vbscale

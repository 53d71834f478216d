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


#include "vbscale/tfim_tfd.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace vbscale {

namespace {

int parity_of(const BitString &s) {
    std::size_t w = 0;
    for (auto v : s) {
        w += v;
    }
    return w % 2 == 0 ? 1 : -1;
}

std::uint64_t pack(const BitString &s) {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        key |= static_cast<std::uint64_t>(s[k] & 1u) << k;
    }
    return key;
}

BitString unpack(std::uint64_t key, std::size_t n) {
    BitString s(n);
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = static_cast<std::uint8_t>((key >> k) & 1u);
    }
    return s;
}

SectorKernel make_sector(const TfimModel &m, int parity, double tau) {
    const auto n = static_cast<Eigen::Index>(m.n);
    const Eigen::MatrixXd t = expm(-tau * m.sector_matrix(parity));
    SectorKernel k;
    k.parity = parity;
    k.t22 = t.bottomRightCorner(n, n);
    const auto lu = lu_det_inverse(k.t22);
    k.det_t22 = lu.det;
    k.x = t.topRightCorner(n, n) * lu.inv;
    k.z = lu.inv * t.bottomLeftCorner(n, n);
    k.exp_y = lu.inv.transpose();
    k.big.resize(2 * n, 2 * n);
    k.big << k.x, k.exp_y, -k.exp_y.transpose(), k.z;
    return k;
}

// log(2 cosh x) and log(2 sinh x) for x >= 0.
double log_2cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)); }

SignLog signed_2sinh(double x) {
    if (x == 0.0) {
        return SignLog::zero();
    }
    return {1, x + std::log1p(-std::exp(-2.0 * x))};
}

}  // namespace

void TfimModel::validate() const {
    if (n < 2) {
        throw std::invalid_argument("TFIM chain needs at least two sites");
    }
    if (n > 62) {
        throw std::invalid_argument("TFIM chain is limited to 62 sites");
    }
    if (!std::isfinite(j_coupling) || !std::isfinite(h_field)) {
        throw std::invalid_argument("TFIM couplings must be finite");
    }
}

Eigen::MatrixXd TfimModel::sector_matrix(int parity) const {
    validate();
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        s(j, j + 1) = 1.0;
    }
    s(m - 1, 0) = parity > 0 ? 1.0 : -1.0;
    const Eigen::MatrixXd a = 2.0 * h_field * Eigen::MatrixXd::Identity(m, m) - j_coupling * (s + s.transpose());
    const Eigen::MatrixXd b = -j_coupling * (s - s.transpose());
    Eigen::MatrixXd out(2 * m, 2 * m);
    out << a, b, -b, -a;
    return out;
}

TfimKernel build_kernel(const TfimModel &m, double tau) {
    m.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("imaginary time must be finite and >= 0");
    }
    TfimKernel k;
    k.n = m.n;
    k.tau = tau;
    k.even = make_sector(m, 1, tau);
    k.odd = make_sector(m, -1, tau);
    return k;
}

SignLog kernel_element(const TfimKernel &k, const BitString &a, const BitString &b) {
    if (a.size() != k.n || b.size() != k.n) {
        throw std::invalid_argument("kernel arguments must have n bits");
    }
    const int pa = parity_of(a);
    if (pa != parity_of(b)) {
        return SignLog::zero();
    }
    const auto &sec = k.sector(pa);
    std::vector<Eigen::Index> idx;
    std::size_t na = 0;
    std::size_t nb = 0;
    for (std::size_t j = 0; j < k.n; ++j) {
        if (a[j]) {
            idx.push_back(static_cast<Eigen::Index>(j));
            ++na;
        }
    }
    for (std::size_t i = 0; i < k.n; ++i) {
        if (b[i]) {
            idx.push_back(static_cast<Eigen::Index>(k.n + i));
            ++nb;
        }
    }
    const auto s = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(s, s);
    for (Eigen::Index r = 0; r < s; ++r) {
        for (Eigen::Index c = 0; c < s; ++c) {
            sub(r, c) = sec.big(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
        }
    }
    SignLog out = pfaffian(sub) * sec.det_t22.sqrt_abs();
    if (((nb * (nb + 2 * na + 1)) / 2) % 2 != 0) {
        out = -out;
    }
    return out;
}

SignLog partition_function(const TfimModel &m, double beta) {
    m.validate();
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be finite and >= 0");
    }
    const double pi = std::acos(-1.0);
    const double nn = static_cast<double>(m.n);
    SignLog z = SignLog::zero();
    for (double theta : {0.0, pi}) {
        double log_c = 0.0;
        SignLog s{1, 0.0};
        for (std::size_t q = 0; q < m.n; ++q) {
            const double k = (2.0 * pi * static_cast<double>(q) + theta) / nn;
            const double eps = 2.0 * std::hypot(m.h_field - m.j_coupling * std::cos(k), m.j_coupling * std::sin(k));
            log_c += log_2cosh(0.5 * beta * eps);
            s = s * signed_2sinh(0.5 * beta * eps);
        }
        // Vacuum parity: sgn(h - J) for the periodic grid (sgn 0 = +1), -1 for the antiperiodic one.
        const int vac = theta == 0.0 ? (m.h_field - m.j_coupling < 0.0 ? -1 : 1) : -1;
        if (vac < 0) {
            s = -s;
        }
        z = z + (SignLog{1, log_c - std::log(2.0)} + SignLog{s.sign, s.log_abs - std::log(2.0)});
    }
    return z;
}

TfimWeights::TfimWeights(const TfimModel &m, double beta)
    : model_(m), beta_(beta), half_(build_kernel(m, 0.5 * beta)), full_(build_kernel(m, beta)),
      z_(partition_function(m, beta)) {}

SignLog TfimWeights::joint(const BitString &a, const BitString &b) const {
    const auto k = kernel_element(half_, a, b);
    if (k.sign == 0) {
        return SignLog::zero();
    }
    return {1, 2.0 * k.log_abs};
}

SignLog TfimWeights::marginal(const BitString &a) const {
    const auto k = kernel_element(full_, a, a);
    if (k.sign == 0) {
        return SignLog::zero();
    }
    return {1, k.log_abs};
}

CmiResult cmi_exact(const TfimModel &m, double beta) {
    m.validate();
    if (m.n > kMaxExactTfimSites) {
        throw std::invalid_argument("exact TFIM mutual information is limited to n <= 10");
    }
    const TfimWeights w(m, beta);
    const std::size_t dim = std::size_t{1} << m.n;
    const double log_z = w.z_beta().log_abs;
    std::vector<BitString> strings;
    strings.reserve(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        strings.push_back(unpack(s, m.n));
    }
    std::vector<double> p(dim * dim, 0.0);
    std::vector<double> pa(dim, 0.0);
    std::vector<double> pb(dim, 0.0);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            const auto v = w.joint(strings[a], strings[b]);
            if (v.sign == 0) {
                continue;
            }
            const double x = std::exp(v.log_abs - log_z);
            p[a * dim + b] = x;
            pa[a] += x;
            pb[b] += x;
        }
    }
    double mi = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            const double x = p[a * dim + b];
            if (x > 0.0) {
                mi += x * std::log2(x / (pa[a] * pb[b]));
            }
        }
    }
    return {mi, CmiMethod::exact_enumeration, std::nullopt};
}

CmiResult cmi_mcmc(const TfimModel &m, double beta, const McmcOptions &opt, std::mt19937_64 &rng) {
    m.validate();
    const std::size_t burn = opt.burn_in > 0 ? opt.burn_in : opt.n_steps / 10;
    if (opt.n_batches < 2 || opt.n_steps < burn + opt.n_batches) {
        throw std::invalid_argument("MCMC needs more steps than burn-in plus one per batch");
    }
    const TfimWeights w(m, beta);
    const std::size_t n = m.n;
    std::unordered_map<std::uint64_t, double> marginal_cache;
    auto log_marginal = [&](const BitString &s) {
        const auto key = pack(s);
        auto it = marginal_cache.find(key);
        if (it != marginal_cache.end()) {
            return it->second;
        }
        const auto v = w.marginal(s);
        if (v.sign == 0) {
            throw std::runtime_error("marginal weight vanished on a visited string");
        }
        return marginal_cache.emplace(key, v.log_abs).first->second;
    };

    std::uniform_int_distribution<std::size_t> site(0, n - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    BitString a(n);
    BitString b(n);
    SignLog cur = SignLog::zero();
    for (int attempt = 0; attempt < 10000 && cur.sign == 0; ++attempt) {
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = static_cast<std::uint8_t>(rng() & 1u);
        }
        b = a;
        cur = w.joint(a, b);
    }
    if (cur.sign == 0) {
        throw std::runtime_error("could not find a starting pair of nonzero weight");
    }

    const std::size_t kept = opt.n_steps - burn;
    const std::size_t per_batch = kept / opt.n_batches;
    std::vector<double> batch_sum(opt.n_batches, 0.0);
    const double inv_ln2 = 1.0 / std::log(2.0);
    for (std::size_t step = 0; step < opt.n_steps; ++step) {
        BitString a2 = a;
        BitString b2 = b;
        if (unif(rng) < 0.5) {
            a2[site(rng)] ^= 1u;
            b2[site(rng)] ^= 1u;
        } else {
            BitString &target = unif(rng) < 0.5 ? a2 : b2;
            const std::size_t i = site(rng);
            std::size_t j = site(rng);
            while (j == i) {
                j = site(rng);
            }
            target[i] ^= 1u;
            target[j] ^= 1u;
        }
        const auto prop = w.joint(a2, b2);
        if (prop.sign != 0 && std::log(unif(rng)) < prop.log_abs - cur.log_abs) {
            a = std::move(a2);
            b = std::move(b2);
            cur = prop;
        }
        if (step >= burn) {
            const std::size_t k = (step - burn) / per_batch;
            if (k < opt.n_batches) {
                batch_sum[k] += (cur.log_abs - log_marginal(a) - log_marginal(b)) * inv_ln2;
            }
        }
    }
    double mean = 0.0;
    for (auto &s : batch_sum) {
        s /= static_cast<double>(per_batch);
        mean += s;
    }
    mean /= static_cast<double>(opt.n_batches);
    double ss = 0.0;
    for (double s : batch_sum) {
        ss += (s - mean) * (s - mean);
    }
    const double se = std::sqrt(ss / static_cast<double>(opt.n_batches - 1) / static_cast<double>(opt.n_batches));
    return {w.z_beta().log_abs * inv_ln2 + mean, CmiMethod::sampled, se};
}

double small_beta_formula(std::size_t n, double beta, double j, double h) {
    const double ln2 = std::log(2.0);
    const double nn = static_cast<double>(n);
    double out = nn - beta * beta / (2.0 * ln2) * h * h * nn;
    if (j != 0.0 && beta != 0.0) {
        out -= beta * beta / 4.0 * j * j * nn * (1.0 / ln2 - std::log2(beta * beta * j * j / 4.0));
    }
    return out;
}

}  // namespace vbscale

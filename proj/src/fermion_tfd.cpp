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


#include "vbscale/fermion_tfd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vbscale/infotheory.hpp"
#include "vbscale/skewlinalg.hpp"

namespace vbscale {

void BcsChain::validate() const {
    if (n < 1) {
        throw std::invalid_argument("chain needs at least one site");
    }
    if (!std::isfinite(j_coupling) || !std::isfinite(h_field)) {
        throw std::invalid_argument("chain couplings must be finite");
    }
}

Eigen::MatrixXd BcsChain::bdg_matrix() const {
    validate();
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        s(j, j + 1) = 1.0;
    }
    const Eigen::MatrixXd a = 2.0 * h_field * Eigen::MatrixXd::Identity(m, m) - j_coupling * (s + s.transpose());
    const Eigen::MatrixXd b = -j_coupling * (s - s.transpose());
    Eigen::MatrixXd out(2 * m, 2 * m);
    out << a, b, -b, -a;
    return out;
}

BdgModes diagonalize(const BcsChain &chain) {
    const Eigen::MatrixXd big = chain.bdg_matrix();
    const auto m = static_cast<Eigen::Index>(chain.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(big);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("BdG diagonalization failed");
    }
    const auto &w = es.eigenvalues();
    const auto &v = es.eigenvectors();
    const double tol = 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());

    std::vector<Eigen::Index> positive;
    std::vector<Eigen::Index> zero;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (w(k) > tol) {
            positive.push_back(k);
        } else if (w(k) >= -tol) {
            zero.push_back(k);
        }
    }

    BdgModes out;
    out.eps.resize(m);
    out.x.resize(m, m);
    out.y.resize(m, m);
    Eigen::Index col = 0;

    if (!zero.empty()) {
        // The kernel is closed under the particle-hole swap (x; y) -> (y; x).
        // Pair its +1 and -1 eigenvectors so that each chosen vector and its
        // swap partner are orthonormal.
        Eigen::MatrixXd ker(2 * m, static_cast<Eigen::Index>(zero.size()));
        for (std::size_t k = 0; k < zero.size(); ++k) {
            ker.col(static_cast<Eigen::Index>(k)) = v.col(zero[k]);
        }
        Eigen::MatrixXd swap = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        swap.topRightCorner(m, m).setIdentity();
        swap.bottomLeftCorner(m, m).setIdentity();
        const Eigen::MatrixXd restricted = ker.transpose() * swap * ker;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(0.5 * (restricted + restricted.transpose()));
        const Eigen::MatrixXd basis = ker * ps.eigenvectors();
        const auto half = static_cast<Eigen::Index>(zero.size() / 2);
        if (zero.size() % 2 != 0 || ps.eigenvalues()(half - 1) > 0.0 || ps.eigenvalues()(half) < 0.0) {
            throw std::runtime_error("BdG zero modes are not particle-hole paired");
        }
        for (Eigen::Index k = 0; k < half; ++k) {
            const Eigen::VectorXd vec = (basis.col(k) + basis.col(half + k)) / std::sqrt(2.0);
            out.eps(col) = 0.0;
            out.x.col(col) = vec.head(m);
            out.y.col(col) = vec.tail(m);
            ++col;
        }
        out.zero_modes = static_cast<std::size_t>(half);
    }
    for (auto k : positive) {
        if (col >= m) {
            throw std::runtime_error("BdG spectrum is not symmetric about zero");
        }
        out.eps(col) = w(k);
        out.x.col(col) = v.col(k).head(m);
        out.y.col(col) = v.col(k).tail(m);
        ++col;
    }
    if (col != m) {
        throw std::runtime_error("BdG spectrum is not symmetric about zero");
    }
    return out;
}

GaussianTFD build_tfd(const BcsChain &chain, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be finite and >= 0");
    }
    const auto modes = diagonalize(chain);
    const auto m = static_cast<Eigen::Index>(chain.n);
    GaussianTFD t;
    t.chain = chain;
    t.beta = beta;
    t.eps = modes.eps;
    t.occ.resize(m);

    // Two annihilators per quasiparticle, written as o = P d + Q d^+.
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (Eigen::Index mu = 0; mu < m; ++mu) {
        const double be = beta * modes.eps(mu);
        const double u = 1.0 / std::sqrt(1.0 + std::exp(-be));
        const double v = std::exp(-0.5 * be) * u;
        t.occ(mu) = 1.0 / (std::exp(be) + 1.0);
        const auto x = modes.x.col(mu);
        const auto y = modes.y.col(mu);
        p.row(2 * mu) << u * x.transpose(), v * y.transpose();
        q.row(2 * mu) << u * y.transpose(), -v * x.transpose();
        p.row(2 * mu + 1) << v * y.transpose(), u * x.transpose();
        q.row(2 * mu + 1) << v * x.transpose(), -u * y.transpose();
    }

    // o |psi> = 0 for |psi> ~ exp(1/2 d^+ F d^+)|0> means P F + Q = 0.
    Eigen::MatrixXd pinv;
    try {
        pinv = lu_det_inverse(p).inv;
    } catch (const SingularMatrix &) {
        t.regularized = true;
        pinv = (p + 1e-12 * Eigen::MatrixXd::Identity(2 * m, 2 * m)).inverse();
    }
    Eigen::MatrixXd f = -pinv * q;
    const double skew = (f + f.transpose()).cwiseAbs().maxCoeff();
    if (skew > 1e-8 * std::max(1.0, f.cwiseAbs().maxCoeff())) {
        throw std::runtime_error("reconstructed pairing matrix is not antisymmetric");
    }
    t.pairing = 0.5 * (f - f.transpose());
    const Eigen::MatrixXd gram =
        Eigen::MatrixXd::Identity(2 * m, 2 * m) + t.pairing.transpose() * t.pairing;
    t.log_norm = -0.25 * log_det(gram).log_abs;

    t.hopping = q.transpose() * q;
    t.anomalous = p.transpose() * q;
    const Eigen::Index nm = 2 * m;
    t.majorana = Eigen::MatrixXd::Zero(2 * nm, 2 * nm);
    for (Eigen::Index i = 0; i < nm; ++i) {
        for (Eigen::Index j = 0; j < nm; ++j) {
            const double val = 2.0 * (t.anomalous(i, j) + t.hopping(i, j)) - (i == j ? 1.0 : 0.0);
            t.majorana(2 * i, 2 * j + 1) = val;
            t.majorana(2 * j + 1, 2 * i) = -val;
        }
    }
    return t;
}

double amplitude(const GaussianTFD &t, const BitString &x) {
    if (x.size() != t.n_modes()) {
        throw std::invalid_argument("doubled string has the wrong length");
    }
    std::vector<Eigen::Index> occ;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k]) {
            occ.push_back(static_cast<Eigen::Index>(k));
        }
    }
    if (occ.size() % 2 != 0) {
        return 0.0;
    }
    const auto k = static_cast<Eigen::Index>(occ.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) {
            sub(r, c) = t.pairing(occ[static_cast<std::size_t>(r)], occ[static_cast<std::size_t>(c)]);
        }
    }
    const auto pf = pfaffian(sub);
    if (pf.sign == 0) {
        return 0.0;
    }
    return pf.sign * std::exp(pf.log_abs + t.log_norm);
}

Ordering Ordering::separate(std::size_t n) {
    Ordering o;
    o.perm.resize(2 * n);
    std::iota(o.perm.begin(), o.perm.end(), 0);
    o.name = "separate";
    return o;
}

Ordering Ordering::alternate(std::size_t n) {
    Ordering o;
    for (std::size_t i = 0; i < n; ++i) {
        o.perm.push_back(i);
        o.perm.push_back(n + i);
    }
    o.name = "alternate";
    return o;
}

Ordering Ordering::custom(std::vector<std::size_t> perm) {
    Ordering o;
    o.perm = std::move(perm);
    o.name = "custom";
    o.validate(o.perm.size());
    return o;
}

Ordering Ordering::b_first(std::size_t cut) const {
    if (cut > perm.size()) {
        throw std::invalid_argument("cut beyond the ordering");
    }
    Ordering o;
    o.perm.assign(perm.begin() + static_cast<std::ptrdiff_t>(cut), perm.end());
    o.perm.insert(o.perm.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cut));
    o.name = name + "-bfirst";
    return o;
}

void Ordering::validate(std::size_t n_modes) const {
    if (perm.size() != n_modes) {
        throw std::invalid_argument("ordering length differs from the number of modes");
    }
    std::vector<bool> seen(n_modes, false);
    for (auto p : perm) {
        if (p >= n_modes || seen[p]) {
            throw std::invalid_argument("ordering is not a permutation");
        }
        seen[p] = true;
    }
}

Ordering ordering_from_name(const std::string &name, std::size_t n) {
    if (name == "separate") {
        return Ordering::separate(n);
    }
    if (name == "alternate") {
        return Ordering::alternate(n);
    }
    throw std::invalid_argument("unknown ordering '" + name + "' (separate|alternate)");
}

SamplerState::SamplerState(const GaussianTFD &t, const Ordering &o) : perm_(o.perm) {
    o.validate(t.n_modes());
    // Permute Majoranas so that step k owns rows 2k, 2k+1.
    const auto nm = static_cast<Eigen::Index>(t.n_modes());
    std::vector<Eigen::Index> idx;
    for (auto mode : perm_) {
        idx.push_back(2 * static_cast<Eigen::Index>(mode));
        idx.push_back(2 * static_cast<Eigen::Index>(mode) + 1);
    }
    g_.resize(2 * nm, 2 * nm);
    for (Eigen::Index r = 0; r < 2 * nm; ++r) {
        for (Eigen::Index c = 0; c < 2 * nm; ++c) {
            g_(r, c) = t.majorana(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
        }
    }
}

double SamplerState::conditional_prob() const {
    if (done()) {
        throw std::logic_error("all modes are already fixed");
    }
    const double raw = 0.5 * (1.0 + g_(0, 1));
    const double clamped = std::clamp(raw, 0.0, 1.0);
    max_clamp_ = std::max(max_clamp_, std::abs(raw - clamped));
    return clamped;
}

void SamplerState::condition(std::uint8_t bit) {
    const double p1 = conditional_prob();
    const double pr = bit ? p1 : 1.0 - p1;
    if (pr < 1e-12) {
        throw std::runtime_error("conditioning on an outcome of vanishing probability");
    }
    log_prob_ += std::log(pr);
    const Eigen::Index rest = g_.rows() - 2;
    if (rest > 0) {
        const double s = bit ? 1.0 : -1.0;
        const Eigen::VectorXd a = g_.col(0).tail(rest);
        const Eigen::VectorXd b = g_.col(1).tail(rest);
        const double den = 1.0 + s * g_(0, 1);
        Eigen::MatrixXd next = g_.bottomRightCorner(rest, rest);
        next.noalias() += (s / den) * (b * a.transpose() - a * b.transpose());
        g_ = std::move(next);
    } else {
        g_.resize(0, 0);
    }
    ++pos_;
}

namespace {

struct Drawn {
    BitString bits;
    double log_joint = 0.0;
    double log_prefix = 0.0;
};

Drawn draw(const GaussianTFD &t, const Ordering &o, std::size_t cut, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SamplerState st(t, o);
    Drawn d;
    d.bits.assign(t.n_modes(), 0);
    while (!st.done()) {
        if (st.position() == cut) {
            d.log_prefix = st.log_prob();
        }
        const auto mode = st.next_mode();
        const std::uint8_t bit = unif(rng) < st.conditional_prob() ? 1 : 0;
        st.condition(bit);
        d.bits[mode] = bit;
    }
    if (cut == o.perm.size()) {
        d.log_prefix = st.log_prob();
    }
    d.log_joint = st.log_prob();
    return d;
}

// Probabilities of every full string, indexed with token 0 as the highest bit.
void enumerate(const SamplerState &st, std::size_t index, double prob, std::vector<double> &out) {
    if (st.done()) {
        out[index] = prob;
        return;
    }
    const double p1 = st.conditional_prob();
    for (std::uint8_t bit : {std::uint8_t{0}, std::uint8_t{1}}) {
        const double pr = bit ? p1 : 1.0 - p1;
        if (pr < 1e-13) {
            continue;
        }
        SamplerState next = st;
        next.condition(bit);
        enumerate(next, 2 * index + bit, prob * pr, out);
    }
}

double entropy_bits(const std::vector<double> &p) {
    double acc = 0.0;
    for (double x : p) {
        if (x > 0.0) {
            acc -= x * std::log2(x);
        }
    }
    return acc;
}

}  // namespace

TfdSample sample(const GaussianTFD &t, const Ordering &o, std::mt19937_64 &rng) {
    auto d = draw(t, o, 0, rng);
    return {std::move(d.bits), d.log_joint};
}

double prefix_log_prob(const GaussianTFD &t, const Ordering &o, const BitString &x, std::size_t steps) {
    if (x.size() != t.n_modes() || steps > x.size()) {
        throw std::invalid_argument("prefix length or string size out of range");
    }
    SamplerState st(t, o);
    for (std::size_t k = 0; k < steps; ++k) {
        const double p1 = st.conditional_prob();
        const std::uint8_t bit = x[st.next_mode()];
        if ((bit ? p1 : 1.0 - p1) < 1e-12) {
            return -std::numeric_limits<double>::infinity();
        }
        st.condition(bit);
    }
    return st.log_prob();
}

CmiResult tfd_cmi(const GaussianTFD &t, const Ordering &o, std::size_t cut, std::size_t n_samples,
                  std::mt19937_64 &rng, TfdCmiMode mode) {
    const std::size_t nm = t.n_modes();
    o.validate(nm);
    if (cut < 1 || cut >= nm) {
        throw std::invalid_argument("cut must lie in [1, 2n-1]");
    }
    if (mode == TfdCmiMode::automatic) {
        mode = nm <= kMaxExactTfdModes ? TfdCmiMode::exact : TfdCmiMode::sampled;
    }
    if (mode == TfdCmiMode::exact) {
        if (nm > kMaxExactTfdModes) {
            throw std::invalid_argument("exact TFD enumeration is limited to 2n <= 20");
        }
        std::vector<double> joint(std::size_t{1} << nm, 0.0);
        enumerate(SamplerState(t, o), 0, 1.0, joint);
        const std::size_t nb = nm - cut;
        std::vector<double> pa(std::size_t{1} << cut, 0.0);
        std::vector<double> pb(std::size_t{1} << nb, 0.0);
        for (std::size_t k = 0; k < joint.size(); ++k) {
            pa[k >> nb] += joint[k];
            pb[k & ((std::size_t{1} << nb) - 1)] += joint[k];
        }
        return {entropy_bits(pa) + entropy_bits(pb) - entropy_bits(joint), CmiMethod::exact_enumeration,
                std::nullopt};
    }
    if (n_samples < 2) {
        throw std::invalid_argument("sampled CMI needs at least two samples");
    }
    const Ordering rev = o.b_first(cut);
    const ExactSampler sampler = [&](std::mt19937_64 &g) {
        const auto d = draw(t, o, cut, g);
        ExactLogProbs lp;
        lp.log_joint = d.log_joint;
        lp.log_a = d.log_prefix;
        lp.log_b = prefix_log_prob(t, rev, d.bits, nm - cut);
        return lp;
    };
    const auto est = mi_from_exact_logprobs(sampler, n_samples, rng);
    return {est.mi_bits, CmiMethod::sampled, est.stderr_bits};
}

}  // namespace vbscale

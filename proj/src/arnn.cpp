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


#include "vbscale/arnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vbscale/families.hpp"

namespace vbscale {

namespace {

using Mat = Eigen::MatrixXd;

Mat sigmoid(const Mat &a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }

// One-hot of bit i-1 for every string in the batch; zero columns at i = 0.
Mat inputs(const std::vector<BitString> &batch, std::size_t i) {
    Mat x = Mat::Zero(2, static_cast<Eigen::Index>(batch.size()));
    if (i == 0) {
        return x;
    }
    for (std::size_t b = 0; b < batch.size(); ++b) {
        x(batch[b][i - 1] ? 1 : 0, static_cast<Eigen::Index>(b)) = 1.0;
    }
    return x;
}

struct StepCache {
    Mat x, h_prev, z, r, c, h, p;
};

StepCache cell(const ArnnParams &w, const Mat &x, const Mat &h_prev) {
    StepCache s;
    s.x = x;
    s.h_prev = h_prev;
    s.z = sigmoid((w.wz * x + w.uz * h_prev).colwise() + w.bz);
    s.r = sigmoid((w.wr * x + w.ur * h_prev).colwise() + w.br);
    const Mat rh = s.r.cwiseProduct(h_prev);
    s.c = ((w.wc * x + w.uc * rh).colwise() + w.bc).array().tanh().matrix();
    s.h = h_prev + s.z.cwiseProduct(s.c - h_prev);
    Mat logits = (w.v * s.h).colwise() + w.d;
    // Two-way softmax, shifted for stability.
    const Eigen::RowVectorXd mx = logits.colwise().maxCoeff();
    logits.rowwise() -= mx;
    s.p = logits.array().exp().matrix();
    const Eigen::RowVectorXd norm = s.p.colwise().sum();
    s.p.array().rowwise() /= norm.array();
    return s;
}

std::vector<std::pair<BitString, double>> enumerate_system(const ZCheckSystem &sys) {
    std::vector<std::pair<BitString, double>> out;
    const double p = std::ldexp(1.0, -static_cast<int>(sys.support_dimension()));
    for (auto &z : enumerate_support(sys)) {
        out.emplace_back(std::move(z), p);
    }
    return out;
}

class TfdTarget : public Target {
   public:
    TfdTarget(GaussianTFD t, Ordering o) : t_(std::move(t)), o_(std::move(o)) { o_.validate(t_.n_modes()); }
    std::size_t n_sites() const override { return t_.n_modes(); }
    BitString sample(std::mt19937_64 &rng) const override {
        const auto s = vbscale::sample(t_, o_, rng);
        BitString out(s.bits.size());
        for (std::size_t k = 0; k < o_.perm.size(); ++k) {
            out[k] = s.bits[o_.perm[k]];
        }
        return out;
    }
    double log_prob(const BitString &s) const override {
        const double a = amplitude(t_, to_modes(s));
        return a == 0.0 ? -std::numeric_limits<double>::infinity() : 2.0 * std::log(std::abs(a));
    }
    std::optional<std::vector<std::pair<BitString, double>>> support() const override {
        const std::size_t nm = t_.n_modes();
        if (nm > kMaxListedSupport) {
            return std::nullopt;
        }
        std::vector<std::pair<BitString, double>> out;
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << nm); ++k) {
            BitString s(nm);
            for (std::size_t i = 0; i < nm; ++i) {
                s[i] = static_cast<std::uint8_t>((k >> i) & 1u);
            }
            const double lp = log_prob(s);
            if (std::isfinite(lp)) {
                out.emplace_back(std::move(s), std::exp(lp));
            }
        }
        return out;
    }
    std::string name() const override { return "tfd-" + o_.name; }

   private:
    BitString to_modes(const BitString &s) const {
        BitString x(s.size());
        for (std::size_t k = 0; k < o_.perm.size(); ++k) {
            x[o_.perm[k]] = s[k];
        }
        return x;
    }
    GaussianTFD t_;
    Ordering o_;
};

}  // namespace

ArnnParams ArnnParams::zeros(std::size_t n_d) {
    const auto w = static_cast<Eigen::Index>(n_d);
    ArnnParams p;
    p.wz = p.wr = p.wc = Mat::Zero(w, 2);
    p.uz = p.ur = p.uc = Mat::Zero(w, w);
    p.bz = p.br = p.bc = Eigen::VectorXd::Zero(w);
    p.v = Mat::Zero(2, w);
    p.d = Eigen::VectorXd::Zero(2);
    return p;
}

std::vector<std::pair<std::string, std::size_t>> ArnnParams::layout(std::size_t n_d) {
    return {{"wz", 2 * n_d}, {"wr", 2 * n_d}, {"wc", 2 * n_d}, {"uz", n_d * n_d}, {"ur", n_d * n_d},
            {"uc", n_d * n_d}, {"bz", n_d},     {"br", n_d},     {"bc", n_d},     {"v", 2 * n_d},
            {"d", 2}};
}

std::size_t ArnnParams::size() const {
    std::size_t total = 0;
    for (const auto &[name, len] : layout(width())) {
        total += len;
    }
    return total;
}

Eigen::VectorXd ArnnParams::flatten() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
    Eigen::Index at = 0;
    auto put = [&](const auto &m) {
        out.segment(at, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
        at += m.size();
    };
    put(wz), put(wr), put(wc), put(uz), put(ur), put(uc), put(bz), put(br), put(bc), put(v), put(d);
    return out;
}

void ArnnParams::unflatten(const Eigen::VectorXd &flat) {
    if (flat.size() != static_cast<Eigen::Index>(size())) {
        throw std::invalid_argument("parameter vector has the wrong length");
    }
    Eigen::Index at = 0;
    auto take = [&](auto &m) {
        Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = flat.segment(at, m.size());
        at += m.size();
    };
    take(wz), take(wr), take(wc), take(uz), take(ur), take(uc), take(bz), take(br), take(bc), take(v), take(d);
}

ArnnModel::ArnnModel(std::size_t n_sites, std::size_t n_d) : n_sites_(n_sites), params_(ArnnParams::zeros(n_d)) {
    if (n_sites < 1 || n_d < 1) {
        throw std::invalid_argument("model needs at least one site and one hidden unit");
    }
}

ArnnModel ArnnModel::random(std::size_t n_sites, std::size_t n_d, std::mt19937_64 &rng) {
    ArnnModel m(n_sites, n_d);
    const double k = 1.0 / std::sqrt(static_cast<double>(n_d));
    std::uniform_real_distribution<double> unif(-k, k);
    Eigen::VectorXd flat(static_cast<Eigen::Index>(m.params_.size()));
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
        flat(i) = unif(rng);
    }
    m.params_.unflatten(flat);
    return m;
}

double ArnnModel::log_prob(const BitString &s) const { return log_prob(std::vector<BitString>{s}).front(); }

std::vector<double> ArnnModel::log_prob(const std::vector<BitString> &batch) const {
    const auto nb = static_cast<Eigen::Index>(batch.size());
    for (const auto &s : batch) {
        if (s.size() != n_sites_) {
            throw std::invalid_argument("string length differs from the model size");
        }
    }
    std::vector<double> out(batch.size(), 0.0);
    Mat h = Mat::Zero(static_cast<Eigen::Index>(width()), nb);
    for (std::size_t i = 0; i < n_sites_; ++i) {
        const auto st = cell(params_, inputs(batch, i), h);
        for (Eigen::Index b = 0; b < nb; ++b) {
            out[static_cast<std::size_t>(b)] += std::log(st.p(batch[static_cast<std::size_t>(b)][i] ? 1 : 0, b));
        }
        h = st.h;
    }
    return out;
}

std::pair<double, ArnnParams> ArnnModel::nll_and_grad(const std::vector<BitString> &batch) const {
    if (batch.empty()) {
        throw std::invalid_argument("empty training batch");
    }
    const auto nb = static_cast<Eigen::Index>(batch.size());
    const auto w = static_cast<Eigen::Index>(width());
    const double inv_b = 1.0 / static_cast<double>(nb);
    std::vector<StepCache> steps;
    steps.reserve(n_sites_);
    Mat h = Mat::Zero(w, nb);
    double loss = 0.0;
    for (std::size_t i = 0; i < n_sites_; ++i) {
        steps.push_back(cell(params_, inputs(batch, i), h));
        h = steps.back().h;
        for (Eigen::Index b = 0; b < nb; ++b) {
            loss -= std::log(steps.back().p(batch[static_cast<std::size_t>(b)][i] ? 1 : 0, b));
        }
    }
    loss *= inv_b;

    ArnnParams g = ArnnParams::zeros(width());
    Mat carry = Mat::Zero(w, nb);
    for (std::size_t i = n_sites_; i-- > 0;) {
        const auto &s = steps[i];
        Mat dlogits = s.p;
        for (Eigen::Index b = 0; b < nb; ++b) {
            dlogits(batch[static_cast<std::size_t>(b)][i] ? 1 : 0, b) -= 1.0;
        }
        dlogits *= inv_b;
        g.v.noalias() += dlogits * s.h.transpose();
        g.d += dlogits.rowwise().sum();
        Mat dh = carry;
        dh.noalias() += params_.v.transpose() * dlogits;

        const Mat dz = dh.cwiseProduct(s.c - s.h_prev);
        const Mat dc = dh.cwiseProduct(s.z);
        Mat dprev = dh - dh.cwiseProduct(s.z);

        const Mat dac = dc.cwiseProduct((1.0 - s.c.array().square()).matrix());
        const Mat rh = s.r.cwiseProduct(s.h_prev);
        g.wc.noalias() += dac * s.x.transpose();
        g.uc.noalias() += dac * rh.transpose();
        g.bc += dac.rowwise().sum();
        const Mat drh = params_.uc.transpose() * dac;
        const Mat dr = drh.cwiseProduct(s.h_prev);
        dprev += drh.cwiseProduct(s.r);

        const Mat daz = dz.cwiseProduct(s.z.cwiseProduct((1.0 - s.z.array()).matrix()));
        g.wz.noalias() += daz * s.x.transpose();
        g.uz.noalias() += daz * s.h_prev.transpose();
        g.bz += daz.rowwise().sum();
        dprev.noalias() += params_.uz.transpose() * daz;

        const Mat dar = dr.cwiseProduct(s.r.cwiseProduct((1.0 - s.r.array()).matrix()));
        g.wr.noalias() += dar * s.x.transpose();
        g.ur.noalias() += dar * s.h_prev.transpose();
        g.br += dar.rowwise().sum();
        dprev.noalias() += params_.ur.transpose() * dar;

        carry = std::move(dprev);
    }
    return {loss, std::move(g)};
}

std::vector<std::pair<BitString, double>> ArnnModel::sample(std::mt19937_64 &rng, std::size_t count) const {
    std::vector<BitString> batch(count, BitString(n_sites_, 0));
    std::vector<double> lp(count, 0.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Mat h = Mat::Zero(static_cast<Eigen::Index>(width()), static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < n_sites_; ++i) {
        const auto st = cell(params_, inputs(batch, i), h);
        for (std::size_t b = 0; b < count; ++b) {
            const double p1 = st.p(1, static_cast<Eigen::Index>(b));
            const std::uint8_t bit = unif(rng) < p1 ? 1 : 0;
            batch[b][i] = bit;
            lp[b] += std::log(bit ? p1 : st.p(0, static_cast<Eigen::Index>(b)));
        }
        h = st.h;
    }
    std::vector<std::pair<BitString, double>> out;
    out.reserve(count);
    for (std::size_t b = 0; b < count; ++b) {
        out.emplace_back(std::move(batch[b]), lp[b]);
    }
    return out;
}

StabilizerTarget::StabilizerTarget(ZCheckSystem sys, std::string name)
    : sys_(std::move(sys)), dist_(sys_), name_(std::move(name)) {}

std::optional<std::vector<std::pair<BitString, double>>> StabilizerTarget::support() const {
    if (sys_.support_dimension() > kMaxListedSupport) {
        return std::nullopt;
    }
    return enumerate_system(sys_);
}

std::unique_ptr<Target> bell_chain_target(std::size_t n) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("Bell-pair chain needs an even number of sites");
    }
    GF2Matrix m(n / 2, n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        m.set(k, 2 * k, true);
        m.set(k, 2 * k + 1, true);
    }
    return std::make_unique<StabilizerTarget>(ZCheckSystem(std::move(m)), "bell");
}

std::unique_ptr<Target> delta_target(std::size_t n) {
    return std::make_unique<StabilizerTarget>(ZCheckSystem(GF2Matrix::identity(n)), "delta");
}

std::unique_ptr<Target> checkerboard_target(std::size_t l, double gamma) {
    return std::make_unique<StabilizerTarget>(checkerboard_zsystem(build_checkerboard(l, gamma)), "checkerboard");
}

std::unique_ptr<Target> toric_target(std::size_t l) {
    return std::make_unique<StabilizerTarget>(ZCheckSystem(build_toric(l).plaquettes), "toric");
}

std::unique_ptr<Target> tfd_target(const GaussianTFD &t, const Ordering &o) { return std::make_unique<TfdTarget>(t, o); }

FidelityEstimate fidelity(const ArnnModel &m, const Target &t, std::mt19937_64 &rng, FidelityMode mode,
                          std::size_t n_samples) {
    if (m.n_sites() != t.n_sites()) {
        throw std::invalid_argument("model and target sizes differ");
    }
    FidelityEstimate out;
    if (mode != FidelityMode::sampled) {
        auto sup = t.support();
        if (sup) {
            std::vector<BitString> strings;
            strings.reserve(sup->size());
            for (const auto &[s, p] : *sup) {
                strings.push_back(s);
            }
            const auto lp = m.log_prob(strings);
            double acc = 0.0;
            for (std::size_t k = 0; k < lp.size(); ++k) {
                acc += std::sqrt((*sup)[k].second) * std::exp(0.5 * lp[k]);
            }
            out.value = std::min(1.0, acc * acc);
            out.exact = true;
            return out;
        }
        if (mode == FidelityMode::exact) {
            throw std::invalid_argument("target support is too large for exact fidelity");
        }
    }
    if (n_samples < 2) {
        throw std::invalid_argument("sampled fidelity needs at least two samples");
    }
    const auto draws = m.sample(rng, n_samples);
    double mean = 0.0;
    double sq = 0.0;
    for (const auto &[s, lm] : draws) {
        const double lt = t.log_prob(s);
        const double ratio = std::isfinite(lt) ? std::exp(0.5 * (lt - lm)) : 0.0;
        mean += ratio;
        sq += ratio * ratio;
    }
    const double nn = static_cast<double>(n_samples);
    mean /= nn;
    const double var = std::max(0.0, (sq / nn - mean * mean) * nn / (nn - 1.0));
    out.value = mean * mean;
    out.stderr_value = 2.0 * mean * std::sqrt(var / nn);
    return out;
}

TrainResult train(ArnnModel &m, const Target &t, const TrainConfig &cfg, std::uint64_t seed) {
    if (!(cfg.target_fidelity > 0.0 && cfg.target_fidelity <= 1.0)) {
        throw std::invalid_argument("fidelity target must lie in (0, 1]");
    }
    if (m.n_sites() != t.n_sites()) {
        throw std::invalid_argument("model and target sizes differ");
    }
    if (cfg.batch_size == 0 || cfg.steps_per_epoch == 0 || cfg.eval_every == 0) {
        throw std::invalid_argument("batch size, steps per epoch and evaluation cadence must be positive");
    }
    std::mt19937_64 rng(seed);
    constexpr double b1 = 0.9;
    constexpr double b2 = 0.999;
    constexpr double eps = 1e-8;
    Eigen::VectorXd theta = m.params().flatten();
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(theta.size());
    Eigen::VectorXd vel = Eigen::VectorXd::Zero(theta.size());
    std::size_t step = 0;
    TrainResult res;
    std::vector<BitString> batch(cfg.batch_size);
    double loss = 0.0;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        for (std::size_t k = 0; k < cfg.steps_per_epoch; ++k) {
            for (auto &s : batch) {
                s = t.sample(rng);
            }
            auto [l, grad] = m.nll_and_grad(batch);
            loss = l;
            if (!std::isfinite(loss)) {
                res.diverged = true;
                res.epochs = epoch;
                return res;
            }
            const Eigen::VectorXd g = grad.flatten();
            ++step;
            mom = b1 * mom + (1.0 - b1) * g;
            vel = b2 * vel + (1.0 - b2) * g.cwiseProduct(g);
            const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
            theta.array() -= cfg.learning_rate * (mom.array() / c1) / ((vel.array() / c2).sqrt() + eps);
            m.params().unflatten(theta);
        }
        res.epochs = epoch;
        if (epoch % cfg.eval_every == 0 || epoch == cfg.max_epochs) {
            const auto f = fidelity(m, t, rng, cfg.eval_mode, cfg.eval_samples);
            res.history.push_back({epoch, loss, f.value});
            res.final_fidelity = f.value;
            res.best_fidelity = std::max(res.best_fidelity, f.value);
            if (f.value >= cfg.target_fidelity) {
                res.success = true;
                if (cfg.stop_at_target) {
                    break;
                }
            }
        }
    }
    return res;
}

SweepResult sweep_min_width(const Target &t, std::size_t size, const std::vector<std::size_t> &widths,
                            const TrainConfig &cfg) {
    if (widths.empty() || !std::is_sorted(widths.begin(), widths.end())) {
        throw std::invalid_argument("width grid must be non-empty and ascending");
    }
    SweepResult out;
    out.size = size;
    for (auto w : widths) {
        double best = 0.0;
        for (std::size_t s = 0; s < cfg.seeds; ++s) {
            // Distinct, reproducible streams per (size, width, seed).
            std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(w),
                              static_cast<std::uint64_t>(s)};
            std::mt19937_64 init(seq);
            auto model = ArnnModel::random(t.n_sites(), w, init);
            auto res = train(model, t, cfg, init());
            best = std::max(best, res.best_fidelity);
            const bool hit = res.success;
            out.cells.push_back({w, s, std::move(res)});
            if (hit) {
                break;
            }
        }
        out.widths.push_back(w);
        out.best_fidelity.push_back(best);
        if (best >= cfg.target_fidelity) {
            out.n_d_min = w;
            break;
        }
    }
    return out;
}

}  // namespace vbscale

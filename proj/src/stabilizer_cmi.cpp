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

#include "vbscale/stabilizer_cmi.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace vbscale {

namespace {

std::string packed_key(const BitString &z, const std::vector<std::size_t> &positions) {
    std::string key((positions.size() + 7) / 8, '\0');
    for (std::size_t k = 0; k < positions.size(); ++k) {
        if (z[positions[k]]) {
            key[k >> 3] = static_cast<char>(key[k >> 3] | (1 << (k & 7)));
        }
    }
    return key;
}

// Entropy in bits of a distribution given by integer counts summing to `total`.
// Written as log2(N) - (1/N) sum c log2 c so that uniform marginals over
// power-of-two supports come out exact.
double entropy_from_counts(const std::unordered_map<std::string, std::uint64_t> &counts, std::uint64_t total) {
    double acc = 0.0;
    for (const auto &[key, c] : counts) {
        acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    return std::log2(static_cast<double>(total)) - acc / static_cast<double>(total);
}

void xor_into(BitString &dst, const BitString &src) {
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] ^= src[i];
    }
}

}  // namespace

void StabilizerTableau::validate() const {
    if (xpart.cols() != n || zpart.cols() != n || xpart.rows() != zpart.rows()) {
        throw std::invalid_argument("tableau parts must both be n_gen x n");
    }
    const std::size_t g = xpart.rows();
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            unsigned acc = 0;
            auto xi = xpart.row_words(i);
            auto zi = zpart.row_words(i);
            auto xj = xpart.row_words(j);
            auto zj = zpart.row_words(j);
            for (std::size_t w = 0; w < xi.size(); ++w) {
                acc ^= static_cast<unsigned>(std::popcount((xi[w] & zj[w]) ^ (zi[w] & xj[w])) & 1);
            }
            if (acc != 0) {
                throw std::invalid_argument("tableau generators " + std::to_string(i) + " and " + std::to_string(j) +
                                            " anticommute");
            }
        }
    }
}

ZCheckSystem::ZCheckSystem(GF2Matrix m, BitString syndrome) : m_(std::move(m)), s_(std::move(syndrome)) {
    if (s_.size() != m_.rows()) {
        throw std::invalid_argument("syndrome length must equal the number of checks");
    }
    solution_ = solve(m_, s_);
    rank_ = solution_ ? solution_->rank : vbscale::rank(m_);
}

ZCheckSystem::ZCheckSystem(GF2Matrix m) : ZCheckSystem(m, BitString(m.rows(), 0)) {}

std::size_t ZCheckSystem::support_dimension() const { return solution().kernel.size(); }

const AffineSolution &ZCheckSystem::solution() const {
    if (!solution_) {
        throw InfeasibleSystem("syndrome is inconsistent with the parity checks; the support is empty");
    }
    return *solution_;
}

bool ZCheckSystem::contains(const BitString &z) const { return multiply(m_, z) == s_; }

Bipartition Bipartition::middle(std::size_t n) { return prefix(n, n / 2); }

Bipartition Bipartition::prefix(std::size_t n, std::size_t k) {
    if (k > n) {
        throw std::invalid_argument("cut position exceeds length");
    }
    Bipartition cut;
    for (std::size_t i = 0; i < n; ++i) {
        (i < k ? cut.a : cut.b).push_back(i);
    }
    return cut;
}

Bipartition Bipartition::from_subset(std::size_t n, const std::vector<std::size_t> &a) {
    std::vector<bool> in_a(n, false);
    for (auto i : a) {
        if (i >= n) {
            throw std::out_of_range("bipartition index out of range");
        }
        in_a[i] = true;
    }
    Bipartition cut;
    cut.a = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_a[i]) {
            cut.b.push_back(i);
        }
    }
    cut.validate(n);
    return cut;
}

void Bipartition::validate(std::size_t n) const {
    std::vector<int> seen(n, 0);
    for (const auto *block : {&a, &b}) {
        for (auto i : *block) {
            if (i >= n) {
                throw std::invalid_argument("bipartition index out of range");
            }
            if (seen[i]++ != 0) {
                throw std::invalid_argument("bipartition blocks overlap or repeat an index");
            }
        }
    }
    if (a.size() + b.size() != n) {
        throw std::invalid_argument("bipartition does not cover all positions");
    }
}

std::string to_string(CmiMethod method) {
    switch (method) {
        case CmiMethod::rank_formula:
            return "rank_formula";
        case CmiMethod::brute_force:
            return "brute_force";
        case CmiMethod::sampled:
            return "sampled";
        case CmiMethod::exact_enumeration:
            return "exact";
        case CmiMethod::small_beta:
            return "smallbeta";
    }
    return "unknown";
}

GF2Matrix z_subgroup(const StabilizerTableau &t) {
    t.validate();
    // Generator combinations c with c^T X = 0 are the kernel of X^T.
    const GF2Matrix xt = t.xpart.transposed();
    auto combos = solve(xt, BitString(xt.rows(), 0));
    GF2Matrix out(0, t.n);
    for (const auto &c : combos->kernel) {
        BitString zrow(t.n, 0);
        for (std::size_t g = 0; g < c.size(); ++g) {
            if (c[g]) {
                xor_into(zrow, t.zpart.row(g));
            }
        }
        out.append_row(zrow);
    }
    return row_basis(out);
}

CmiResult cmi_rank_formula(const GF2Matrix &m, const Bipartition &cut) {
    cut.validate(m.cols());
    const auto ra = rank(column_restrict(m, cut.a));
    const auto rb = rank(column_restrict(m, cut.b));
    const auto r = rank(m);
    return {static_cast<double>(ra + rb - r), CmiMethod::rank_formula, std::nullopt};
}

std::vector<BitString> enumerate_support(const ZCheckSystem &sys) {
    const auto &sol = sys.solution();
    if (sol.kernel.size() > kMaxEnumerableDimension) {
        throw SupportTooLarge("support has 2^" + std::to_string(sol.kernel.size()) + " strings");
    }
    const std::uint64_t count = std::uint64_t{1} << sol.kernel.size();
    std::vector<BitString> out;
    out.reserve(count);
    for (std::uint64_t coeff = 0; coeff < count; ++coeff) {
        BitString z = sol.particular;
        for (std::size_t k = 0; k < sol.kernel.size(); ++k) {
            if ((coeff >> k) & 1u) {
                xor_into(z, sol.kernel[k]);
            }
        }
        out.push_back(std::move(z));
    }
    return out;
}

std::vector<BitString> sample_support(const ZCheckSystem &sys, std::mt19937_64 &rng, std::size_t count) {
    StabilizerDistribution dist(sys);
    std::vector<BitString> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(dist.sample(rng));
    }
    return out;
}

CmiResult cmi_brute_force(const ZCheckSystem &sys, const Bipartition &cut) {
    cut.validate(sys.n());
    const auto &sol = sys.solution();
    if (sol.kernel.size() > kMaxEnumerableDimension) {
        throw SupportTooLarge("support has 2^" + std::to_string(sol.kernel.size()) + " strings");
    }
    std::unordered_map<std::string, std::uint64_t> count_a;
    std::unordered_map<std::string, std::uint64_t> count_b;
    const std::uint64_t total = std::uint64_t{1} << sol.kernel.size();
    // Gray-code walk: one kernel vector changes per step.
    BitString z = sol.particular;
    for (std::uint64_t step = 0; step < total; ++step) {
        if (step > 0) {
            xor_into(z, sol.kernel[static_cast<std::size_t>(std::countr_zero(step))]);
        }
        ++count_a[packed_key(z, cut.a)];
        ++count_b[packed_key(z, cut.b)];
    }
    const double h_ab = static_cast<double>(sol.kernel.size());
    const double h_a = entropy_from_counts(count_a, total);
    const double h_b = entropy_from_counts(count_b, total);
    return {h_a + h_b - h_ab, CmiMethod::brute_force, std::nullopt};
}

StabilizerDistribution::StabilizerDistribution(const ZCheckSystem &sys)
    : n_(sys.n()),
      particular_(sys.solution().particular),
      kernel_(sys.solution().kernel),
      m_(sys.m()),
      syndrome_(sys.syndrome()) {}

BitString StabilizerDistribution::sample(std::mt19937_64 &rng) const {
    BitString z = particular_;
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < kernel_.size(); ++k) {
        if ((k & 63) == 0) {
            bits = rng();
        }
        if ((bits >> (k & 63)) & 1u) {
            xor_into(z, kernel_[k]);
        }
    }
    return z;
}

double StabilizerDistribution::log_prob(const BitString &z) const {
    if (multiply(m_, z) != syndrome_) {
        return -std::numeric_limits<double>::infinity();
    }
    return -static_cast<double>(kernel_.size()) * std::log(2.0);
}

StabilizerDistribution::Marginal StabilizerDistribution::marginal(const std::vector<std::size_t> &positions) const {
    Marginal out;
    out.positions_ = positions;
    out.offset_.resize(positions.size());
    GF2Matrix projected(0, positions.size());
    for (const auto &v : kernel_) {
        BitString row(positions.size());
        for (std::size_t k = 0; k < positions.size(); ++k) {
            if (positions[k] >= n_) {
                throw std::out_of_range("marginal position out of range");
            }
            row[k] = v[positions[k]];
        }
        projected.append_row(row);
    }
    for (std::size_t k = 0; k < positions.size(); ++k) {
        out.offset_[k] = particular_[positions[k]];
    }
    // y lies in the row space of `projected` iff it is orthogonal to its kernel.
    auto sol = solve(projected, BitString(projected.rows(), 0));
    out.dimension_ = sol->rank;
    out.checks_ = sol->kernel;
    return out;
}

double StabilizerDistribution::Marginal::log_prob(const BitString &z) const {
    for (const auto &h : checks_) {
        std::uint8_t parity = 0;
        for (std::size_t k = 0; k < positions_.size(); ++k) {
            parity ^= static_cast<std::uint8_t>(h[k] & (z[positions_[k]] ^ offset_[k]));
        }
        if (parity) {
            return -std::numeric_limits<double>::infinity();
        }
    }
    return -static_cast<double>(dimension_) * std::log(2.0);
}

}  // namespace vbscale

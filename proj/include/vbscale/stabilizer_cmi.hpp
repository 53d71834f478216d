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

#ifndef VBSCALE_STABILIZER_CMI_HPP
#define VBSCALE_STABILIZER_CMI_HPP

#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbscale/gf2.hpp"

namespace vbscale {

/// Pauli generators in binary symplectic form. Row i of `xpart`/`zpart`
/// holds the X and Z exponents of generator i. Signs are not tracked.
struct StabilizerTableau {
    std::size_t n = 0;
    GF2Matrix xpart;
    GF2Matrix zpart;

    /// Throws std::invalid_argument unless the shapes agree and all
    /// generators commute under the symplectic form.
    void validate() const;
};

class InfeasibleSystem : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class SupportTooLarge : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Z-type parity checks Mz = s defining a uniform distribution on its solutions.
class ZCheckSystem {
   public:
    ZCheckSystem(GF2Matrix m, BitString syndrome);
    explicit ZCheckSystem(GF2Matrix m);  // zero syndrome

    const GF2Matrix &m() const { return m_; }
    const BitString &syndrome() const { return s_; }
    std::size_t n() const { return m_.cols(); }
    bool feasible() const { return solution_.has_value(); }
    std::size_t rank() const { return rank_; }
    /// log2 |support| = n - rank(M). Throws InfeasibleSystem if empty.
    std::size_t support_dimension() const;
    /// Throws InfeasibleSystem if empty.
    const AffineSolution &solution() const;

    /// Whether z lies in the support.
    bool contains(const BitString &z) const;

   private:
    GF2Matrix m_;
    BitString s_;
    std::size_t rank_ = 0;
    std::optional<AffineSolution> solution_;
};

/// Ordered two-block split of positions {0..n-1}.
struct Bipartition {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;

    /// First floor(n/2) positions versus the rest.
    static Bipartition middle(std::size_t n);
    /// First `k` positions versus the rest.
    static Bipartition prefix(std::size_t n, std::size_t k);
    static Bipartition from_subset(std::size_t n, const std::vector<std::size_t> &a);

    std::size_t size() const { return a.size() + b.size(); }
    /// Throws std::invalid_argument unless a and b partition {0..n-1}.
    void validate(std::size_t n) const;
};

enum class CmiMethod { rank_formula, brute_force, sampled, exact_enumeration, small_beta };

std::string to_string(CmiMethod method);

struct CmiResult {
    double value_bits = 0.0;
    CmiMethod method = CmiMethod::rank_formula;
    std::optional<double> stderr_bits;
};

/// Basis (as rows) of the exponent vectors of the Z-only subgroup generated
/// by the tableau: products of generators whose X part cancels.
GF2Matrix z_subgroup(const StabilizerTableau &t);

/// rank(M_A) + rank(M_B) - rank(M), in bits. Independent of the syndrome.
CmiResult cmi_rank_formula(const GF2Matrix &m, const Bipartition &cut);

inline constexpr std::size_t kMaxEnumerableDimension = 24;

/// All support strings, ordered by the binary counter over kernel coefficients.
std::vector<BitString> enumerate_support(const ZCheckSystem &sys);

/// Uniform i.i.d. samples from the support: particular solution plus a
/// random combination of kernel basis vectors.
std::vector<BitString> sample_support(const ZCheckSystem &sys, std::mt19937_64 &rng, std::size_t count);

/// Exact mutual information of the uniform distribution on the enumerated support.
CmiResult cmi_brute_force(const ZCheckSystem &sys, const Bipartition &cut);

/// Exact probabilities of the uniform affine distribution and of its marginals.
/// Marginals come from the projected kernel, an algebraic route independent of
/// the rank formula.
class StabilizerDistribution {
   public:
    explicit StabilizerDistribution(const ZCheckSystem &sys);

    /// Uniform distribution of the projection onto a fixed position list.
    class Marginal {
       public:
        /// Natural-log probability of z restricted to the positions
        /// (-inf when the restriction is not attainable). `z` is a full string.
        double log_prob(const BitString &z) const;
        std::size_t dimension() const { return dimension_; }

       private:
        friend class StabilizerDistribution;
        std::vector<std::size_t> positions_;
        BitString offset_;                // particular solution restricted to positions
        std::vector<BitString> checks_;   // parity checks of the projected span
        std::size_t dimension_ = 0;
    };

    std::size_t n() const { return n_; }
    std::size_t dimension() const { return kernel_.size(); }
    BitString sample(std::mt19937_64 &rng) const;
    /// Natural-log probability of the full string (-inf outside the support).
    double log_prob(const BitString &z) const;
    Marginal marginal(const std::vector<std::size_t> &positions) const;

   private:
    std::size_t n_ = 0;
    BitString particular_;
    std::vector<BitString> kernel_;
    GF2Matrix m_;
    BitString syndrome_;
};

}  // namespace vbscale

#endif  // VBSCALE_STABILIZER_CMI_HPP

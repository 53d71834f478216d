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

#ifndef VBSCALE_FAMILIES_HPP
#define VBSCALE_FAMILIES_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "vbscale/gf2.hpp"
#include "vbscale/stabilizer_cmi.hpp"

namespace vbscale {

struct Site {
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const Site &) const = default;
};

/// Disjoint five-site Z crosses on an L x L torus. Qubit (i, j) has index L*j + i.
struct CheckerboardFamily {
    std::size_t l = 0;
    double gamma = 0.0;
    /// Linear block size; values below 3 select the density-1/5 packing.
    std::size_t block = 0;
    std::vector<Site> centers;

    std::size_t n_qubits() const { return l * l; }
    std::size_t index(std::size_t i, std::size_t j) const { return l * (j % l) + (i % l); }
    /// The five qubit indices of the cross centred at `c`.
    std::vector<std::size_t> cross(const Site &c) const;
};

inline constexpr std::size_t kMinCheckerboardSize = 3;

/// Block size round(L^(1-gamma)) (at least 1). For blocks of linear size >= 3
/// the centres form an M x M grid, M = floor(L/block), whose rows and columns
/// are spaced at least 3 apart with one pinned next to the middle line and one
/// next to the periodic seam (M shrinks if the pinned spacing cannot hold M).
/// Smaller blocks use the packing i + 2j = 0 (mod 5), skipping any centre whose
/// cross would overlap an earlier one across the seam.
CheckerboardFamily build_checkerboard(std::size_t l, double gamma);

/// One row per centre with ones on its cross; zero syndrome.
ZCheckSystem checkerboard_zsystem(const CheckerboardFamily &f);

enum class CutAxis { vertical, horizontal };

/// Vertical: columns j < floor(L/2) versus the rest. Horizontal: rows i < floor(L/2).
Bipartition lattice_middle_cut(std::size_t l, CutAxis axis);

/// Number of centres whose cross has qubits on both sides of `cut`.
std::size_t count_crossing(const CheckerboardFamily &f, const Bipartition &cut);

struct CurvePoint {
    std::size_t l = 0;
    CmiResult cmi;
    std::size_t n_checks = 0;
    std::size_t n_crossing = 0;
};

std::vector<CurvePoint> checkerboard_cmi_curve(double gamma, const std::vector<std::size_t> &sizes, CutAxis axis);

/// Toric code on an L x L torus with one qubit per edge.
///
/// Vertices are scanned with i fastest, v = L*j + i (zero-based). Each vertex
/// owns two edges: (i,j)-(i+1,j) gets column 2v and (i,j)-(i,j+1) gets
/// column 2v+1. Plaquettes are indexed by their (i, j) corner.
struct ToricLattice {
    std::size_t l = 0;
    GF2Matrix plaquettes;  // L^2 x 2L^2

    std::size_t n_qubits() const { return 2 * l * l; }
    /// Column of the edge (i,j)-(i+1,j).
    std::size_t edge_i(std::size_t i, std::size_t j) const { return 2 * (l * (j % l) + (i % l)); }
    /// Column of the edge (i,j)-(i,j+1).
    std::size_t edge_j(std::size_t i, std::size_t j) const { return 2 * (l * (j % l) + (i % l)) + 1; }
    /// First L^2 labels versus the rest.
    Bipartition label_cut() const { return Bipartition::prefix(n_qubits(), l * l); }
};

ToricLattice build_toric(std::size_t l);

/// Full toric-code tableau: vertex stars, plaquettes and the two X loops.
StabilizerTableau toric_tableau(std::size_t l);

/// Rank-formula CMI across the label cut; 2L-1 for even L, 2L for odd L.
CmiResult toric_cmi(std::size_t l);

/// Ordinary least squares of log(y) against log(x).
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

SlopeFit fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace vbscale

#endif  // VBSCALE_FAMILIES_HPP

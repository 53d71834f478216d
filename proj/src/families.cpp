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

#include "vbscale/families.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace vbscale {

namespace {

// Cyclic coordinates with pairwise gaps >= 3, one of them straddling the
// middle line (h-1 or h) and one straddling the seam (L-1 or 0), so that
// both cuts of a middle bipartition are crossed by every grid row. The rest
// are spread evenly over the two arcs between the pinned pair. Asking for
// more than fit returns as many as fit.
std::vector<std::size_t> grid_positions(std::size_t l, std::size_t want) {
    const std::size_t h = l / 2;
    if (want <= 1) {
        return {h};
    }
    struct Pin {
        std::size_t a, b, d1, d2, k1, k2;
    };
    std::optional<Pin> best;
    for (std::size_t a : {h - 1, h}) {
        for (std::size_t b : {std::size_t{0}, l - 1}) {
            const std::size_t d1 = (a + l - b) % l;
            const std::size_t d2 = l - d1;
            if (d1 < 3 || d2 < 3) {
                continue;
            }
            const Pin p{a, b, d1, d2, d1 / 3 - 1, d2 / 3 - 1};
            if (!best || p.k1 + p.k2 > best->k1 + best->k2) {
                best = p;
            }
        }
    }
    if (!best) {
        return {h};
    }
    const std::size_t extra = std::min(want, best->k1 + best->k2 + 2) - 2;
    std::size_t m1 = std::min<std::size_t>(
        best->k1, static_cast<std::size_t>(std::llround(static_cast<double>(extra * best->d1) / static_cast<double>(l))));
    std::size_t m2 = extra - m1;
    if (m2 > best->k2) {
        m2 = best->k2;
        m1 = extra - m2;
    }
    std::vector<std::size_t> out{best->a, best->b};
    for (std::size_t t = 0; t < m1; ++t) {
        out.push_back((best->b + (t + 1) * best->d1 / (m1 + 1)) % l);
    }
    for (std::size_t t = 0; t < m2; ++t) {
        out.push_back((best->a + (t + 1) * best->d2 / (m2 + 1)) % l);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::size_t> CheckerboardFamily::cross(const Site &c) const {
    return {index(c.i, c.j), index(c.i + 1, c.j), index(c.i + l - 1, c.j), index(c.i, c.j + 1),
            index(c.i, c.j + l - 1)};
}

CheckerboardFamily build_checkerboard(std::size_t l, double gamma) {
    if (l < kMinCheckerboardSize) {
        throw std::invalid_argument("checkerboard needs L >= 3 so that crosses have five distinct sites");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("gamma must lie in [0, 1]");
    }
    CheckerboardFamily f;
    f.l = l;
    f.gamma = gamma;
    const double raw = std::round(std::pow(static_cast<double>(l), 1.0 - gamma));
    f.block = std::max<std::size_t>(1, static_cast<std::size_t>(raw));

    if (f.block >= 3) {
        const auto pos = grid_positions(l, l / f.block);
        for (auto j : pos) {
            for (auto i : pos) {
                f.centers.push_back({i, j});
            }
        }
        return f;
    }

    // Lee-sphere packing; exact on tori with 5 | L, filtered otherwise.
    std::vector<bool> used(f.n_qubits(), false);
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t i = 0; i < l; ++i) {
            if ((i + 2 * j) % 5 != 0) {
                continue;
            }
            const Site c{i, j};
            const auto support = f.cross(c);
            if (std::any_of(support.begin(), support.end(), [&](std::size_t q) { return used[q]; })) {
                continue;
            }
            for (auto q : support) {
                used[q] = true;
            }
            f.centers.push_back(c);
        }
    }
    return f;
}

ZCheckSystem checkerboard_zsystem(const CheckerboardFamily &f) {
    GF2Matrix m(f.centers.size(), f.n_qubits());
    for (std::size_t r = 0; r < f.centers.size(); ++r) {
        for (auto q : f.cross(f.centers[r])) {
            m.set(r, q, true);
        }
    }
    return ZCheckSystem(std::move(m));
}

Bipartition lattice_middle_cut(std::size_t l, CutAxis axis) {
    std::vector<std::size_t> a;
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t i = 0; i < l; ++i) {
            const bool left = axis == CutAxis::vertical ? j < l / 2 : i < l / 2;
            if (left) {
                a.push_back(l * j + i);
            }
        }
    }
    return Bipartition::from_subset(l * l, a);
}

std::size_t count_crossing(const CheckerboardFamily &f, const Bipartition &cut) {
    std::vector<bool> in_a(f.n_qubits(), false);
    for (auto q : cut.a) {
        in_a[q] = true;
    }
    std::size_t crossing = 0;
    for (const auto &c : f.centers) {
        const auto support = f.cross(c);
        const auto on_a = std::count_if(support.begin(), support.end(), [&](std::size_t q) { return in_a[q]; });
        if (on_a != 0 && on_a != static_cast<std::ptrdiff_t>(support.size())) {
            ++crossing;
        }
    }
    return crossing;
}

std::vector<CurvePoint> checkerboard_cmi_curve(double gamma, const std::vector<std::size_t> &sizes, CutAxis axis) {
    std::vector<CurvePoint> out;
    for (auto l : sizes) {
        const auto family = build_checkerboard(l, gamma);
        const auto sys = checkerboard_zsystem(family);
        const auto cut = lattice_middle_cut(l, axis);
        out.push_back({l, cmi_rank_formula(sys.m(), cut), family.centers.size(), count_crossing(family, cut)});
    }
    return out;
}

ToricLattice build_toric(std::size_t l) {
    if (l < 2) {
        throw std::invalid_argument("toric lattice needs L >= 2");
    }
    ToricLattice t;
    t.l = l;
    t.plaquettes = GF2Matrix(l * l, 2 * l * l);
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t i = 0; i < l; ++i) {
            const std::size_t p = l * j + i;
            for (auto e : {t.edge_j(i, j), t.edge_j(i + 1, j), t.edge_i(i, j), t.edge_i(i, j + 1)}) {
                t.plaquettes.flip(p, e);
            }
        }
    }
    return t;
}

StabilizerTableau toric_tableau(std::size_t l) {
    const auto lattice = build_toric(l);
    const std::size_t n = lattice.n_qubits();
    StabilizerTableau t;
    t.n = n;
    t.xpart = GF2Matrix(0, n);
    t.zpart = GF2Matrix(0, n);
    const BitString zero(n, 0);
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t i = 0; i < l; ++i) {
            BitString star(n, 0);
            for (auto e : {lattice.edge_j(i, j), lattice.edge_j(i, j + l - 1), lattice.edge_i(i, j),
                           lattice.edge_i(i + l - 1, j)}) {
                star[e] ^= 1;
            }
            t.xpart.append_row(star);
            t.zpart.append_row(zero);
        }
    }
    for (std::size_t p = 0; p < lattice.plaquettes.rows(); ++p) {
        t.xpart.append_row(zero);
        t.zpart.append_row(lattice.plaquettes.row(p));
    }
    BitString loop_i(n, 0);
    BitString loop_j(n, 0);
    for (std::size_t k = 0; k < l; ++k) {
        loop_i[lattice.edge_i(0, k)] = 1;
        loop_j[lattice.edge_j(k, 0)] = 1;
    }
    for (const auto &loop : {loop_i, loop_j}) {
        t.xpart.append_row(loop);
        t.zpart.append_row(zero);
    }
    return t;
}

CmiResult toric_cmi(std::size_t l) {
    const auto lattice = build_toric(l);
    return cmi_rank_formula(lattice.plaquettes, lattice.label_cut());
}

SlopeFit fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw std::invalid_argument("slope fit needs at least three (x, y) pairs");
    }
    const auto n = static_cast<double>(x.size());
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) {
            throw std::invalid_argument("log-log fit needs positive values");
        }
        lx.push_back(std::log(x[k]));
        ly.push_back(std::log(y[k]));
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        mx += lx[k];
        my += ly[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - fit.intercept - fit.slope * lx[k];
        rss += r * r;
    }
    fit.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
    return fit;
}

}  // namespace vbscale

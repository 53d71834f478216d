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


// Dense Fock-space reference implementations used as test oracles. Nothing
// here shares code with the library beyond the public types.

#ifndef VBSCALE_TESTS_DENSE_FOCK_HPP
#define VBSCALE_TESTS_DENSE_FOCK_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "vbscale/gf2.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;

// Basis index: site 0 is the most significant bit; bit value 1 = occupied
// (spin Z = -1).
inline std::size_t index_of(const vbscale::BitString &s) {
    std::size_t idx = 0;
    for (auto b : s) {
        idx = 2 * idx + b;
    }
    return idx;
}

inline vbscale::BitString bits_of(std::size_t idx, std::size_t n) {
    vbscale::BitString s(n);
    for (std::size_t k = 0; k < n; ++k) {
        s[n - 1 - k] = static_cast<std::uint8_t>((idx >> k) & 1u);
    }
    return s;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat site_op(std::size_t n, std::size_t k, const Mat &op, const Mat &before) {
    Mat m = Mat::Identity(1, 1);
    for (std::size_t q = 0; q < n; ++q) {
        m = kron(m, q < k ? before : (q == k ? op : Mat::Identity(2, 2)));
    }
    return m;
}

inline Mat pauli_x() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
inline Mat pauli_z() { return (Mat(2, 2) << 1, 0, 0, -1).finished(); }

// Jordan-Wigner annihilators c_k = Z_0 ... Z_{k-1} a_k.
inline std::vector<Mat> annihilators(std::size_t n) {
    const Mat a = (Mat(2, 2) << 0, 1, 0, 0).finished();
    std::vector<Mat> c;
    for (std::size_t k = 0; k < n; ++k) {
        c.push_back(site_op(n, k, a, pauli_z()));
    }
    return c;
}

// Open p-wave chain with hermitian conjugates.
inline Mat bcs_hamiltonian(std::size_t n, double j, double h) {
    const auto c = annihilators(n);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Mat hop = Mat::Zero(dim, dim);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        hop += -j * (c[k].transpose() * c[k + 1] + c[k].transpose() * c[k + 1].transpose());
    }
    Mat out = hop + hop.transpose();
    for (std::size_t k = 0; k < n; ++k) {
        out += 2.0 * h * (c[k].transpose() * c[k] - 0.5 * Mat::Identity(dim, dim));
    }
    return out;
}

// -J sum_{i<n} X_i X_{i+1} + J X_n X_1 - h sum Z_i.
inline Mat tfim_hamiltonian(std::size_t n, double j, double h) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    const Mat id = Mat::Identity(2, 2);
    Mat out = Mat::Zero(dim, dim);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        out -= j * site_op(n, k, pauli_x(), id) * site_op(n, k + 1, pauli_x(), id);
    }
    out += j * site_op(n, n - 1, pauli_x(), id) * site_op(n, 0, pauli_x(), id);
    for (std::size_t k = 0; k < n; ++k) {
        out -= h * site_op(n, k, pauli_z(), id);
    }
    return out;
}

// exp(-t H) for symmetric H via its eigendecomposition.
inline Mat sym_exp(const Mat &h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    return es.eigenvectors() * (-t * es.eigenvalues().array()).exp().matrix().asDiagonal() *
           es.eigenvectors().transpose();
}

// Doubled TFD amplitude Psi(a, b) = (-1)^{|b|(|b|-1)/2} <a|e^{-beta H/2}|b> / sqrt(Z),
// i.e. e^{-beta H_A/2} prod_j (1 + c_Aj^+ c_Bj^+)|0> / sqrt(Z) in the doubled
// occupation basis with copy A ordered first.
inline std::vector<double> tfd_amplitudes(std::size_t n, double j, double h, double beta) {
    const Mat hm = bcs_hamiltonian(n, j, h);
    const Mat half = sym_exp(hm, 0.5 * beta);
    const double z = sym_exp(hm, beta).trace();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> out(dim * dim);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            const auto wb = static_cast<std::size_t>(__builtin_popcountll(b));
            const double sign = ((wb * (wb - (wb > 0 ? 1 : 0)) / 2) % 2 == 0) ? 1.0 : -1.0;
            out[a * dim + b] = sign * half(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) / std::sqrt(z);
        }
    }
    return out;
}

}  // namespace oracle

#endif  // VBSCALE_TESTS_DENSE_FOCK_HPP

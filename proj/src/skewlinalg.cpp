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


#include "vbscale/skewlinalg.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

namespace vbscale {

SignLog SignLog::zero() { return {0, -std::numeric_limits<double>::infinity()}; }

SignLog SignLog::from_value(double x) {
    if (x == 0.0) {
        return zero();
    }
    return {x > 0.0 ? 1 : -1, std::log(std::abs(x))};
}

double SignLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

SignLog SignLog::operator*(const SignLog &o) const {
    if (sign == 0 || o.sign == 0) {
        return zero();
    }
    return {sign * o.sign, log_abs + o.log_abs};
}

SignLog SignLog::operator/(const SignLog &o) const {
    if (o.sign == 0) {
        throw std::domain_error("division by a zero SignLog");
    }
    if (sign == 0) {
        return zero();
    }
    return {sign * o.sign, log_abs - o.log_abs};
}

SignLog SignLog::operator+(const SignLog &o) const {
    if (sign == 0) {
        return o;
    }
    if (o.sign == 0) {
        return *this;
    }
    const SignLog &big = log_abs >= o.log_abs ? *this : o;
    const SignLog &small = log_abs >= o.log_abs ? o : *this;
    const double r = std::exp(small.log_abs - big.log_abs);
    if (big.sign == small.sign) {
        return {big.sign, big.log_abs + std::log1p(r)};
    }
    if (r == 1.0) {
        return zero();
    }
    return {big.sign, big.log_abs + std::log1p(-r)};
}

SignLog SignLog::sqrt_abs() const {
    if (sign == 0) {
        return zero();
    }
    return {1, 0.5 * log_abs};
}

SignLog pfaffian(const Eigen::MatrixXd &input) {
    const Eigen::Index n = input.rows();
    if (input.cols() != n) {
        throw std::invalid_argument("pfaffian needs a square matrix");
    }
    if (n % 2 != 0) {
        throw std::invalid_argument("pfaffian needs an even dimension");
    }
    if (n == 0) {
        return {1, 0.0};
    }
    const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
    if ((input + input.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("pfaffian input is not antisymmetric");
    }
    Eigen::MatrixXd a = 0.5 * (input - input.transpose());
    SignLog acc{1, 0.0};
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index rel = 0;
        a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&rel);
        const Eigen::Index piv = k + 1 + rel;
        if (piv != k + 1) {
            a.row(k + 1).swap(a.row(piv));
            a.col(k + 1).swap(a.col(piv));
            acc.sign = -acc.sign;
        }
        const double p = a(k, k + 1);
        if (p == 0.0) {
            return SignLog::zero();
        }
        acc = acc * SignLog::from_value(p);
        if (k + 2 < n) {
            const Eigen::Index m = n - k - 2;
            const Eigen::VectorXd tau = a.row(k).tail(m).transpose() / p;
            const Eigen::VectorXd col = a.col(k + 1).tail(m);
            a.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return acc;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("expm needs a square matrix");
    }
    if (!a.allFinite()) {
        throw std::invalid_argument("expm input has non-finite entries");
    }
    return a.exp();
}

LuResult lu_det_inverse(const Eigen::MatrixXd &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("LU needs a square matrix");
    }
    const Eigen::Index n = a.rows();
    LuResult out;
    if (n == 0) {
        out.det = {1, 0.0};
        return out;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    const auto &packed = lu.matrixLU();
    SignLog det{static_cast<int>(lu.permutationP().determinant()), 0.0};
    for (Eigen::Index k = 0; k < n; ++k) {
        const double piv = packed(k, k);
        if (!(std::abs(piv) >= 1e-13 * norm) || norm == 0.0) {
            throw SingularMatrix("matrix is singular within tolerance (pivot " + std::to_string(piv) + ")");
        }
        det = det * SignLog::from_value(piv);
    }
    out.det = det;
    out.inv = lu.inverse();
    return out;
}

SignLog log_det(const Eigen::MatrixXd &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("determinant needs a square matrix");
    }
    if (a.rows() == 0) {
        return {1, 0.0};
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    SignLog det{static_cast<int>(lu.permutationP().determinant()), 0.0};
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
        det = det * SignLog::from_value(lu.matrixLU()(k, k));
    }
    return det;
}

}  // namespace vbscale

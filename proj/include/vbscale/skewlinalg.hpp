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


#ifndef VBSCALE_SKEWLINALG_HPP
#define VBSCALE_SKEWLINALG_HPP

#include <stdexcept>

#include <Eigen/Dense>

namespace vbscale {

/// sign * exp(log_abs); sign 0 carries log_abs = -inf.
struct SignLog {
    int sign = 1;
    double log_abs = 0.0;

    static SignLog zero();
    static SignLog from_value(double x);
    double value() const;

    SignLog operator*(const SignLog &o) const;
    SignLog operator/(const SignLog &o) const;
    SignLog operator+(const SignLog &o) const;
    SignLog operator-() const { return {-sign, log_abs}; }
    SignLog sqrt_abs() const;  // +|x|^(1/2)
};

class SingularMatrix : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Pfaffian of a real antisymmetric matrix by skew-symmetric Gaussian
/// elimination with partial pivoting. The input is antisymmetrized after
/// checking it is skew within 1e-10 (relative to its largest entry).
SignLog pfaffian(const Eigen::MatrixXd &a);

/// Matrix exponential (Pade scaling and squaring).
Eigen::MatrixXd expm(const Eigen::MatrixXd &a);

struct LuResult {
    SignLog det;
    Eigen::MatrixXd inv;
};

/// Partial-pivot LU. Throws SingularMatrix when a pivot falls below
/// 1e-13 * ||A||_inf.
LuResult lu_det_inverse(const Eigen::MatrixXd &a);

/// Determinant only; no singularity threshold (returns sign 0 for exact zeros).
SignLog log_det(const Eigen::MatrixXd &a);

}  // namespace vbscale

#endif  // VBSCALE_SKEWLINALG_HPP

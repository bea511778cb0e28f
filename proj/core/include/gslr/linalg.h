/*
Copyright 2026 The GSLR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef GSLR_LINALG_H_
#define GSLR_LINALG_H_

#include <vector>

#include "gslr/tensor.h"

namespace gslr {

// Thin SVD m = u * diag(s) * v^T with p = min(rows, cols):
// u is rows x p, v is cols x p, both with orthonormal columns, and s is
// non-negative and sorted in descending order.
struct SvdResult {
  Matrix u;
  std::vector<double> s;
  Matrix v;
};

inline constexpr int kMaxJacobiSweeps = 60;

// One-sided (Hestenes) Jacobi. A column pair counts as orthogonal once
// |<g_p, g_q>| <= max(sqrt(rows) * eps * |g_p| |g_q|, (1e-12 * |m|_F)^2).
// Throws NumericalError after kMaxJacobiSweeps sweeps without convergence.
SvdResult ThinSvd(const Matrix& m);

// Sum of singular values.
double NuclearNorm(const Matrix& m);

// U_r V_r^T over singular triplets with s_i > tol * s_max. This is a
// subgradient of the nuclear norm at m.
Matrix NuclearNormSubgrad(const Matrix& m, double tol = 1e-8);

struct NuclearNormEval {
  double value = 0.0;
  Matrix subgrad;
};

// Value and subgradient from a single decomposition.
NuclearNormEval NuclearNormWithSubgrad(const Matrix& m, double tol = 1e-8);

// Singular value soft-thresholding: u * diag(max(s - tau, 0)) * v^T.
Matrix SingularValueThreshold(const Matrix& m, double tau);

}  // namespace gslr

#endif  // GSLR_LINALG_H_

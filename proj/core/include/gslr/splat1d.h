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

#ifndef GSLR_SPLAT1D_H_
#define GSLR_SPLAT1D_H_

#include <cstddef>
#include <random>
#include <vector>

#include "gslr/init.h"
#include "gslr/tensor.h"

namespace gslr {

inline constexpr double kMinSigma1D = 1e-4;

// R independent 1D Gaussian fields of K primitives each. Column r of the
// rendered b x R matrix is
//
//   T(z, r) = sum_k c_k^r * exp(-(z - mu_k^r)^2 / (2 sigma_k^r^2))
//
// at integer z in [0, b). sigma = max(exp(scale_raw), kMinSigma1D).
// Storage is column-major: primitive k of column r sits at index r*k_ + k.
struct Gaussian1DBank {
  std::size_t r = 0;
  std::size_t k = 0;
  std::vector<double> pos;
  std::vector<double> scale_raw;
  std::vector<double> feat;

  Gaussian1DBank() = default;
  Gaussian1DBank(std::size_t r, std::size_t k)
      : r(r), k(k), pos(r * k), scale_raw(r * k), feat(r * k) {}

  std::size_t ParameterCount() const { return 3 * r * k; }
  double Sigma(std::size_t idx) const;
  void Validate() const;
};

struct Gaussian1DBankGrad {
  std::vector<double> pos;
  std::vector<double> scale_raw;
  std::vector<double> feat;
};

Matrix Render1D(const Gaussian1DBank& bank, std::size_t b);

Gaussian1DBankGrad Render1DBackward(const Gaussian1DBank& bank, std::size_t b,
                                    const Matrix& upstream);

// k = b primitives per column, one per spectral grid point, each with width
// sigma and the target entry as feature.
Gaussian1DBank DegenerateBankFor(const Matrix& target, double sigma);

// sigma = b/k, features N(0, feat_std^2). Positions are uniform over
// [0, b-1], or with kGrid evenly spaced from 0 to b-1 in every column.
Gaussian1DBank InitBank1D(std::size_t r, std::size_t k, std::size_t b,
                          std::mt19937_64& rng, double feat_std = 0.01,
                          InitLayout layout = InitLayout::kUniform);

}  // namespace gslr

#endif  // GSLR_SPLAT1D_H_

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

#ifndef GSLR_TNN_H_
#define GSLR_TNN_H_

#include <complex>
#include <cstddef>
#include <vector>

#include "gslr/tensor.h"

namespace gslr {

// Complex third-order tensor with Tensor3's index order.
struct ComplexTensor3 {
  std::size_t h = 0, w = 0, b = 0;
  std::vector<std::complex<double>> data;

  ComplexTensor3() = default;
  ComplexTensor3(std::size_t h, std::size_t w, std::size_t b)
      : h(h), w(w), b(b), data(h * w * b) {}

  std::complex<double>& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data[(k * h + i) * w + j];
  }
  std::complex<double> operator()(std::size_t i, std::size_t j,
                                  std::size_t k) const {
    return data[(k * h + i) * w + j];
  }
};

// Unitary DFT matrix F(f, z) = exp(-2 pi i f z / b) / sqrt(b), split into
// real and imaginary parts.
struct DftMatrix {
  Matrix re;
  Matrix im;
};
DftMatrix MakeDftMatrix(std::size_t b);

// Applies F to every mode-3 fiber (naive O(b^2) per fiber).
ComplexTensor3 DftMode3(const Tensor3& t);
// Applies F^H to every mode-3 fiber.
ComplexTensor3 IdftMode3(const ComplexTensor3& t);

// Real part; the largest |imag| is written to max_imag when non-null.
Tensor3 RealPart(const ComplexTensor3& t, double* max_imag = nullptr);

// Soft-thresholds the singular values of every frequency slice of DftMode3(t)
// by tau and transforms back. Frequencies f and b-f are handled as a
// conjugate pair so the result is real.
Tensor3 TensorSvt(const Tensor3& t, double tau, double* max_imag = nullptr);

// Tensor nuclear norm: sum over frequency slices of their nuclear norms.
double TensorNuclearNorm(const Tensor3& t);

struct AdmmState {
  Tensor3 x;  // primal, observed entries pinned to o
  Tensor3 z;  // low-tubal-rank auxiliary
  Tensor3 y;  // dual
  double rho = 1e-2;
  std::size_t iter = 0;
  double max_imag = 0.0;  // largest imaginary residue seen before realifying
};

inline constexpr double kDefaultTnnRho = 1e-2;
inline constexpr std::size_t kDefaultTnnIters = 500;

// ADMM for min ||X||_TNN s.t. X = O on observed entries:
//   z <- svt(x + y/rho, 1/rho); x <- z - y/rho, observed reset to o;
//   y <- y + rho (x - z).
// Throws ConfigError for an empty mask.
AdmmState TnnSolve(const Tensor3& o, const Mask3& mask,
                   double rho = kDefaultTnnRho,
                   std::size_t iters = kDefaultTnnIters);

inline Tensor3 TnnComplete(const Tensor3& o, const Mask3& mask,
                           double rho = kDefaultTnnRho,
                           std::size_t iters = kDefaultTnnIters) {
  return TnnSolve(o, mask, rho, iters).x;
}

}  // namespace gslr

#endif  // GSLR_TNN_H_

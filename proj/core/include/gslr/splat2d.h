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

#ifndef GSLR_SPLAT2D_H_
#define GSLR_SPLAT2D_H_

#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "gslr/init.h"
#include "gslr/tensor.h"

namespace gslr {

// N anisotropic 2D Gaussians with R-dimensional features. Rendering sums
//
//   c_j * exp(-0.5 * (p - mu_j)^T Sigma_j^-1 (p - mu_j))
//
// over primitives at integer pixel coordinates p = (i, j), i in [0, h),
// j in [0, w). There is no opacity and no normalization.
//
// Sigma_j = L_j L_j^T with L_j = [[exp(l11), 0], [l21, exp(l22)]], so any
// finite raw triple (l11, l21, l22) is a valid covariance.
struct Gaussian2DField {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<double> pos;      // n x 2, (row, col) in pixel units
  std::vector<double> cov_raw;  // n x 3, (l11, l21, l22)
  std::vector<double> feat;     // n x r

  Gaussian2DField() = default;
  Gaussian2DField(std::size_t n, std::size_t r)
      : n(n), r(r), pos(2 * n), cov_raw(3 * n), feat(n * r) {}

  // 2 position + 3 covariance + r feature scalars per primitive.
  std::size_t ParameterCount() const { return n * (5 + r); }

  // Throws ParameterError on any non-finite parameter or length mismatch.
  void Validate() const;

  // Effective covariance (Sxx, Sxy, Syy) of primitive j.
  void Covariance(std::size_t j, double& sxx, double& sxy, double& syy) const;
};

struct Gaussian2DFieldGrad {
  std::vector<double> pos;
  std::vector<double> cov_raw;
  std::vector<double> feat;
};

struct RenderConfig2D {
  std::size_t tile = 16;
  // Mahalanobis radius; contributions with d > cutoff_sigmas are skipped.
  // Infinity keeps every primitive while still going through the tiled path.
  double cutoff_sigmas = 3.0;
  // Single pass over every (pixel, primitive) pair with no culling at all.
  bool naive_mode = false;

  void Validate() const;
};

inline RenderConfig2D NaiveRenderConfig() {
  RenderConfig2D cfg;
  cfg.naive_mode = true;
  cfg.cutoff_sigmas = std::numeric_limits<double>::infinity();
  return cfg;
}

// Exponents below this are clamped before exp(); the clamp is part of the
// rendered function and its derivative (zero w.r.t. position and shape).
inline constexpr double kMinExponent = -30.0;

// h x w x field.r latent tensor.
Tensor3 Render2D(const Gaussian2DField& field, std::size_t h, std::size_t w,
                 const RenderConfig2D& cfg = {});

// Gradient of sum(upstream .* Render2D(field, h, w, cfg)) with respect to all
// field parameters, using exactly the forward pass's culling decisions.
Gaussian2DFieldGrad Render2DBackward(const Gaussian2DField& field,
                                     std::size_t h, std::size_t w,
                                     const RenderConfig2D& cfg,
                                     const Tensor3& upstream);

// One isotropic primitive of standard deviation sigma per pixel, carrying the
// target fiber at that pixel. Primitive index is i*w + j.
Gaussian2DField DegenerateFieldFor(const Tensor3& target, double sigma);

// Random initialization: isotropic std sqrt(h*w/n), features
// N(0, feat_std^2). Positions are uniform over the image rectangle, or with
// kGrid the centers of a near-square grid of cells filled row by row.
Gaussian2DField InitField2D(std::size_t n, std::size_t r, std::size_t h,
                            std::size_t w, std::mt19937_64& rng,
                            double feat_std = 0.01,
                            InitLayout layout = InitLayout::kUniform);

}  // namespace gslr

#endif  // GSLR_SPLAT2D_H_

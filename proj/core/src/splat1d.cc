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

#include "gslr/splat1d.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gslr/error.h"

namespace gslr {

double Gaussian1DBank::Sigma(std::size_t idx) const {
  return std::max(std::exp(scale_raw[idx]), kMinSigma1D);
}

void Gaussian1DBank::Validate() const {
  const std::size_t n = r * k;
  if (pos.size() != n || scale_raw.size() != n || feat.size() != n) {
    throw ParameterError("Gaussian1DBank: parameter arrays do not match r=" +
                         std::to_string(r) + ", k=" + std::to_string(k));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(pos[i]) || !std::isfinite(scale_raw[i]) ||
        !std::isfinite(feat[i]))
      throw ParameterError("Gaussian1DBank: non-finite parameter at index " +
                           std::to_string(i));
  }
}

Matrix Render1D(const Gaussian1DBank& bank, std::size_t b) {
  if (b == 0) throw DimensionError("Render1D: b must be >= 1");
  bank.Validate();
  Matrix t(b, bank.r);
  for (std::size_t col = 0; col < bank.r; ++col) {
    for (std::size_t z = 0; z < b; ++z) {
      double acc = 0.0;
      for (std::size_t q = 0; q < bank.k; ++q) {
        const std::size_t idx = col * bank.k + q;
        const double s = bank.Sigma(idx);
        const double d = static_cast<double>(z) - bank.pos[idx];
        acc += bank.feat[idx] * std::exp(-d * d / (2.0 * s * s));
      }
      t(z, col) = acc;
    }
  }
  return t;
}

Gaussian1DBankGrad Render1DBackward(const Gaussian1DBank& bank, std::size_t b,
                                    const Matrix& upstream) {
  if (b == 0) throw DimensionError("Render1DBackward: b must be >= 1");
  bank.Validate();
  if (upstream.rows() != b || upstream.cols() != bank.r)
    throw DimensionError("Render1DBackward: upstream gradient shape mismatch");
  const std::size_t n = bank.r * bank.k;
  Gaussian1DBankGrad g{std::vector<double>(n), std::vector<double>(n),
                       std::vector<double>(n)};
  for (std::size_t col = 0; col < bank.r; ++col) {
    for (std::size_t q = 0; q < bank.k; ++q) {
      const std::size_t idx = col * bank.k + q;
      const double raw_sigma = std::exp(bank.scale_raw[idx]);
      const bool floored = raw_sigma < kMinSigma1D;
      const double s = floored ? kMinSigma1D : raw_sigma;
      const double c = bank.feat[idx];
      double gp = 0.0, gs = 0.0, gc = 0.0;
      for (std::size_t z = 0; z < b; ++z) {
        const double u = upstream(z, col);
        if (u == 0.0) continue;
        const double d = static_cast<double>(z) - bank.pos[idx];
        const double k = std::exp(-d * d / (2.0 * s * s));
        gc += u * k;
        gp += u * c * k * d / (s * s);
        gs += u * c * k * d * d / (s * s * s);
      }
      g.feat[idx] = gc;
      g.pos[idx] = gp;
      // d sigma / d scale_raw = sigma above the floor, 0 on it.
      g.scale_raw[idx] = floored ? 0.0 : gs * s;
    }
  }
  return g;
}

Gaussian1DBank DegenerateBankFor(const Matrix& target, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("DegenerateBankFor: sigma must be > 0");
  const std::size_t b = target.rows();
  Gaussian1DBank bank(target.cols(), b);
  const double log_sigma = std::log(sigma);
  for (std::size_t col = 0; col < bank.r; ++col) {
    for (std::size_t z = 0; z < b; ++z) {
      const std::size_t idx = col * b + z;
      bank.pos[idx] = static_cast<double>(z);
      bank.scale_raw[idx] = log_sigma;
      bank.feat[idx] = target(z, col);
    }
  }
  return bank;
}

Gaussian1DBank InitBank1D(std::size_t r, std::size_t k, std::size_t b,
                          std::mt19937_64& rng, double feat_std,
                          InitLayout layout) {
  Gaussian1DBank bank(r, k);
  std::uniform_real_distribution<double> uz(0.0, static_cast<double>(b - 1));
  std::normal_distribution<double> nf(0.0, feat_std);
  const double log_sigma =
      std::log(static_cast<double>(b) / static_cast<double>(k));
  for (std::size_t i = 0; i < r * k; ++i) {
    if (layout == InitLayout::kGrid) {
      const std::size_t q = i % k;
      bank.pos[i] = k > 1 ? (b - 1.0) * static_cast<double>(q) / (k - 1.0)
                          : 0.5 * (b - 1.0);
    } else {
      bank.pos[i] = b > 1 ? uz(rng) : 0.0;
    }
    bank.scale_raw[i] = log_sigma;
    bank.feat[i] = nf(rng);
  }
  return bank;
}

}  // namespace gslr

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

#include "gslr/maskgen.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gslr/error.h"
#include "gslr/splat1d.h"
#include "gslr/splat2d.h"

namespace gslr {

namespace {

void CheckRate(double sr) {
  if (!(sr > 0.0 && sr <= 1.0))
    throw ConfigError("sampling rate must lie in (0, 1], got " + std::to_string(sr));
}

// First count entries of a seeded partial Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                  std::size_t count,
                                                  std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  return idx;
}

std::size_t RoundedCount(double sr, std::size_t n) {
  return std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(sr * static_cast<double>(n))));
}

Tensor3 ScaleToUnitMax(Tensor3 t) {
  const double mx = *std::max_element(t.data().begin(), t.data().end());
  if (mx > 0.0) {
    for (double& v : t.data()) v /= mx;
  }
  return t;
}

}  // namespace

Mask3 RandomMask(std::size_t h, std::size_t w, std::size_t b, double sr,
                 std::uint64_t seed) {
  CheckRate(sr);
  const std::size_t n = h * w * b;
  Mask3 m(h, w, b);
  for (std::size_t p : SampleWithoutReplacement(n, RoundedCount(sr, n), seed))
    m.set_flat(p, true);
  return m;
}

Mask3 TubeMask(std::size_t h, std::size_t w, std::size_t b, double sr,
               std::uint64_t seed) {
  CheckRate(sr);
  const std::size_t n = h * w;
  Mask3 m(h, w, b);
  for (std::size_t p : SampleWithoutReplacement(n, RoundedCount(sr, n), seed)) {
    for (std::size_t k = 0; k < b; ++k) m.set_flat(k * n + p, true);
  }
  return m;
}

Mask3 SliceMask(std::size_t h, std::size_t w, std::size_t b) {
  if (b <= 10)
    throw ConfigError("slice mask needs more than 10 bands, got " + std::to_string(b));
  Mask3 m(h, w, b);
  for (std::size_t k = 0; k < b; ++k) {
    if (k >= 5 && k + 5 < b) continue;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) m.set(i, j, k, true);
  }
  return m;
}

Tensor3 SynthLowTubalRank(std::size_t h, std::size_t w, std::size_t b,
                          std::size_t r, std::uint64_t seed) {
  if (h == 0 || w == 0 || b == 0 || r == 0)
    throw ConfigError("SynthLowTubalRank: all dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kBumps2D = 6;
  constexpr int kBumps1D = 2;
  const double extent = static_cast<double>(std::max(h, w));

  Tensor3 a(h, w, r);
  for (std::size_t q = 0; q < r; ++q) {
    auto s = a.slice(q);
    std::fill(s.begin(), s.end(), 0.1 * unit(rng));
    for (int n = 0; n < kBumps2D; ++n) {
      const double ci = unit(rng) * static_cast<double>(h - 1);
      const double cj = unit(rng) * static_cast<double>(w - 1);
      const double si = extent * (0.08 + 0.2 * unit(rng));
      const double sj = extent * (0.08 + 0.2 * unit(rng));
      const double amp = 0.2 + unit(rng);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
          const double di = (static_cast<double>(i) - ci) / si;
          const double dj = (static_cast<double>(j) - cj) / sj;
          s[i * w + j] += amp * std::exp(-0.5 * (di * di + dj * dj));
        }
    }
  }

  Matrix t(b, r);
  const double bands = static_cast<double>(b);
  for (std::size_t q = 0; q < r; ++q) {
    for (std::size_t z = 0; z < b; ++z) t(z, q) = 0.05;
    for (int n = 0; n < kBumps1D; ++n) {
      const double c = unit(rng) * (bands - 1.0);
      const double sig = bands * (0.15 + 0.3 * unit(rng));
      const double amp = 0.2 + unit(rng);
      for (std::size_t z = 0; z < b; ++z) {
        const double d = (static_cast<double>(z) - c) / sig;
        t(z, q) += amp * std::exp(-0.5 * d * d);
      }
    }
  }
  return ScaleToUnitMax(Mode3Product(a, t));
}

Tensor3 SynthFromSplatting(std::size_t h, std::size_t w, std::size_t b,
                           std::size_t n, std::size_t k, std::size_t r,
                           std::uint64_t seed) {
  if (h == 0 || w == 0 || b == 0 || n == 0 || k == 0 || r == 0)
    throw ConfigError("SynthFromSplatting: all dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Gaussian2DField field = InitField2D(n, r, h, w, rng);
  for (double& c : field.feat) c = 0.2 + unit(rng);
  Gaussian1DBank bank = InitBank1D(r, k, b, rng);
  for (double& c : bank.feat) c = 0.2 + unit(rng);
  // Widen the 1D primitives so every band is covered.
  const double log_sigma = std::log(std::max(1.0, static_cast<double>(b) / k));
  for (double& s : bank.scale_raw) s = log_sigma;
  RenderConfig2D cfg;
  cfg.cutoff_sigmas = std::numeric_limits<double>::infinity();
  return ScaleToUnitMax(Mode3Product(Render2D(field, h, w, cfg), Render1D(bank, b)));
}

}  // namespace gslr

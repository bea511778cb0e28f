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

#include "gslr/metrics.h"

#include <array>
#include <cmath>
#include <limits>
#include <span>

#include "gslr/error.h"

namespace gslr {

namespace {

void RequireSameShape(const Tensor3& x, const Tensor3& y, const char* what) {
  if (!x.SameShape(y)) throw DimensionError(std::string(what) + ": shape mismatch");
}

// Neumaier-compensated sum of squared differences.
double SumSquaredDiff(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double d = x[p] - y[p];
    const double v = d * d;
    const double t = sum + v;
    comp += std::abs(sum) >= v ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double PsnrFromSse(double sse, std::size_t n) {
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(n);
  return 10.0 * std::log10(1.0 / mse);
}

std::array<double, kSsimWindow> GaussianTaps() {
  std::array<double, kSsimWindow> taps{};
  const int half = kSsimWindow / 2;
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - half;
    taps[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Valid-region separable filtering of an h x w row-major image.
std::vector<double> FilterValid(const double* img, std::size_t h, std::size_t w,
                                const std::array<double, kSsimWindow>& taps) {
  const std::size_t oh = h - kSsimWindow + 1;
  const std::size_t ow = w - kSsimWindow + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < ow; ++j) {
      double s = 0.0;
      for (int t = 0; t < kSsimWindow; ++t) s += taps[t] * img[i * w + j + t];
      rows[i * ow + j] = s;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t i = 0; i < oh; ++i) {
    for (std::size_t j = 0; j < ow; ++j) {
      double s = 0.0;
      for (int t = 0; t < kSsimWindow; ++t) s += taps[t] * rows[(i + t) * ow + j];
      out[i * ow + j] = s;
    }
  }
  return out;
}

double SsimBand(std::span<const double> x, std::span<const double> y,
                std::size_t h, std::size_t w,
                const std::array<double, kSsimWindow>& taps) {
  const std::size_t n = h * w;
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t p = 0; p < n; ++p) {
    xx[p] = x[p] * x[p];
    yy[p] = y[p] * y[p];
    xy[p] = x[p] * y[p];
  }
  const auto mx = FilterValid(x.data(), h, w, taps);
  const auto my = FilterValid(y.data(), h, w, taps);
  const auto sxx = FilterValid(xx.data(), h, w, taps);
  const auto syy = FilterValid(yy.data(), h, w, taps);
  const auto sxy = FilterValid(xy.data(), h, w, taps);
  double total = 0.0;
  for (std::size_t p = 0; p < mx.size(); ++p) {
    const double vx = sxx[p] - mx[p] * mx[p];
    const double vy = syy[p] - my[p] * my[p];
    const double cov = sxy[p] - mx[p] * my[p];
    const double num = (2.0 * mx[p] * my[p] + kSsimC1) * (2.0 * cov + kSsimC2);
    const double den =
        (mx[p] * mx[p] + my[p] * my[p] + kSsimC1) * (vx + vy + kSsimC2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace

double Psnr(const Tensor3& x, const Tensor3& y) {
  RequireSameShape(x, y, "Psnr");
  return PsnrFromSse(SumSquaredDiff(x.data(), y.data()), x.size());
}

std::vector<double> PerBandPsnr(const Tensor3& x, const Tensor3& y) {
  RequireSameShape(x, y, "PerBandPsnr");
  std::vector<double> out(x.b());
  for (std::size_t k = 0; k < x.b(); ++k) {
    out[k] = PsnrFromSse(SumSquaredDiff(x.slice(k), y.slice(k)), x.slice_size());
  }
  return out;
}

double Ssim(const Tensor3& x, const Tensor3& y) {
  RequireSameShape(x, y, "Ssim");
  if (x.h() < static_cast<std::size_t>(kSsimWindow) ||
      x.w() < static_cast<std::size_t>(kSsimWindow)) {
    throw ConfigError("Ssim: bands must be at least 11x11");
  }
  const auto taps = GaussianTaps();
  double total = 0.0;
  for (std::size_t k = 0; k < x.b(); ++k)
    total += SsimBand(x.slice(k), y.slice(k), x.h(), x.w(), taps);
  return total / static_cast<double>(x.b());
}

MetricReport Evaluate(const Tensor3& x, const Tensor3& y) {
  MetricReport r;
  r.psnr_db = Psnr(x, y);
  r.per_band_psnr = PerBandPsnr(x, y);
  r.ssim = Ssim(x, y);
  return r;
}

}  // namespace gslr

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

#ifndef GSLR_METRICS_H_
#define GSLR_METRICS_H_

#include <vector>

#include "gslr/tensor.h"

namespace gslr {

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::vector<double> per_band_psnr;
};

// 10 log10(1 / MSE) for data with peak 1.0. Identical inputs give +inf.
double Psnr(const Tensor3& x, const Tensor3& y);

// PSNR of every frontal slice.
std::vector<double> PerBandPsnr(const Tensor3& x, const Tensor3& y);

// Mean SSIM over valid positions of an 11x11 Gaussian window (std 1.5) with
// C1 = 0.01^2 and C2 = 0.03^2, averaged over bands. Bands smaller than the
// window in either direction are a ConfigError.
double Ssim(const Tensor3& x, const Tensor3& y);

MetricReport Evaluate(const Tensor3& x, const Tensor3& y);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

}  // namespace gslr

#endif  // GSLR_METRICS_H_

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

#include "gslr/optimizer.h"

#include <cmath>
#include <iostream>

#include "gslr/error.h"

namespace gslr {

std::string_view ParamGroupName(ParamGroup g) {
  switch (g) {
    case ParamGroup::kPos2D: return "pos2d";
    case ParamGroup::kCov2D: return "cov2d";
    case ParamGroup::kFeat2D: return "feat2d";
    case ParamGroup::kPos1D: return "pos1d";
    case ParamGroup::kScale1D: return "scale1d";
    case ParamGroup::kFeat1D: return "feat1d";
  }
  return "unknown";
}

bool AdamStep(AdamState& state, const ParamLayout& layout,
              std::span<double> params, std::span<const double> grads) {
  const std::size_t n = layout.total;
  if (params.size() != n || grads.size() != n || state.m.size() != n ||
      state.v.size() != n) {
    throw DimensionError("AdamStep: parameter, gradient and moment lengths "
                         "must all equal the layout size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      ++state.skipped_steps;
      std::clog << "gslr: adam step " << state.step + 1
                << " skipped, non-finite gradient at index " << i << "\n";
      return false;
    }
  }
  const auto t = static_cast<double>(state.step + 1);
  const double corr1 = 1.0 - std::pow(state.beta1, t);
  const double corr2 = 1.0 - std::pow(state.beta2, t);
  for (const ParamSegment& seg : layout.segments) {
    const double lr =
        state.base_lr * state.group_lr_scale[static_cast<std::size_t>(seg.group)];
    for (std::size_t i = seg.offset; i < seg.offset + seg.length; ++i) {
      const double g = grads[i];
      state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
      state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
      const double mhat = state.m[i] / corr1;
      const double vhat = state.v[i] / corr2;
      params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
  ++state.step;
  return true;
}

}  // namespace gslr

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

#ifndef GSLR_OPTIMIZER_H_
#define GSLR_OPTIMIZER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gslr {

enum class ParamGroup : int {
  kPos2D = 0,
  kCov2D,
  kFeat2D,
  kPos1D,
  kScale1D,
  kFeat1D,
};
inline constexpr std::size_t kNumParamGroups = 6;

std::string_view ParamGroupName(ParamGroup g);

// Contiguous run of the flat parameter vector belonging to one group.
struct ParamSegment {
  ParamGroup group;
  std::size_t offset;
  std::size_t length;
};

struct ParamLayout {
  std::vector<ParamSegment> segments;
  std::size_t total = 0;

  void Append(ParamGroup g, std::size_t length) {
    segments.push_back({g, total, length});
    total += length;
  }
};

struct AdamState {
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double base_lr = 1e-2;
  std::array<double, kNumParamGroups> group_lr_scale{1, 1, 1, 1, 1, 1};
  // Steps rejected because of a non-finite gradient.
  std::uint64_t skipped_steps = 0;

  AdamState() = default;
  AdamState(std::size_t n, double lr) : m(n, 0.0), v(n, 0.0), base_lr(lr) {}

  double& lr_scale(ParamGroup g) {
    return group_lr_scale[static_cast<std::size_t>(g)];
  }
};

// Bias-corrected Adam update of params in place. If any gradient entry is
// non-finite the step is skipped: params, moments and step are left untouched,
// skipped_steps is incremented, a line goes to std::clog and false is returned.
bool AdamStep(AdamState& state, const ParamLayout& layout,
              std::span<double> params, std::span<const double> grads);

}  // namespace gslr

#endif  // GSLR_OPTIMIZER_H_

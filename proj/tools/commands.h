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

#ifndef GSLR_TOOLS_COMMANDS_H_
#define GSLR_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "gslr/error.h"
#include "gslr/recovery.h"

namespace gslr::cli {

// Input data the command cannot work with, e.g. values outside [0, 1].
class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data"; }
};

struct Method {
  bool tnn = false;
  LatentMode latent = LatentMode::kGaussian2D;
  TransformMode transform = TransformMode::kGaussian1D;
};

// "gslr", "tnn" or "ablation:<latent>:<transform>".
Method ParseMethod(std::string_view s);
std::string MethodName(const Method& m);

// Model and optimizer flags shared by recover and sweep.
struct ModelFlags {
  std::size_t n = 0;
  std::size_t k = 40;
  std::size_t r = 30;
  std::size_t factor_rank = 8;
  double lambda = 1e-4;
  double lr = 1e-2;
  std::uint64_t seed = 0;
  std::size_t reg_stride = 1;
  std::size_t plateau_window = 200;
  double plateau_tol = 1e-6;
  double cutoff = 3.0;
  std::size_t tile = 16;
  bool naive_render = false;
  std::string init_layout = "uniform";
  double init_feat_std = 0.01;
  std::vector<std::string> lr_scales;  // "<group>=<value>"
};

void AddModelFlags(CLI::App* app, ModelFlags& f, bool with_grid_flags);
RecoveryConfig BuildConfig(const ModelFlags& f, const Method& m,
                           std::size_t iters);

struct SweepOptions {
  std::string input, mask, truth, out;
  std::string method = "gslr";
  std::string pattern = "random";
  std::vector<std::size_t> n, k, r;
  std::vector<double> lambda, lr;
  std::size_t iters = 3000;
  std::size_t jobs = 1;
  ModelFlags flags;
};

void AddSweepCommand(CLI::App& app, SweepOptions& o);
int RunSweep(const SweepOptions& o, std::ostream& out, std::ostream& err);

// Shortest round-trip text for v; "inf", "-inf" and "nan" for non-finite.
std::string FormatNumber(double v);

}  // namespace gslr::cli

#endif  // GSLR_TOOLS_COMMANDS_H_

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

#ifndef GSLR_RECOVERY_H_
#define GSLR_RECOVERY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gslr/init.h"
#include "gslr/metrics.h"
#include "gslr/optimizer.h"
#include "gslr/splat1d.h"
#include "gslr/splat2d.h"
#include "gslr/tensor.h"

namespace gslr {

// How the h x w x r latent tensor is parameterized.
enum class LatentMode {
  kGaussian2D,     // 2D Gaussian splatting
  kUnconstrained,  // dense learnable tensor
  kLowRankFactor,  // each frontal slice is P_i Q_i^T
};

// How the b x r transform matrix is parameterized.
enum class TransformMode {
  kGaussian1D,     // 1D Gaussian splatting per column
  kUnconstrained,  // dense learnable matrix
  kFixedIdentity,  // frozen identity; requires b == r
};

std::string_view LatentModeName(LatentMode m);
std::string_view TransformModeName(TransformMode m);
LatentMode ParseLatentMode(std::string_view s);
TransformMode ParseTransformMode(std::string_view s);

struct RecoveryConfig {
  // 0 selects round(h*w/4), capped at kMaxDefaultPrimitives.
  std::size_t n_primitives_2d = 0;
  std::size_t k_primitives_1d = 40;
  std::size_t latent_depth = 30;
  std::size_t factor_rank = 8;  // kLowRankFactor only
  double lambda = 1e-4;
  std::size_t max_iters = 3000;
  double base_lr = 1e-2;
  // Multiplies base_lr per parameter group, indexed by ParamGroup.
  std::array<double, kNumParamGroups> group_lr_scale{1, 1, 1, 1, 1, 1};
  std::uint64_t seed = 0;
  std::size_t reg_stride = 1;
  double subgrad_tol = 1e-8;
  double init_feat_std = 0.01;
  InitLayout init_layout = InitLayout::kUniform;
  std::size_t plateau_window = 200;
  double plateau_tol = 1e-6;
  RenderConfig2D render;
  LatentMode latent_mode = LatentMode::kGaussian2D;
  TransformMode transform_mode = TransformMode::kGaussian1D;

  static constexpr std::size_t kMaxDefaultPrimitives = 90000;

  std::size_t ResolvedPrimitives(std::size_t h, std::size_t w) const;
  // Throws ConfigError on invalid values.
  void Validate() const;
};

struct ModelDims {
  std::size_t h = 0, w = 0, b = 0, r = 0;
  bool operator==(const ModelDims&) const = default;
};

// X = A x_3 T with A and T parameterized per the latent/transform modes. Only
// the members matching the active modes are populated.
struct GslrModel {
  ModelDims dims;
  LatentMode latent_mode = LatentMode::kGaussian2D;
  TransformMode transform_mode = TransformMode::kGaussian1D;
  std::size_t factor_rank = 0;

  Gaussian2DField field2d;
  Tensor3 latent;                 // kUnconstrained
  std::vector<double> factor_p;   // kLowRankFactor: r x h x q
  std::vector<double> factor_q;   // kLowRankFactor: r x w x q

  Gaussian1DBank bank1d;
  Matrix transform;               // kUnconstrained transform

  // Flat parameter order: pos2d, cov2d, feat2d, pos1d, scale1d, feat1d;
  // groups absent from a mode are omitted.
  ParamLayout Layout() const;
  std::size_t ParameterCount() const { return Layout().total; }
  std::vector<double> Flatten() const;
  void Assign(std::span<const double> params);

  Tensor3 RenderLatent(const RenderConfig2D& cfg) const;
  Matrix RenderTransform() const;
  Tensor3 Reconstruct(const RenderConfig2D& cfg) const;
};

// Model of shape (h, w, b) with seeded random initialization per cfg.
GslrModel InitModel(std::size_t h, std::size_t w, std::size_t b,
                    const RecoveryConfig& cfg);

struct ObjectiveValue {
  double loss = 0.0;
  double data_term = 0.0;
  double reg_term = 0.0;
};

// data_term = |M .* (O - A x_3 T)|_F^2, reg_term = sum_i |A_[i]|_*,
// loss = data_term + lambda * reg_term.
ObjectiveValue Objective(const GslrModel& model, const Tensor3& observed,
                         const Mask3& mask, double lambda,
                         const RenderConfig2D& render = {});

struct ObjectiveGrad {
  ObjectiveValue value;
  std::vector<double> grad;         // flat, in model.Layout() order
  Matrix transform_data_grad;       // d(data_term)/dT, b x r
  Tensor3 latent_grad;              // d(loss)/dA, h x w x r
};

struct BackwardOptions {
  bool include_reg = true;  // false skips the nuclear-norm term entirely
  double subgrad_tol = 1e-8;
};

// Value and gradient of the objective w.r.t. every model parameter. The
// regularizer uses the thresholded subgradient U_r V_r^T of each slice.
ObjectiveGrad ObjectiveBackward(const GslrModel& model,
                                const Tensor3& observed, const Mask3& mask,
                                double lambda, const RenderConfig2D& render = {},
                                const BackwardOptions& opts = {});

// reg_term is only evaluated when lambda > 0; on off-stride iterations it
// repeats the most recent evaluation.
struct IterRecord {
  std::size_t iter = 0;
  double loss = 0.0;
  double data_term = 0.0;
  double reg_term = 0.0;
};

struct TrainReport {
  std::vector<IterRecord> trace;
  std::size_t iterations = 0;
  bool plateaued = false;
  bool diverged = false;
  std::string stop_reason;
  double wall_seconds = 0.0;
  std::optional<MetricReport> metrics;
};

// Everything needed to continue training bit-identically.
struct TrainingState {
  GslrModel model;
  AdamState adam;
  std::size_t iteration = 0;       // completed iterations
  std::vector<IterRecord> trace;
};

struct RecoverHooks {
  std::size_t checkpoint_every = 0;
  std::function<void(const TrainingState&)> on_checkpoint;
  std::function<void(const IterRecord&)> on_iteration;
  const Tensor3* truth = nullptr;
};

struct RecoveryResult {
  Tensor3 x_hat;  // clamped to [0, 1]
  TrainingState state;
  TrainReport report;
};

TrainingState InitTrainingState(std::size_t h, std::size_t w, std::size_t b,
                                const RecoveryConfig& cfg);

// Seeded init followed by Adam on the objective until max_iters or a plateau
// of the observed loss. Throws ConfigError for an all-false mask.
RecoveryResult Recover(const Tensor3& observed, const Mask3& mask,
                       const RecoveryConfig& cfg, const RecoverHooks& hooks = {});

// Continues from an existing state (e.g. a loaded checkpoint).
RecoveryResult Resume(const Tensor3& observed, const Mask3& mask,
                      const RecoveryConfig& cfg, TrainingState state,
                      const RecoverHooks& hooks = {});

// Clamps every entry to [0, 1].
Tensor3 ClampUnit(Tensor3 t);

}  // namespace gslr

#endif  // GSLR_RECOVERY_H_

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

#include "gslr/recovery.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "gslr/error.h"
#include "gslr/linalg.h"

namespace gslr {

std::string_view LatentModeName(LatentMode m) {
  switch (m) {
    case LatentMode::kGaussian2D: return "gaussian2d";
    case LatentMode::kUnconstrained: return "unconstrained";
    case LatentMode::kLowRankFactor: return "lowrank_factor";
  }
  return "unknown";
}

std::string_view TransformModeName(TransformMode m) {
  switch (m) {
    case TransformMode::kGaussian1D: return "gaussian1d";
    case TransformMode::kUnconstrained: return "unconstrained";
    case TransformMode::kFixedIdentity: return "fixed_identity";
  }
  return "unknown";
}

LatentMode ParseLatentMode(std::string_view s) {
  if (s == "gaussian2d") return LatentMode::kGaussian2D;
  if (s == "unconstrained") return LatentMode::kUnconstrained;
  if (s == "lowrank_factor") return LatentMode::kLowRankFactor;
  throw ConfigError("unknown latent mode '" + std::string(s) + "'");
}

TransformMode ParseTransformMode(std::string_view s) {
  if (s == "gaussian1d") return TransformMode::kGaussian1D;
  if (s == "unconstrained") return TransformMode::kUnconstrained;
  if (s == "fixed_identity") return TransformMode::kFixedIdentity;
  throw ConfigError("unknown transform mode '" + std::string(s) + "'");
}

std::size_t RecoveryConfig::ResolvedPrimitives(std::size_t h,
                                               std::size_t w) const {
  if (n_primitives_2d > 0) return n_primitives_2d;
  const auto n = static_cast<std::size_t>(
      std::llround(static_cast<double>(h * w) / 4.0));
  return std::clamp<std::size_t>(n, 1, kMaxDefaultPrimitives);
}

void RecoveryConfig::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be a finite value >= 0");
  if (k_primitives_1d < 1) throw ConfigError("k_primitives_1d must be >= 1");
  if (latent_depth < 1) throw ConfigError("latent_depth must be >= 1");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (factor_rank < 1) throw ConfigError("factor_rank must be >= 1");
  if (reg_stride < 1) throw ConfigError("reg_stride must be >= 1");
  if (!(base_lr > 0.0)) throw ConfigError("base_lr must be > 0");
  for (double s : group_lr_scale)
    if (!(s > 0.0) || !std::isfinite(s))
      throw ConfigError("group_lr_scale entries must be finite and > 0");
  if (!(subgrad_tol >= 0.0)) throw ConfigError("subgrad_tol must be >= 0");
  if (!(init_feat_std > 0.0)) throw ConfigError("init_feat_std must be > 0");
  render.Validate();
}

ParamLayout GslrModel::Layout() const {
  ParamLayout l;
  switch (latent_mode) {
    case LatentMode::kGaussian2D:
      l.Append(ParamGroup::kPos2D, field2d.pos.size());
      l.Append(ParamGroup::kCov2D, field2d.cov_raw.size());
      l.Append(ParamGroup::kFeat2D, field2d.feat.size());
      break;
    case LatentMode::kUnconstrained:
      l.Append(ParamGroup::kFeat2D, latent.size());
      break;
    case LatentMode::kLowRankFactor:
      l.Append(ParamGroup::kFeat2D, factor_p.size() + factor_q.size());
      break;
  }
  switch (transform_mode) {
    case TransformMode::kGaussian1D:
      l.Append(ParamGroup::kPos1D, bank1d.pos.size());
      l.Append(ParamGroup::kScale1D, bank1d.scale_raw.size());
      l.Append(ParamGroup::kFeat1D, bank1d.feat.size());
      break;
    case TransformMode::kUnconstrained:
      l.Append(ParamGroup::kFeat1D, transform.size());
      break;
    case TransformMode::kFixedIdentity:
      break;
  }
  return l;
}

namespace {

// Visits the parameter blocks of the active modes in flat-layout order.
template <typename Model, typename Fn>
void ForEachBlock(Model& m, Fn&& fn) {
  switch (m.latent_mode) {
    case LatentMode::kGaussian2D:
      fn(std::span(m.field2d.pos));
      fn(std::span(m.field2d.cov_raw));
      fn(std::span(m.field2d.feat));
      break;
    case LatentMode::kUnconstrained:
      fn(m.latent.data());
      break;
    case LatentMode::kLowRankFactor:
      fn(std::span(m.factor_p));
      fn(std::span(m.factor_q));
      break;
  }
  switch (m.transform_mode) {
    case TransformMode::kGaussian1D:
      fn(std::span(m.bank1d.pos));
      fn(std::span(m.bank1d.scale_raw));
      fn(std::span(m.bank1d.feat));
      break;
    case TransformMode::kUnconstrained:
      fn(m.transform.data());
      break;
    case TransformMode::kFixedIdentity:
      break;
  }
}

void Append(std::vector<double>& dst, std::span<const double> src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

std::vector<double> GslrModel::Flatten() const {
  std::vector<double> out;
  out.reserve(ParameterCount());
  ForEachBlock(*this, [&](std::span<const double> s) { Append(out, s); });
  return out;
}

void GslrModel::Assign(std::span<const double> params) {
  if (params.size() != ParameterCount())
    throw DimensionError("GslrModel::Assign: parameter count mismatch");
  std::size_t off = 0;
  ForEachBlock(*this, [&](std::span<double> s) {
    std::copy_n(params.begin() + off, s.size(), s.begin());
    off += s.size();
  });
}

Tensor3 GslrModel::RenderLatent(const RenderConfig2D& cfg) const {
  switch (latent_mode) {
    case LatentMode::kGaussian2D:
      return Render2D(field2d, dims.h, dims.w, cfg);
    case LatentMode::kUnconstrained:
      return latent;
    case LatentMode::kLowRankFactor: {
      const std::size_t h = dims.h, w = dims.w, q = factor_rank;
      Tensor3 a(h, w, dims.r);
      for (std::size_t s = 0; s < dims.r; ++s) {
        const double* p = &factor_p[s * h * q];
        const double* qq = &factor_q[s * w * q];
        auto dst = a.slice(s);
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < w; ++j) {
            double acc = 0.0;
            for (std::size_t c = 0; c < q; ++c) acc += p[i * q + c] * qq[j * q + c];
            dst[i * w + j] = acc;
          }
      }
      return a;
    }
  }
  return {};
}

Matrix GslrModel::RenderTransform() const {
  switch (transform_mode) {
    case TransformMode::kGaussian1D: return Render1D(bank1d, dims.b);
    case TransformMode::kUnconstrained: return transform;
    case TransformMode::kFixedIdentity: return Matrix::Identity(dims.b);
  }
  return {};
}

Tensor3 GslrModel::Reconstruct(const RenderConfig2D& cfg) const {
  return Mode3Product(RenderLatent(cfg), RenderTransform());
}

GslrModel InitModel(std::size_t h, std::size_t w, std::size_t b,
                    const RecoveryConfig& cfg) {
  cfg.Validate();
  if (h == 0 || w == 0 || b == 0) throw DimensionError("InitModel: empty shape");
  if (cfg.transform_mode == TransformMode::kFixedIdentity &&
      cfg.latent_depth != b) {
    throw ConfigError("fixed_identity transform requires latent_depth (" +
                      std::to_string(cfg.latent_depth) + ") == bands (" +
                      std::to_string(b) + ")");
  }
  GslrModel m;
  m.dims = {h, w, b, cfg.latent_depth};
  m.latent_mode = cfg.latent_mode;
  m.transform_mode = cfg.transform_mode;
  const std::size_t r = cfg.latent_depth;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, cfg.init_feat_std);

  switch (cfg.latent_mode) {
    case LatentMode::kGaussian2D:
      m.field2d = InitField2D(cfg.ResolvedPrimitives(h, w), r, h, w, rng,
                              cfg.init_feat_std, cfg.init_layout);
      break;
    case LatentMode::kUnconstrained:
      m.latent = Tensor3(h, w, r);
      for (double& v : m.latent.data()) v = normal(rng);
      break;
    case LatentMode::kLowRankFactor:
      m.factor_rank = cfg.factor_rank;
      m.factor_p.resize(r * h * cfg.factor_rank);
      m.factor_q.resize(r * w * cfg.factor_rank);
      for (double& v : m.factor_p) v = normal(rng);
      for (double& v : m.factor_q) v = normal(rng);
      break;
  }
  switch (cfg.transform_mode) {
    case TransformMode::kGaussian1D:
      m.bank1d = InitBank1D(r, cfg.k_primitives_1d, b, rng, cfg.init_feat_std,
                            cfg.init_layout);
      break;
    case TransformMode::kUnconstrained:
      m.transform = Matrix(b, r);
      for (double& v : m.transform.data()) v = normal(rng);
      break;
    case TransformMode::kFixedIdentity:
      break;
  }
  return m;
}

namespace {

void CheckShapes(const GslrModel& model, const Tensor3& o, const Mask3& mask) {
  if (o.h() != model.dims.h || o.w() != model.dims.w || o.b() != model.dims.b)
    throw DimensionError("objective: observation shape does not match model");
  if (!mask.SameShape(o))
    throw DimensionError("objective: mask shape does not match observation");
}

double RegTerm(const Tensor3& latent) {
  double s = 0.0;
  for (std::size_t i = 0; i < latent.b(); ++i) s += NuclearNorm(latent.SliceMatrix(i));
  return s;
}

}  // namespace

ObjectiveValue Objective(const GslrModel& model, const Tensor3& observed,
                         const Mask3& mask, double lambda,
                         const RenderConfig2D& render) {
  CheckShapes(model, observed, mask);
  const Tensor3 a = model.RenderLatent(render);
  const Tensor3 x = Mode3Product(a, model.RenderTransform());
  ObjectiveValue v;
  v.data_term = MaskedSquaredError(observed, x, mask);
  v.reg_term = RegTerm(a);
  v.loss = v.data_term + lambda * v.reg_term;
  return v;
}

ObjectiveGrad ObjectiveBackward(const GslrModel& model,
                                const Tensor3& observed, const Mask3& mask,
                                double lambda, const RenderConfig2D& render,
                                const BackwardOptions& opts) {
  CheckShapes(model, observed, mask);
  const std::size_t h = model.dims.h, w = model.dims.w;
  const std::size_t b = model.dims.b, r = model.dims.r;
  const std::size_t hw = h * w;

  const Tensor3 a = model.RenderLatent(render);
  const Matrix t = model.RenderTransform();
  const Tensor3 x = Mode3Product(a, t);

  ObjectiveGrad out;
  // Upstream of the data term w.r.t. X: 2 M .* (X - O).
  Tensor3 gx(h, w, b);
  double data = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (!mask.at(p)) continue;
    const double d = x.data()[p] - observed.data()[p];
    data += d * d;
    gx.data()[p] = 2.0 * d;
  }
  out.value.data_term = data;

  // dA = G x_3 T^T, dT = unfold(G) unfold(A)^T.
  out.latent_grad = Mode3Product(gx, t.Transposed());
  out.transform_data_grad = Matrix(b, r);
  for (std::size_t z = 0; z < b; ++z) {
    auto gs = gx.slice(z);
    for (std::size_t q = 0; q < r; ++q) {
      auto as = a.slice(q);
      double s = 0.0;
      for (std::size_t p = 0; p < hw; ++p) s += gs[p] * as[p];
      out.transform_data_grad(z, q) = s;
    }
  }

  if (opts.include_reg) {
    double reg = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      const NuclearNormEval nn =
          NuclearNormWithSubgrad(a.SliceMatrix(i), opts.subgrad_tol);
      reg += nn.value;
      if (lambda != 0.0) {
        auto dst = out.latent_grad.slice(i);
        auto src = nn.subgrad.data();
        for (std::size_t p = 0; p < hw; ++p) dst[p] += lambda * src[p];
      }
    }
    out.value.reg_term = reg;
  }
  out.value.loss = out.value.data_term + lambda * out.value.reg_term;

  // Route dA and dT into the parameterizations.
  out.grad.reserve(model.ParameterCount());
  switch (model.latent_mode) {
    case LatentMode::kGaussian2D: {
      const Gaussian2DFieldGrad g =
          Render2DBackward(model.field2d, h, w, render, out.latent_grad);
      Append(out.grad, g.pos);
      Append(out.grad, g.cov_raw);
      Append(out.grad, g.feat);
      break;
    }
    case LatentMode::kUnconstrained:
      Append(out.grad, out.latent_grad.data());
      break;
    case LatentMode::kLowRankFactor: {
      const std::size_t q = model.factor_rank;
      std::vector<double> gp(model.factor_p.size()), gq(model.factor_q.size());
      for (std::size_t s = 0; s < r; ++s) {
        auto g = out.latent_grad.slice(s);
        const double* p = &model.factor_p[s * h * q];
        const double* qq = &model.factor_q[s * w * q];
        double* dp = &gp[s * h * q];
        double* dq = &gq[s * w * q];
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < w; ++j) {
            const double gij = g[i * w + j];
            if (gij == 0.0) continue;
            for (std::size_t c = 0; c < q; ++c) {
              dp[i * q + c] += gij * qq[j * q + c];
              dq[j * q + c] += gij * p[i * q + c];
            }
          }
      }
      Append(out.grad, gp);
      Append(out.grad, gq);
      break;
    }
  }
  switch (model.transform_mode) {
    case TransformMode::kGaussian1D: {
      const Gaussian1DBankGrad g =
          Render1DBackward(model.bank1d, b, out.transform_data_grad);
      Append(out.grad, g.pos);
      Append(out.grad, g.scale_raw);
      Append(out.grad, g.feat);
      break;
    }
    case TransformMode::kUnconstrained:
      Append(out.grad, out.transform_data_grad.data());
      break;
    case TransformMode::kFixedIdentity:
      break;
  }
  return out;
}

Tensor3 ClampUnit(Tensor3 t) {
  for (double& v : t.data()) v = std::clamp(v, 0.0, 1.0);
  return t;
}

TrainingState InitTrainingState(std::size_t h, std::size_t w, std::size_t b,
                                const RecoveryConfig& cfg) {
  TrainingState st;
  st.model = InitModel(h, w, b, cfg);
  st.adam = AdamState(st.model.ParameterCount(), cfg.base_lr);
  st.adam.group_lr_scale = cfg.group_lr_scale;
  return st;
}

RecoveryResult Recover(const Tensor3& observed, const Mask3& mask,
                       const RecoveryConfig& cfg, const RecoverHooks& hooks) {
  cfg.Validate();
  return Resume(observed, mask, cfg,
                InitTrainingState(observed.h(), observed.w(), observed.b(), cfg),
                hooks);
}

RecoveryResult Resume(const Tensor3& observed, const Mask3& mask,
                      const RecoveryConfig& cfg, TrainingState state,
                      const RecoverHooks& hooks) {
  cfg.Validate();
  CheckShapes(state.model, observed, mask);
  if (mask.count() == 0) throw ConfigError("recover: mask has no observed entries");
  if (state.adam.m.size() != state.model.ParameterCount())
    throw DimensionError("recover: optimizer state does not match the model");

  const auto t0 = std::chrono::steady_clock::now();
  const ParamLayout layout = state.model.Layout();
  std::vector<double> params = state.model.Flatten();
  RecoveryResult result;
  TrainReport& report = result.report;
  report.stop_reason = "max_iters";

  while (state.iteration < cfg.max_iters) {
    BackwardOptions opts;
    opts.subgrad_tol = cfg.subgrad_tol;
    opts.include_reg = cfg.lambda > 0.0 && state.iteration % cfg.reg_stride == 0;
    ObjectiveGrad og;
    try {
      og = ObjectiveBackward(state.model, observed, mask, cfg.lambda, cfg.render,
                             opts);
    } catch (const NumericalError& e) {
      // Overflowing parameters usually surface first as an SVD failure in the
      // regularizer.
      report.diverged = true;
      report.stop_reason = "diverged: " + std::string(e.what()) + " at iteration " +
                           std::to_string(state.iteration);
      break;
    }
    if (!opts.include_reg && cfg.lambda > 0.0 && !state.trace.empty()) {
      // Off-stride step: carry the last evaluated regularizer value.
      og.value.reg_term = state.trace.back().reg_term;
      og.value.loss = og.value.data_term + cfg.lambda * og.value.reg_term;
    }
    const IterRecord rec{state.iteration, og.value.loss, og.value.data_term,
                         og.value.reg_term};
    if (!std::isfinite(rec.loss)) {
      report.diverged = true;
      report.stop_reason = "diverged: non-finite loss at iteration " +
                           std::to_string(state.iteration);
      break;
    }
    state.trace.push_back(rec);
    if (hooks.on_iteration) hooks.on_iteration(rec);

    AdamStep(state.adam, layout, params, og.grad);
    state.model.Assign(params);
    ++state.iteration;

    if (hooks.checkpoint_every > 0 && hooks.on_checkpoint &&
        state.iteration % hooks.checkpoint_every == 0) {
      hooks.on_checkpoint(state);
    }

    const std::size_t n = state.trace.size();
    if (cfg.plateau_window > 0 && n > cfg.plateau_window) {
      const double old_loss = state.trace[n - 1 - cfg.plateau_window].loss;
      const double improvement = old_loss - rec.loss;
      if (rec.loss == 0.0 || improvement <= cfg.plateau_tol * old_loss) {
        report.plateaued = true;
        report.stop_reason = "plateau";
        break;
      }
    }
  }

  report.iterations = state.iteration;
  report.trace = state.trace;
  result.x_hat = ClampUnit(state.model.Reconstruct(cfg.render));
  if (hooks.truth != nullptr) report.metrics = Evaluate(result.x_hat, *hooks.truth);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.state = std::move(state);
  return result;
}

}  // namespace gslr

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
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gslr/error.h"
#include "gslr/maskgen.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace gslr {
namespace {

using testing::MaxAbsDiff;
using testing::RandomTensor;

RenderConfig2D NoCutoff() {
  RenderConfig2D cfg;
  cfg.cutoff_sigmas = std::numeric_limits<double>::infinity();
  return cfg;
}

RecoveryConfig TinyConfig(std::size_t n, std::size_t k, std::size_t r) {
  RecoveryConfig c;
  c.n_primitives_2d = n;
  c.k_primitives_1d = k;
  c.latent_depth = r;
  c.lambda = 0.0;
  c.render = NoCutoff();
  return c;
}

// A model with O(1) features so gradients are not dominated by the init std.
GslrModel RandomModel(std::size_t h, std::size_t w, std::size_t b,
                      const RecoveryConfig& cfg, std::mt19937_64& rng) {
  GslrModel m = InitModel(h, w, b, cfg);
  std::vector<double> p = m.Flatten();
  std::normal_distribution<double> n(0.0, 0.3);
  const ParamLayout l = m.Layout();
  for (const ParamSegment& s : l.segments) {
    for (std::size_t i = s.offset; i < s.offset + s.length; ++i) {
      if (s.group == ParamGroup::kFeat2D || s.group == ParamGroup::kFeat1D)
        p[i] = 1.0 + n(rng);
      else
        p[i] += n(rng);
    }
  }
  m.Assign(p);
  return m;
}

TEST(ObjectiveTest, ExactModelHasZeroLoss) {
  std::mt19937_64 rng(1);
  Tensor3 o = RandomTensor(5, 4, 3, rng);
  RecoveryConfig c = TinyConfig(1, 1, 3);
  c.latent_mode = LatentMode::kUnconstrained;
  c.transform_mode = TransformMode::kFixedIdentity;
  GslrModel m = InitModel(5, 4, 3, c);
  m.latent = o;
  Mask3 mask = testing::RandomBernoulliMask(5, 4, 3, 0.5, rng);
  EXPECT_EQ(Objective(m, o, mask, 0.0).loss, 0.0);
}

TEST(ObjectiveTest, ZeroFeatureModel) {
  std::mt19937_64 rng(2);
  Tensor3 o = RandomTensor(6, 6, 4, rng);
  Mask3 mask = testing::RandomBernoulliMask(6, 6, 4, 0.4, rng);
  GslrModel m = InitModel(6, 6, 4, TinyConfig(4, 3, 2));
  std::fill(m.field2d.feat.begin(), m.field2d.feat.end(), 0.0);
  double want = 0.0;
  for (std::size_t p = 0; p < o.size(); ++p)
    if (mask.at(p)) want += o.data()[p] * o.data()[p];
  EXPECT_NEAR(Objective(m, o, mask, 0.0).loss, want, 1e-12);
  ObjectiveValue v = Objective(m, o, mask, 1.0);
  EXPECT_EQ(v.reg_term, 0.0);
  EXPECT_NEAR(v.loss, want, 1e-12);
}

TEST(ObjectiveTest, ComponentsAndShapes) {
  std::mt19937_64 rng(3);
  RecoveryConfig c = TinyConfig(5, 3, 2);
  GslrModel m = RandomModel(6, 5, 4, c, rng);
  Tensor3 o = RandomTensor(6, 5, 4, rng);
  Mask3 mask = testing::RandomBernoulliMask(6, 5, 4, 0.6, rng);
  ObjectiveValue v = Objective(m, o, mask, 0.3, c.render);
  EXPECT_NEAR(v.data_term, MaskedSquaredError(o, m.Reconstruct(c.render), mask), 1e-12);
  EXPECT_GE(v.reg_term, 0.0);
  EXPECT_NEAR(v.loss, v.data_term + 0.3 * v.reg_term, 1e-12);
  EXPECT_THROW(Objective(m, Tensor3(6, 5, 3), Mask3(6, 5, 3, true), 0.0),
               DimensionError);
  EXPECT_THROW(Objective(m, o, Mask3(6, 4, 4, true), 0.0), DimensionError);
}

TEST(ObjectiveBackwardTest, EmptyMaskZeroGradient) {
  std::mt19937_64 rng(4);
  RecoveryConfig c = TinyConfig(4, 3, 2);
  GslrModel m = RandomModel(6, 6, 4, c, rng);
  ObjectiveGrad g = ObjectiveBackward(m, RandomTensor(6, 6, 4, rng),
                                      Mask3(6, 6, 4, false), 0.0, c.render);
  for (double v : g.grad) EXPECT_EQ(v, 0.0);
}

std::vector<double> NumericGradient(GslrModel m, const Tensor3& o,
                                    const Mask3& mask, double lambda,
                                    const RenderConfig2D& render) {
  auto f = [&](const std::vector<double>& p) {
    m.Assign(p);
    return Objective(m, o, mask, lambda, render).loss;
  };
  return testing::FiniteDifferenceGradient(f, m.Flatten(), 1e-6);
}

double ScaledMaxError(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, testing::RelativeError(a[i], b[i], 1e-4 * scale));
  return worst;
}

TEST(ObjectiveBackwardTest, MatchesFiniteDifferences) {
  for (std::uint64_t seed : {5, 6, 7}) {
    std::mt19937_64 rng(seed);
    RecoveryConfig c = TinyConfig(4, 3, 2);
    GslrModel m = RandomModel(6, 6, 4, c, rng);
    Tensor3 o = RandomTensor(6, 6, 4, rng);
    Mask3 mask = testing::RandomBernoulliMask(6, 6, 4, 0.7, rng);
    ObjectiveGrad g0 = ObjectiveBackward(m, o, mask, 0.0, c.render);
    EXPECT_LT(ScaledMaxError(g0.grad, NumericGradient(m, o, mask, 0.0, c.render)), 1e-4);
    ObjectiveGrad g1 = ObjectiveBackward(m, o, mask, 1e-2, c.render);
    EXPECT_LT(ScaledMaxError(g1.grad, NumericGradient(m, o, mask, 1e-2, c.render)), 1e-3);
  }
}

TEST(ObjectiveBackwardTest, AblationModesMatchFiniteDifferences) {
  std::mt19937_64 rng(8);
  for (LatentMode lm : {LatentMode::kUnconstrained, LatentMode::kLowRankFactor}) {
    for (TransformMode tm : {TransformMode::kUnconstrained, TransformMode::kGaussian1D}) {
      RecoveryConfig c = TinyConfig(4, 3, 2);
      c.latent_mode = lm;
      c.transform_mode = tm;
      c.factor_rank = 2;
      GslrModel m = RandomModel(5, 4, 3, c, rng);
      Tensor3 o = RandomTensor(5, 4, 3, rng);
      Mask3 mask = testing::RandomBernoulliMask(5, 4, 3, 0.7, rng);
      ObjectiveGrad g = ObjectiveBackward(m, o, mask, 0.0, c.render);
      EXPECT_LT(ScaledMaxError(g.grad, NumericGradient(m, o, mask, 0.0, c.render)), 1e-4)
          << LatentModeName(lm) << "/" << TransformModeName(tm);
    }
  }
}

TEST(ObjectiveBackwardTest, RegularizerLinearInLambda) {
  std::mt19937_64 rng(9);
  RecoveryConfig c = TinyConfig(6, 3, 3);
  GslrModel m = RandomModel(8, 8, 5, c, rng);
  Tensor3 o = RandomTensor(8, 8, 5, rng);
  Mask3 mask(8, 8, 5, true);
  auto g0 = ObjectiveBackward(m, o, mask, 0.0, c.render).grad;
  auto g1 = ObjectiveBackward(m, o, mask, 0.25, c.render).grad;
  auto g2 = ObjectiveBackward(m, o, mask, 0.5, c.render).grad;
  for (std::size_t i = 0; i < g0.size(); ++i)
    EXPECT_NEAR(g2[i] - g0[i], 2.0 * (g1[i] - g0[i]),
                1e-12 * std::max(1.0, std::abs(g0[i])));
}

TEST(ObjectiveBackwardTest, SliceMaskLeavesMissingTransformRowsZero) {
  std::mt19937_64 rng(10);
  RecoveryConfig c = TinyConfig(8, 4, 3);
  c.transform_mode = TransformMode::kUnconstrained;
  GslrModel m = RandomModel(6, 6, 14, c, rng);
  Mask3 mask = SliceMask(6, 6, 14);
  ObjectiveGrad g = ObjectiveBackward(m, RandomTensor(6, 6, 14, rng), mask, 0.0,
                                      c.render);
  for (std::size_t z = 0; z < 14; ++z) {
    double row = 0.0;
    for (std::size_t q = 0; q < 3; ++q) row += std::abs(g.transform_data_grad(z, q));
    if (z >= 5 && z < 9)
      EXPECT_EQ(row, 0.0) << "band " << z;
    else
      EXPECT_GT(row, 0.0) << "band " << z;
  }
}

TEST(ModelTest, ParameterCounts) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> d(1, 12);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = d(rng), k = d(rng), r = d(rng);
    GslrModel m = InitModel(7, 5, 9, TinyConfig(n, k, r));
    EXPECT_EQ(m.ParameterCount(), n * (5 + r) + 3 * k * r);
    EXPECT_EQ(m.Flatten().size(), m.ParameterCount());
  }
  RecoveryConfig c = TinyConfig(3, 2, 4);
  c.latent_mode = LatentMode::kLowRankFactor;
  c.factor_rank = 2;
  c.transform_mode = TransformMode::kUnconstrained;
  EXPECT_EQ(InitModel(7, 5, 9, c).ParameterCount(), 4u * (7 + 5) * 2 + 9 * 4);
  c.latent_mode = LatentMode::kUnconstrained;
  c.transform_mode = TransformMode::kFixedIdentity;
  c.latent_depth = 9;
  EXPECT_EQ(InitModel(7, 5, 9, c).ParameterCount(), 7u * 5 * 9);
}

TEST(ModelTest, FlattenAssignRoundTrip) {
  std::mt19937_64 rng(12);
  GslrModel m = RandomModel(5, 5, 4, TinyConfig(3, 2, 2), rng);
  std::vector<double> p = m.Flatten();
  for (double& v : p) v += 0.125;
  GslrModel n = m;
  n.Assign(p);
  EXPECT_EQ(n.Flatten(), p);
  p.pop_back();
  EXPECT_THROW(n.Assign(p), DimensionError);
}

TEST(ModelTest, PrimitiveOrderInvariance) {
  std::mt19937_64 rng(13);
  RecoveryConfig c = TinyConfig(12, 5, 3);
  GslrModel m = RandomModel(9, 8, 7, c, rng);
  GslrModel p = m;
  std::vector<std::size_t> perm(12);
  for (std::size_t i = 0; i < 12; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < 12; ++i) {
    const std::size_t s = perm[i];
    for (int a = 0; a < 2; ++a) p.field2d.pos[2 * i + a] = m.field2d.pos[2 * s + a];
    for (int a = 0; a < 3; ++a) p.field2d.cov_raw[3 * i + a] = m.field2d.cov_raw[3 * s + a];
    for (int a = 0; a < 3; ++a) p.field2d.feat[3 * i + a] = m.field2d.feat[3 * s + a];
  }
  for (std::size_t col = 0; col < 3; ++col) {
    std::vector<std::size_t> q(5);
    for (std::size_t i = 0; i < 5; ++i) q[i] = i;
    std::shuffle(q.begin(), q.end(), rng);
    for (std::size_t i = 0; i < 5; ++i) {
      p.bank1d.pos[col * 5 + i] = m.bank1d.pos[col * 5 + q[i]];
      p.bank1d.scale_raw[col * 5 + i] = m.bank1d.scale_raw[col * 5 + q[i]];
      p.bank1d.feat[col * 5 + i] = m.bank1d.feat[col * 5 + q[i]];
    }
  }
  EXPECT_LT(MaxAbsDiff(m.Reconstruct(c.render).data(), p.Reconstruct(c.render).data()),
            1e-10);
}

TEST(ModelTest, FixedIdentityIsLatentOnly) {
  std::mt19937_64 rng(14);
  RecoveryConfig c = TinyConfig(10, 1, 3);
  c.transform_mode = TransformMode::kFixedIdentity;
  GslrModel m = RandomModel(8, 8, 3, c, rng);
  EXPECT_EQ(m.Reconstruct(c.render), m.RenderLatent(c.render));
  EXPECT_EQ(m.ParameterCount(), 10u * 8);
  EXPECT_THROW(InitModel(8, 8, 4, c), ConfigError);
}

TEST(ConfigTest, Validation) {
  RecoveryConfig c;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(c.ResolvedPrimitives(64, 64), 1024u);
  EXPECT_EQ(c.ResolvedPrimitives(1000, 1000), RecoveryConfig::kMaxDefaultPrimitives);
  auto bad = [](auto mutate) {
    RecoveryConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.lambda = -1; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.k_primitives_1d = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.latent_depth = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.max_iters = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.base_lr = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.group_lr_scale[2] = -1; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](RecoveryConfig& c) { c.render.tile = 0; }).Validate(), ConfigError);
  EXPECT_THROW(ParseLatentMode("splat"), ConfigError);
  EXPECT_THROW(ParseTransformMode("fourier"), ConfigError);
  EXPECT_EQ(ParseTransformMode(TransformModeName(TransformMode::kFixedIdentity)),
            TransformMode::kFixedIdentity);
  EXPECT_EQ(ParseLatentMode(LatentModeName(LatentMode::kLowRankFactor)),
            LatentMode::kLowRankFactor);
}

TEST(RecoverTest, EmptyMaskThrows) {
  EXPECT_THROW(Recover(Tensor3(4, 4, 3), Mask3(4, 4, 3, false), TinyConfig(2, 2, 2)),
               ConfigError);
}

TEST(RecoverTest, UnconstrainedFitsExactly) {
  std::mt19937_64 rng(15);
  Tensor3 o = RandomTensor(6, 5, 4, rng);
  RecoveryConfig c = TinyConfig(1, 1, 4);
  c.latent_mode = LatentMode::kUnconstrained;
  c.transform_mode = TransformMode::kUnconstrained;
  c.max_iters = 3000;
  RecoveryResult r = Recover(o, Mask3(6, 5, 4, true), c);
  EXPECT_LT(r.report.trace.back().data_term, 1e-6);
}

TEST(RecoverTest, ReconstructionIsClampedAndReportComplete) {
  std::mt19937_64 rng(16);
  Tensor3 o = RandomTensor(12, 12, 4, rng);
  RecoveryConfig c = TinyConfig(16, 3, 2);
  c.max_iters = 50;
  c.lambda = 1e-3;
  c.reg_stride = 3;
  std::size_t calls = 0, checkpoints = 0;
  RecoverHooks hooks;
  hooks.on_iteration = [&](const IterRecord&) { ++calls; };
  hooks.checkpoint_every = 20;
  hooks.on_checkpoint = [&](const TrainingState& s) {
    ++checkpoints;
    EXPECT_EQ(s.iteration % 20, 0u);
  };
  hooks.truth = &o;
  RecoveryResult r = Recover(o, Mask3(12, 12, 4, true), c, hooks);
  EXPECT_EQ(r.report.iterations, 50u);
  EXPECT_EQ(r.report.trace.size(), 50u);
  EXPECT_EQ(calls, 50u);
  EXPECT_EQ(checkpoints, 2u);
  EXPECT_EQ(r.report.stop_reason, "max_iters");
  ASSERT_TRUE(r.report.metrics.has_value());
  for (double v : r.x_hat.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  for (const IterRecord& rec : r.report.trace) {
    EXPECT_GE(rec.data_term, 0.0);
    EXPECT_GE(rec.reg_term, 0.0);
  }
  // Off-stride iterations repeat the last evaluated regularizer.
  EXPECT_EQ(r.report.trace[1].reg_term, r.report.trace[0].reg_term);
  EXPECT_EQ(r.report.trace[2].reg_term, r.report.trace[0].reg_term);
  EXPECT_NE(r.report.trace[3].reg_term, r.report.trace[0].reg_term);
}

TEST(RecoverTest, Reproducible) {
  Tensor3 o = SynthLowTubalRank(10, 10, 5, 2, 3);
  Mask3 mask = RandomMask(10, 10, 5, 0.5, 4);
  RecoveryConfig c = TinyConfig(20, 3, 2);
  c.max_iters = 60;
  c.lambda = 1e-3;
  c.seed = 7;
  RecoveryResult a = Recover(o, mask, c), b = Recover(o, mask, c);
  EXPECT_EQ(a.x_hat, b.x_hat);
  EXPECT_EQ(a.state.model.Flatten(), b.state.model.Flatten());
  ASSERT_EQ(a.report.trace.size(), b.report.trace.size());
  for (std::size_t i = 0; i < a.report.trace.size(); ++i)
    EXPECT_EQ(a.report.trace[i].loss, b.report.trace[i].loss);
  c.seed = 8;
  EXPECT_NE(Recover(o, mask, c).x_hat, a.x_hat);
}

TEST(RecoverTest, PlateauStopsEarly) {
  Tensor3 o(4, 4, 3, 0.5);
  RecoveryConfig c = TinyConfig(1, 1, 3);
  c.latent_mode = LatentMode::kUnconstrained;
  c.transform_mode = TransformMode::kFixedIdentity;
  c.max_iters = 100000;
  c.plateau_window = 50;
  c.plateau_tol = 1e-3;
  RecoveryResult r = Recover(o, Mask3(4, 4, 3, true), c);
  EXPECT_TRUE(r.report.plateaued);
  EXPECT_EQ(r.report.stop_reason, "plateau");
  EXPECT_LT(r.report.iterations, 100000u);
}

TEST(RecoverTest, DivergenceIsReported) {
  std::mt19937_64 rng(17);
  Tensor3 o = RandomTensor(4, 4, 3, rng);
  RecoveryConfig c = TinyConfig(1, 1, 3);
  c.latent_mode = LatentMode::kUnconstrained;
  c.transform_mode = TransformMode::kUnconstrained;
  c.base_lr = 1e200;
  c.max_iters = 50;
  RecoveryResult r = Recover(o, Mask3(4, 4, 3, true), c);
  EXPECT_TRUE(r.report.diverged);
  EXPECT_NE(r.report.stop_reason.find("diverged"), std::string::npos);
  EXPECT_LT(r.report.iterations, 50u);

  c.lambda = 1e-2;
  RecoveryResult reg = Recover(o, Mask3(4, 4, 3, true), c);
  EXPECT_TRUE(reg.report.diverged);
  EXPECT_EQ(reg.report.stop_reason.rfind("diverged", 0), 0u) << reg.report.stop_reason;
}

TEST(RecoverTest, LossMedianDecreasesOverWindows) {
  Tensor3 o = SynthLowTubalRank(12, 12, 6, 2, 5);
  RecoveryConfig c = TinyConfig(36, 4, 2);
  c.max_iters = 1500;
  c.plateau_window = 0;
  RecoveryResult r = Recover(o, RandomMask(12, 12, 6, 0.5, 6), c);
  auto median = [&](std::size_t start) {
    std::vector<double> w;
    for (std::size_t i = start; i < start + 500; ++i) w.push_back(r.report.trace[i].loss);
    std::nth_element(w.begin(), w.begin() + 250, w.end());
    return w[250];
  };
  EXPECT_LT(median(500), median(0));
  EXPECT_LT(median(1000), median(500));
}

TEST(RecoverTest, ResumeContinuesBitIdentically) {
  Tensor3 o = SynthLowTubalRank(8, 8, 4, 2, 9);
  Mask3 mask = RandomMask(8, 8, 4, 0.6, 10);
  RecoveryConfig c = TinyConfig(12, 3, 2);
  c.lambda = 1e-3;
  c.max_iters = 80;
  RecoveryResult full = Recover(o, mask, c);
  RecoveryConfig half = c;
  half.max_iters = 30;
  RecoveryResult first = Recover(o, mask, half);
  RecoveryResult rest = Resume(o, mask, c, first.state);
  EXPECT_EQ(rest.x_hat, full.x_hat);
  EXPECT_EQ(rest.report.trace.size(), full.report.trace.size());
  EXPECT_EQ(rest.state.adam.m, full.state.adam.m);
}

}  // namespace
}  // namespace gslr

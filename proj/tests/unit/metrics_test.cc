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

#include <cmath>
#include <limits>
#include <random>

#include "gslr/error.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace gslr {
namespace {

using testing::RandomTensor;

TEST(PsnrTest, IdenticalIsInfinite) {
  std::mt19937_64 rng(1);
  Tensor3 x = RandomTensor(4, 5, 3, rng);
  EXPECT_EQ(Psnr(x, x), std::numeric_limits<double>::infinity());
}

TEST(PsnrTest, ConstantOffset) {
  EXPECT_EQ(Psnr(Tensor3(16, 16, 2, 0.5), Tensor3(16, 16, 2, 0.4)), 20.0);
  EXPECT_EQ(Psnr(Tensor3(6, 6, 3, 0.0), Tensor3(6, 6, 3, 0.1)), 20.0);
  EXPECT_NEAR(Psnr(Tensor3(6, 6, 2, 0.3), Tensor3(6, 6, 2, 0.4)), 20.0, 1e-12);
}

TEST(PsnrTest, MatchesLoop) {
  for (std::uint64_t seed = 2; seed < 7; ++seed) {
    std::mt19937_64 rng(seed);
    Tensor3 x = RandomTensor(7, 9, 4, rng), y = RandomTensor(7, 9, 4, rng);
    EXPECT_NEAR(Psnr(x, y), testing::NaivePsnr(x, y), 1e-10);
  }
}

TEST(PsnrTest, PerBand) {
  std::mt19937_64 rng(7);
  Tensor3 x = RandomTensor(5, 5, 3, rng), y = x;
  y(1, 1, 2) += 0.5;
  std::vector<double> p = PerBandPsnr(x, y);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_TRUE(std::isinf(p[0]));
  EXPECT_TRUE(std::isinf(p[1]));
  EXPECT_NEAR(p[2], 10.0 * std::log10(25.0 / 0.25), 1e-10);
}

TEST(PsnrTest, DecreasesWithNoise) {
  std::mt19937_64 rng(8);
  Tensor3 x = RandomTensor(16, 16, 3, rng);
  std::normal_distribution<double> n(0.0, 1.0);
  Tensor3 noise(16, 16, 3);
  for (double& v : noise.data()) v = n(rng);
  double prev = std::numeric_limits<double>::infinity();
  for (double amp : {0.01, 0.05, 0.2}) {
    const double p = Psnr(x, x + amp * noise);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(PsnrTest, ShapeMismatch) {
  EXPECT_THROW(Psnr(Tensor3(2, 2, 2), Tensor3(2, 2, 3)), DimensionError);
  EXPECT_THROW(Ssim(Tensor3(12, 12, 1), Tensor3(12, 13, 1)), DimensionError);
}

TEST(SsimTest, IdenticalIsOne) {
  std::mt19937_64 rng(9);
  Tensor3 x = RandomTensor(16, 14, 3, rng);
  EXPECT_EQ(Ssim(x, x), 1.0);
  EXPECT_EQ(Evaluate(x, x).ssim, 1.0);
}

TEST(SsimTest, ComplementIsSymmetricAndBelowOne) {
  std::mt19937_64 rng(10);
  Tensor3 x = RandomTensor(13, 17, 2, rng);
  Tensor3 y = Tensor3(13, 17, 2, 1.0) - x;
  EXPECT_LT(Ssim(x, y), 1.0);
  EXPECT_EQ(Ssim(x, y), Ssim(y, x));
}

TEST(SsimTest, MatchesDirectConvolution) {
  for (std::uint64_t seed = 11; seed < 14; ++seed) {
    std::mt19937_64 rng(seed);
    Tensor3 x = RandomTensor(16, 16, 1, rng), y = RandomTensor(16, 16, 1, rng);
    EXPECT_NEAR(Ssim(x, y), testing::NaiveSsim(x, y), 1e-8);
  }
  std::mt19937_64 rng(14);
  Tensor3 x = RandomTensor(12, 20, 3, rng);
  Tensor3 y = x + 0.1 * RandomTensor(12, 20, 3, rng);
  EXPECT_NEAR(Ssim(x, y), testing::NaiveSsim(x, y), 1e-8);
}

TEST(SsimTest, StaysInRange) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor3 x = RandomTensor(12, 12, 2, rng), y = RandomTensor(12, 12, 2, rng);
    const double s = Ssim(x, y);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(SsimTest, TooSmallIsConfigError) {
  EXPECT_THROW(Ssim(Tensor3(10, 10, 1), Tensor3(10, 10, 1)), ConfigError);
  EXPECT_NO_THROW(Ssim(Tensor3(11, 11, 1), Tensor3(11, 11, 1)));
}

TEST(EvaluateTest, Fields) {
  std::mt19937_64 rng(16);
  Tensor3 x = RandomTensor(12, 12, 3, rng), y = RandomTensor(12, 12, 3, rng);
  MetricReport r = Evaluate(x, y);
  EXPECT_EQ(r.psnr_db, Psnr(x, y));
  EXPECT_EQ(r.ssim, Ssim(x, y));
  EXPECT_EQ(r.per_band_psnr, PerBandPsnr(x, y));
}

}  // namespace
}  // namespace gslr

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

#include "gslr/linalg.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gslr/error.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace gslr {
namespace {

using testing::LoopMatMul;
using testing::OracleSingularValues;
using testing::RandomMatrix;
using testing::RandomOrthonormal;
using testing::WithSingularValues;

Matrix Diag(std::vector<double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Reconstruct(const SvdResult& r) {
  Matrix us = r.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t k = 0; k < r.s.size(); ++k) us(i, k) *= r.s[k];
  return LoopMatMul(us, r.v.Transposed());
}

double OrthogonalityDefect(const Matrix& q) {
  const Matrix g = LoopMatMul(q.Transposed(), q);
  return (g - Matrix::Identity(g.rows())).FrobeniusNorm();
}

void ExpectValidSvd(const Matrix& m) {
  SvdResult r = ThinSvd(m);
  const std::size_t p = std::min(m.rows(), m.cols());
  ASSERT_EQ(r.u.rows(), m.rows());
  ASSERT_EQ(r.u.cols(), p);
  ASSERT_EQ(r.v.rows(), m.cols());
  ASSERT_EQ(r.v.cols(), p);
  ASSERT_EQ(r.s.size(), p);
  EXPECT_LT((Reconstruct(r) - m).FrobeniusNorm() / std::max(1.0, m.FrobeniusNorm()),
            1e-10);
  EXPECT_LT(OrthogonalityDefect(r.u), 1e-10);
  EXPECT_LT(OrthogonalityDefect(r.v), 1e-10);
  for (std::size_t i = 0; i < p; ++i) {
    EXPECT_GE(r.s[i], 0.0);
    if (i > 0) EXPECT_GE(r.s[i - 1], r.s[i]);
  }
}

TEST(ThinSvdTest, Diagonal) {
  SvdResult r = ThinSvd(Diag({1.0, 3.0}));
  EXPECT_NEAR(r.s[0], 3.0, 1e-15);
  EXPECT_NEAR(r.s[1], 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r.u(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r.v(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r.u(0, 1)), 1.0, 1e-15);
}

TEST(ThinSvdTest, RankOne) {
  std::mt19937_64 rng(1);
  Matrix a = RandomMatrix(7, 1, rng), b = RandomMatrix(5, 1, rng);
  SvdResult r = ThinSvd(LoopMatMul(a, b.Transposed()));
  EXPECT_NEAR(r.s[0], a.FrobeniusNorm() * b.FrobeniusNorm(), 1e-12);
  for (std::size_t i = 1; i < r.s.size(); ++i) EXPECT_LT(r.s[i], 1e-12);
  ExpectValidSvd(LoopMatMul(a, b.Transposed()));
}

TEST(ThinSvdTest, RandomMatchesEigensolver) {
  std::mt19937_64 rng(2);
  for (auto [rows, cols] : {std::pair{20, 12}, std::pair{12, 20}, std::pair{9, 9}}) {
    Matrix m = RandomMatrix(rows, cols, rng);
    ExpectValidSvd(m);
    SvdResult r = ThinSvd(m);
    std::vector<double> want = OracleSingularValues(m);
    for (std::size_t i = 0; i < r.s.size(); ++i) EXPECT_NEAR(r.s[i], want[i], 1e-8);
  }
}

TEST(ThinSvdTest, DegenerateShapes) {
  ExpectValidSvd(Matrix(1, 1, -2.0));
  ExpectValidSvd(Matrix(6, 4));
  ExpectValidSvd(Matrix(1, 7, 1.0));
  std::mt19937_64 rng(3);
  // Rank deficient with repeated singular values.
  ExpectValidSvd(WithSingularValues(10, 8, {2.0, 2.0, 1.0}, rng));
  EXPECT_EQ(ThinSvd(Matrix(3, 3)).s, std::vector<double>(3, 0.0));
}

TEST(ThinSvdTest, NonFiniteInputThrows) {
  Matrix m(2, 2, 1.0);
  m(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ThinSvd(m), NumericalError);
}

TEST(ThinSvdTest, PropertyOverRandomShapes) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> dim(1, 16);
  for (int trial = 0; trial < 30; ++trial) ExpectValidSvd(RandomMatrix(dim(rng), dim(rng), rng));
}

TEST(NuclearNormTest, Examples) {
  EXPECT_NEAR(NuclearNorm(Diag({3.0, 1.0})), 4.0, 1e-14);
  EXPECT_EQ(NuclearNorm(Matrix(4, 3)), 0.0);
}

TEST(NuclearNormTest, MatchesEigensolverTrace) {
  std::mt19937_64 rng(5);
  Matrix m = RandomMatrix(10, 10, rng);
  double want = 0.0;
  for (double s : OracleSingularValues(m)) want += s;
  EXPECT_NEAR(NuclearNorm(m), want, 1e-8);
}

TEST(NuclearNormTest, BoundsByFrobenius) {
  std::mt19937_64 rng(6);
  Matrix full = RandomMatrix(6, 5, rng);
  EXPECT_GT(NuclearNorm(full), full.FrobeniusNorm());
  Matrix r1 = LoopMatMul(RandomMatrix(6, 1, rng), RandomMatrix(1, 5, rng));
  EXPECT_NEAR(NuclearNorm(r1), r1.FrobeniusNorm(), 1e-12);
}

TEST(NuclearNormTest, UnitaryInvariance) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix m = RandomMatrix(7, 5, rng);
    Matrix q1 = RandomOrthonormal(7, 7, rng), q2 = RandomOrthonormal(5, 5, rng);
    EXPECT_NEAR(NuclearNorm(LoopMatMul(LoopMatMul(q1, m), q2)), NuclearNorm(m), 1e-8);
  }
}

TEST(NuclearNormTest, TriangleInequality) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = RandomMatrix(6, 4, rng), b = RandomMatrix(6, 4, rng);
    EXPECT_LE(NuclearNorm(a + b), NuclearNorm(a) + NuclearNorm(b) + 1e-12);
  }
}

TEST(NuclearNormSubgradTest, FullRankDiagonal) {
  Matrix g = NuclearNormSubgrad(Diag({3.0, 1.0}), 0.0);
  EXPECT_LT((g - Matrix::Identity(2)).FrobeniusNorm(), 1e-14);
}

TEST(NuclearNormSubgradTest, Thresholding) {
  std::mt19937_64 rng(9);
  Matrix m = WithSingularValues(6, 5, {5.0, 1e-3, 1e-4}, rng);
  SvdResult r = ThinSvd(m);
  Matrix g = NuclearNormSubgrad(m, 1e-2);
  Matrix want(6, 5);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j) want(i, j) = r.u(i, 0) * r.v(j, 0);
  EXPECT_LT((g - want).FrobeniusNorm(), 1e-12);
  EXPECT_THROW(NuclearNormSubgrad(m, -1.0), ConfigError);
  EXPECT_EQ(NuclearNormSubgrad(Matrix(3, 3)).FrobeniusNorm(), 0.0);
}

TEST(NuclearNormSubgradTest, DirectionalDerivative) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix m = WithSingularValues(8, 8, {8, 7, 6, 5, 4, 3, 2, 1}, rng);
    Matrix d = RandomMatrix(8, 8, rng);
    const double h = 1e-6;
    const double numeric =
        (NuclearNorm(m + h * d) - NuclearNorm(m - h * d)) / (2.0 * h);
    const Matrix g = NuclearNormSubgrad(m);
    double analytic = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) analytic += g.data()[i] * d.data()[i];
    EXPECT_LT(testing::RelativeError(analytic, numeric), 1e-4);
  }
}

TEST(NuclearNormSubgradTest, OperatorNormAtMostOne) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix g = NuclearNormSubgrad(RandomMatrix(9, 6, rng));
    EXPECT_LE(ThinSvd(g).s[0], 1.0 + 1e-8);
  }
}

TEST(NuclearNormSubgradTest, SubgradientInequality) {
  // |Y|_* >= |X|_* + <G, Y - X> for every Y.
  std::mt19937_64 rng(12);
  Matrix x = RandomMatrix(5, 4, rng);
  NuclearNormEval e = NuclearNormWithSubgrad(x);
  EXPECT_NEAR(e.value, NuclearNorm(x), 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix y = RandomMatrix(5, 4, rng);
    double inner = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      inner += e.subgrad.data()[i] * (y.data()[i] - x.data()[i]);
    EXPECT_GE(NuclearNorm(y), e.value + inner - 1e-10);
  }
}

TEST(SingularValueThresholdTest, ShrinksSpectrum) {
  std::mt19937_64 rng(13);
  Matrix m = WithSingularValues(7, 6, {4.0, 2.0, 0.5}, rng);
  SvdResult r = ThinSvd(SingularValueThreshold(m, 1.0));
  EXPECT_NEAR(r.s[0], 3.0, 1e-10);
  EXPECT_NEAR(r.s[1], 1.0, 1e-10);
  EXPECT_LT(r.s[2], 1e-10);
  EXPECT_LT((SingularValueThreshold(m, 0.0) - m).FrobeniusNorm(), 1e-12);
}

}  // namespace
}  // namespace gslr

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

#include "gslr/tensor.h"

#include <algorithm>
#include <random>
#include <vector>

#include "gslr/error.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace gslr {
namespace {

using testing::LoopMode3Product;
using testing::MaxAbsDiff;
using testing::RandomMatrix;
using testing::RandomTensor;

TEST(Unfold3Test, SingleEntry) {
  Tensor3 t(1, 1, 1, 5.0);
  Matrix m = Unfold3(t);
  ASSERT_EQ(m.rows(), 1u);
  ASSERT_EQ(m.cols(), 1u);
  EXPECT_EQ(m(0, 0), 5.0);
}

TEST(Unfold3Test, ConstantSlicesGiveConstantRows) {
  Tensor3 t(2, 2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) t(i, j, k) = static_cast<double>(k);
  Matrix m = Unfold3(t);
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 4u);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(m(k, c), static_cast<double>(k));
}

TEST(Unfold3Test, MatchesIndexFormula) {
  std::mt19937_64 rng(1);
  Tensor3 t = RandomTensor(3, 4, 2, rng);
  Matrix m = Unfold3(t);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(m(k, i * 4 + j), t(i, j, k));
}

TEST(Fold3Test, RoundTrip) {
  std::mt19937_64 rng(2);
  Tensor3 t = RandomTensor(4, 3, 5, rng);
  EXPECT_EQ(Fold3(Unfold3(t), 4, 3), t);
}

TEST(Fold3Test, MatchesIndexFormula) {
  std::mt19937_64 rng(3);
  Matrix m = RandomMatrix(2, 6, rng);
  Tensor3 t = Fold3(m, 2, 3);
  ASSERT_EQ(t.h(), 2u);
  ASSERT_EQ(t.w(), 3u);
  ASSERT_EQ(t.b(), 2u);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(t(i, j, k), m(k, i * 3 + j));
}

TEST(Fold3Test, SingleEntry) {
  Tensor3 t = Fold3(Matrix(1, 1, 7.0), 1, 1);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t(0, 0, 0), 7.0);
}

TEST(Fold3Test, ShapeMismatchThrows) {
  EXPECT_THROW(Fold3(Matrix(2, 5), 2, 3), DimensionError);
}

TEST(Fold3Test, RoundTripProperty) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t h = dim(rng), w = dim(rng), b = dim(rng);
    Tensor3 t = RandomTensor(h, w, b, rng, -1.0, 1.0);
    EXPECT_EQ(Fold3(Unfold3(t), h, w), t);
    Matrix m = RandomMatrix(b, h * w, rng);
    EXPECT_EQ(Unfold3(Fold3(m, h, w)), m);
  }
}

TEST(Mode3ProductTest, IdentityIsExact) {
  std::mt19937_64 rng(5);
  Tensor3 a = RandomTensor(3, 4, 5, rng);
  EXPECT_EQ(Mode3Product(a, Matrix::Identity(5)), a);
}

TEST(Mode3ProductTest, OnesSumToDepth) {
  Tensor3 a(2, 2, 3, 1.0);
  Tensor3 x = Mode3Product(a, Matrix(4, 3, 1.0));
  ASSERT_EQ(x.b(), 4u);
  for (double v : x.data()) EXPECT_EQ(v, 3.0);
}

TEST(Mode3ProductTest, MatchesTripleLoop) {
  std::mt19937_64 rng(6);
  Tensor3 a = RandomTensor(5, 4, 3, rng, -1.0, 1.0);
  Matrix t = RandomMatrix(6, 3, rng);
  Tensor3 x = Mode3Product(a, t);
  EXPECT_LT(MaxAbsDiff(x.data(), LoopMode3Product(a, t).data()), 1e-12);
  EXPECT_LT(MaxAbsDiff(x.data(), Fold3(t * Unfold3(a), 5, 4).data()), 1e-12);
}

TEST(Mode3ProductTest, InnerDimensionMismatchThrows) {
  EXPECT_THROW(Mode3Product(Tensor3(2, 2, 3), Matrix(4, 2)), DimensionError);
}

TEST(Mode3ProductTest, BilinearProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor3 a1 = RandomTensor(4, 3, 2, rng, -1.0, 1.0);
    Tensor3 a2 = RandomTensor(4, 3, 2, rng, -1.0, 1.0);
    Matrix t1 = RandomMatrix(5, 2, rng);
    Matrix t2 = RandomMatrix(5, 2, rng);
    EXPECT_LT(MaxAbsDiff(Mode3Product(a1 + a2, t1).data(),
                         (Mode3Product(a1, t1) + Mode3Product(a2, t1)).data()),
              1e-12);
    EXPECT_LT(MaxAbsDiff(Mode3Product(a1, t1 + t2).data(),
                         (Mode3Product(a1, t1) + Mode3Product(a1, t2)).data()),
              1e-12);
  }
}

TEST(MaskedSquaredErrorTest, PerfectFitIsZero) {
  std::mt19937_64 rng(8);
  Tensor3 o = RandomTensor(3, 3, 3, rng);
  EXPECT_EQ(MaskedSquaredError(o, o, Mask3(3, 3, 3, true)), 0.0);
}

TEST(MaskedSquaredErrorTest, SingleEntry) {
  Tensor3 o(2, 2, 2), x(2, 2, 2);
  o(1, 0, 1) = 2.0;
  EXPECT_EQ(MaskedSquaredError(o, x, Mask3(2, 2, 2, true)), 4.0);
}

TEST(MaskedSquaredErrorTest, EmptyMaskIsZero) {
  Tensor3 o(2, 2, 2, 1.0), x(2, 2, 2, -1.0);
  EXPECT_EQ(MaskedSquaredError(o, x, Mask3(2, 2, 2, false)), 0.0);
}

TEST(MaskedSquaredErrorTest, MatchesLoop) {
  std::mt19937_64 rng(9);
  Tensor3 o = RandomTensor(6, 5, 4, rng), x = RandomTensor(6, 5, 4, rng);
  Mask3 m = testing::RandomBernoulliMask(6, 5, 4, 0.5, rng);
  double want = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        if (m(i, j, k)) want += (o(i, j, k) - x(i, j, k)) * (o(i, j, k) - x(i, j, k));
  EXPECT_NEAR(MaskedSquaredError(o, x, m), want, 1e-12);
}

TEST(MaskedSquaredErrorTest, ShapeMismatchThrows) {
  EXPECT_THROW(MaskedSquaredError(Tensor3(2, 2, 2), Tensor3(2, 2, 3),
                                  Mask3(2, 2, 2, true)),
               DimensionError);
  EXPECT_THROW(MaskedSquaredError(Tensor3(2, 2, 2), Tensor3(2, 2, 2),
                                  Mask3(2, 3, 2, true)),
               DimensionError);
}

TEST(MaskedSquaredErrorTest, MonotoneInMask) {
  std::mt19937_64 rng(10);
  Tensor3 o = RandomTensor(4, 4, 3, rng), x = RandomTensor(4, 4, 3, rng);
  Mask3 m(4, 4, 3, false);
  std::vector<std::size_t> order(m.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  double prev = 0.0;
  for (std::size_t idx : order) {
    m.set_flat(idx, true);
    const double cur = MaskedSquaredError(o, x, m);
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(Mask3Test, SamplingRate) {
  Mask3 m(2, 2, 2);
  EXPECT_EQ(m.sampling_rate(), 0.0);
  m.set(0, 1, 1, true);
  m.set(1, 1, 0, true);
  EXPECT_EQ(m.count(), 2u);
  EXPECT_DOUBLE_EQ(m.sampling_rate(), 0.25);
  EXPECT_EQ(Mask3::FromTensor(m.ToTensor()), m);
}

TEST(Tensor3Test, OffsetIsSliceMajor) {
  Tensor3 t(2, 3, 4);
  EXPECT_EQ(t.offset(1, 2, 3), (3u * 2 + 1) * 3 + 2);
  t(1, 2, 3) = 9.0;
  EXPECT_EQ(t.slice(3)[5], 9.0);
  EXPECT_EQ(t.SliceMatrix(3)(1, 2), 9.0);
}

TEST(Tensor3Test, DataLengthChecked) {
  EXPECT_THROW(Tensor3(2, 2, 2, std::vector<double>(7)), DimensionError);
  EXPECT_THROW(Matrix(2, 2, std::vector<double>(3)), DimensionError);
}

TEST(MatrixTest, ProductMatchesLoop) {
  std::mt19937_64 rng(11);
  Matrix a = RandomMatrix(4, 3, rng), b = RandomMatrix(3, 5, rng);
  EXPECT_LT(MaxAbsDiff((a * b).data(), testing::LoopMatMul(a, b).data()), 1e-14);
  EXPECT_THROW(a * a, DimensionError);
}

}  // namespace
}  // namespace gslr

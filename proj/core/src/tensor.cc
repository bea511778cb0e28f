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
#include <cmath>
#include <string>

#include "gslr/error.h"

namespace gslr {

namespace {

std::string ShapeString(std::size_t h, std::size_t w, std::size_t b) {
  return std::to_string(h) + "x" + std::to_string(w) + "x" + std::to_string(b);
}

void RequireSameShape(const Tensor3& a, const Tensor3& b, const char* what) {
  if (!a.SameShape(b)) {
    throw DimensionError(std::string(what) + ": shape " +
                         ShapeString(a.h(), a.w(), a.b()) + " vs " +
                         ShapeString(b.h(), b.w(), b.b()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                         " != " + std::to_string(rows * cols));
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::FrobeniusNorm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("Matrix product: inner dimensions " +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double s = a(i, l);
      if (s == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += s * b(l, j);
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("Matrix sum: shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("Matrix difference: shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

Tensor3::Tensor3(std::size_t h, std::size_t w, std::size_t b, double fill)
    : h_(h), w_(w), b_(b), data_(h * w * b, fill) {}

Tensor3::Tensor3(std::size_t h, std::size_t w, std::size_t b,
                 std::vector<double> data)
    : h_(h), w_(w), b_(b), data_(std::move(data)) {
  if (data_.size() != h * w * b) {
    throw DimensionError("Tensor3: data length " +
                         std::to_string(data_.size()) + " != " +
                         ShapeString(h, w, b));
  }
}

Matrix Tensor3::SliceMatrix(std::size_t k) const {
  auto s = slice(k);
  return Matrix(h_, w_, std::vector<double>(s.begin(), s.end()));
}

double Tensor3::FrobeniusNorm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Tensor3::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Tensor3 operator+(const Tensor3& a, const Tensor3& b) {
  RequireSameShape(a, b, "Tensor3 sum");
  Tensor3 c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Tensor3 operator-(const Tensor3& a, const Tensor3& b) {
  RequireSameShape(a, b, "Tensor3 difference");
  Tensor3 c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

Tensor3 operator*(double s, const Tensor3& a) {
  Tensor3 c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

Mask3::Mask3(std::size_t h, std::size_t w, std::size_t b, bool fill)
    : h_(h), w_(w), b_(b), bits_(h * w * b, fill ? 1 : 0) {}

std::size_t Mask3::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

double Mask3::sampling_rate() const {
  if (bits_.empty()) return 0.0;
  return static_cast<double>(count()) / static_cast<double>(bits_.size());
}

Tensor3 Mask3::ToTensor() const {
  Tensor3 t(h_, w_, b_);
  for (std::size_t i = 0; i < bits_.size(); ++i) t.data()[i] = bits_[i];
  return t;
}

Mask3 Mask3::FromTensor(const Tensor3& t) {
  Mask3 m(t.h(), t.w(), t.b());
  for (std::size_t i = 0; i < t.size(); ++i) m.bits_[i] = t.data()[i] > 0.5;
  return m;
}

Matrix Unfold3(const Tensor3& t) {
  auto d = t.data();
  return Matrix(t.b(), t.h() * t.w(), std::vector<double>(d.begin(), d.end()));
}

Tensor3 Fold3(const Matrix& m, std::size_t h, std::size_t w) {
  if (m.cols() != h * w) {
    throw DimensionError("Fold3: matrix has " + std::to_string(m.cols()) +
                         " columns, expected h*w = " + std::to_string(h * w));
  }
  auto d = m.data();
  return Tensor3(h, w, m.rows(), std::vector<double>(d.begin(), d.end()));
}

Tensor3 Mode3Product(const Tensor3& a, const Matrix& t) {
  if (a.b() != t.cols()) {
    throw DimensionError("Mode3Product: tensor depth " + std::to_string(a.b()) +
                         " vs matrix columns " + std::to_string(t.cols()));
  }
  Tensor3 out(a.h(), a.w(), t.rows());
  const std::size_t n = a.slice_size();
  for (std::size_t k = 0; k < t.rows(); ++k) {
    auto dst = out.slice(k);
    for (std::size_t r = 0; r < t.cols(); ++r) {
      const double s = t(k, r);
      auto src = a.slice(r);
      for (std::size_t p = 0; p < n; ++p) dst[p] += s * src[p];
    }
  }
  return out;
}

double MaskedSquaredError(const Tensor3& o, const Tensor3& x, const Mask3& m) {
  RequireSameShape(o, x, "MaskedSquaredError");
  if (!m.SameShape(o)) throw DimensionError("MaskedSquaredError: mask shape");
  double s = 0.0;
  auto od = o.data();
  auto xd = x.data();
  for (std::size_t p = 0; p < od.size(); ++p) {
    if (!m.at(p)) continue;
    const double d = od[p] - xd[p];
    s += d * d;
  }
  return s;
}

}  // namespace gslr

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

#ifndef GSLR_TENSOR_H_
#define GSLR_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace gslr {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Matrix Transposed() const;
  double FrobeniusNorm() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

// Third-order tensor of shape h x w x b.
//
// Storage is k-major: entry (i, j, k) lives at offset k*h*w + i*w + j, so each
// frontal slice (:, :, k) is a contiguous row-major h x w block and the mode-3
// unfolding is a pure reshape. File formats rely on this order.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t h, std::size_t w, std::size_t b, double fill = 0.0);
  Tensor3(std::size_t h, std::size_t w, std::size_t b, std::vector<double> data);

  std::size_t h() const { return h_; }
  std::size_t w() const { return w_; }
  std::size_t b() const { return b_; }
  std::size_t size() const { return data_.size(); }
  std::size_t slice_size() const { return h_ * w_; }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const {
    return (k * h_ + i) * w_ + j;
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[offset(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[offset(i, j, k)];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  // Frontal slice k as a contiguous h*w view.
  std::span<double> slice(std::size_t k) {
    return std::span<double>(data_).subspan(k * h_ * w_, h_ * w_);
  }
  std::span<const double> slice(std::size_t k) const {
    return std::span<const double>(data_).subspan(k * h_ * w_, h_ * w_);
  }
  Matrix SliceMatrix(std::size_t k) const;

  bool SameShape(const Tensor3& o) const {
    return h_ == o.h_ && w_ == o.w_ && b_ == o.b_;
  }
  double FrobeniusNorm() const;
  bool AllFinite() const;

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t h_ = 0;
  std::size_t w_ = 0;
  std::size_t b_ = 0;
  std::vector<double> data_;
};

Tensor3 operator+(const Tensor3& a, const Tensor3& b);
Tensor3 operator-(const Tensor3& a, const Tensor3& b);
Tensor3 operator*(double s, const Tensor3& a);

// Binary observation mask; same index order as Tensor3.
class Mask3 {
 public:
  Mask3() = default;
  Mask3(std::size_t h, std::size_t w, std::size_t b, bool fill = false);

  std::size_t h() const { return h_; }
  std::size_t w() const { return w_; }
  std::size_t b() const { return b_; }
  std::size_t size() const { return bits_.size(); }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const {
    return (k * h_ + i) * w_ + j;
  }
  bool operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return bits_[offset(i, j, k)] != 0;
  }
  void set(std::size_t i, std::size_t j, std::size_t k, bool v) {
    bits_[offset(i, j, k)] = v ? 1 : 0;
  }
  bool at(std::size_t flat) const { return bits_[flat] != 0; }
  void set_flat(std::size_t flat, bool v) { bits_[flat] = v ? 1 : 0; }

  std::size_t count() const;
  double sampling_rate() const;

  bool SameShape(const Tensor3& t) const {
    return h_ == t.h() && w_ == t.w() && b_ == t.b();
  }

  // 0/1 tensor for export.
  Tensor3 ToTensor() const;
  // Entries > 0.5 become observed.
  static Mask3 FromTensor(const Tensor3& t);

  bool operator==(const Mask3&) const = default;

 private:
  std::size_t h_ = 0;
  std::size_t w_ = 0;
  std::size_t b_ = 0;
  std::vector<unsigned char> bits_;
};

// Mode-3 unfolding: result(k, i*w + j) == t(i, j, k).
Matrix Unfold3(const Tensor3& t);

// Inverse of Unfold3. Throws DimensionError unless m.cols() == h*w.
Tensor3 Fold3(const Matrix& m, std::size_t h, std::size_t w);

// result(i, j, k) = sum_r t(k, r) * a(i, j, r). Requires a.b() == t.cols().
Tensor3 Mode3Product(const Tensor3& a, const Matrix& t);

// Sum over observed entries of (o - x)^2.
double MaskedSquaredError(const Tensor3& o, const Tensor3& x, const Mask3& m);

}  // namespace gslr

#endif  // GSLR_TENSOR_H_

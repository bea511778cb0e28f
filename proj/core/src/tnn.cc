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

#include "gslr/tnn.h"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gslr/error.h"

namespace gslr {

namespace {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Mode-3 application of a b x b complex matrix given by (re, im), optionally
// conjugate-transposed.
ComplexTensor3 ApplyAlongMode3(const ComplexTensor3& in, const DftMatrix& f,
                               bool adjoint) {
  ComplexTensor3 out(in.h, in.w, in.b);
  const std::size_t n = in.h * in.w;
  for (std::size_t k = 0; k < in.b; ++k) {
    Complex* dst = &out.data[k * n];
    for (std::size_t z = 0; z < in.b; ++z) {
      const Complex c = adjoint ? std::conj(Complex(f.re(z, k), f.im(z, k)))
                                : Complex(f.re(k, z), f.im(k, z));
      const Complex* src = &in.data[z * n];
      for (std::size_t p = 0; p < n; ++p) dst[p] += c * src[p];
    }
  }
  return out;
}

// Soft-thresholds one h x w complex slice in place.
void SvtSlice(Complex* slice, std::size_t h, std::size_t w, double tau) {
  Eigen::Map<ComplexMatrix> m(slice, static_cast<Eigen::Index>(h),
                              static_cast<Eigen::Index>(w));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::max(0.0, s[i] - tau);
  m = svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace

DftMatrix MakeDftMatrix(std::size_t b) {
  DftMatrix f{Matrix(b, b), Matrix(b, b)};
  const double scale = 1.0 / std::sqrt(static_cast<double>(b));
  for (std::size_t k = 0; k < b; ++k) {
    for (std::size_t z = 0; z < b; ++z) {
      // Reduce the exponent mod b first so large products stay exact.
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>((k * z) % b) /
                           static_cast<double>(b);
      f.re(k, z) = scale * std::cos(angle);
      f.im(k, z) = scale * std::sin(angle);
    }
  }
  return f;
}

ComplexTensor3 DftMode3(const Tensor3& t) {
  ComplexTensor3 c(t.h(), t.w(), t.b());
  for (std::size_t p = 0; p < t.size(); ++p) c.data[p] = t.data()[p];
  return ApplyAlongMode3(c, MakeDftMatrix(t.b()), false);
}

ComplexTensor3 IdftMode3(const ComplexTensor3& t) {
  return ApplyAlongMode3(t, MakeDftMatrix(t.b), true);
}

Tensor3 RealPart(const ComplexTensor3& t, double* max_imag) {
  Tensor3 out(t.h, t.w, t.b);
  double worst = 0.0;
  for (std::size_t p = 0; p < t.data.size(); ++p) {
    out.data()[p] = t.data[p].real();
    worst = std::max(worst, std::abs(t.data[p].imag()));
  }
  if (max_imag != nullptr) *max_imag = worst;
  return out;
}

Tensor3 TensorSvt(const Tensor3& t, double tau, double* max_imag) {
  if (tau < 0.0) throw ConfigError("TensorSvt: tau must be >= 0");
  ComplexTensor3 f = DftMode3(t);
  const std::size_t b = t.b();
  const std::size_t n = t.h() * t.w();
  // Slices f and b-f are conjugates for real input; shrink one of each pair.
  for (std::size_t k = 0; k <= b / 2; ++k) {
    SvtSlice(&f.data[k * n], t.h(), t.w(), tau);
    const std::size_t mirror = (b - k) % b;
    if (mirror != k) {
      for (std::size_t p = 0; p < n; ++p)
        f.data[mirror * n + p] = std::conj(f.data[k * n + p]);
    }
  }
  // The DC slice (and the Nyquist slice for even b) is real up to rounding.
  return RealPart(IdftMode3(f), max_imag);
}

double TensorNuclearNorm(const Tensor3& t) {
  ComplexTensor3 f = DftMode3(t);
  const std::size_t n = t.h() * t.w();
  double total = 0.0;
  for (std::size_t k = 0; k < t.b(); ++k) {
    Eigen::Map<ComplexMatrix> m(&f.data[k * n], static_cast<Eigen::Index>(t.h()),
                                static_cast<Eigen::Index>(t.w()));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    total += svd.singularValues().sum();
  }
  return total;
}

AdmmState TnnSolve(const Tensor3& o, const Mask3& mask, double rho,
                   std::size_t iters) {
  if (!mask.SameShape(o)) throw DimensionError("TnnSolve: mask shape mismatch");
  if (mask.count() == 0) throw ConfigError("TnnSolve: mask has no observed entries");
  if (!(rho > 0.0)) throw ConfigError("TnnSolve: rho must be > 0");

  AdmmState st;
  st.rho = rho;
  st.x = Tensor3(o.h(), o.w(), o.b());
  for (std::size_t p = 0; p < o.size(); ++p)
    if (mask.at(p)) st.x.data()[p] = o.data()[p];
  st.z = Tensor3(o.h(), o.w(), o.b());
  st.y = Tensor3(o.h(), o.w(), o.b());

  Tensor3 shifted(o.h(), o.w(), o.b());
  for (st.iter = 0; st.iter < iters; ++st.iter) {
    for (std::size_t p = 0; p < o.size(); ++p)
      shifted.data()[p] = st.x.data()[p] + st.y.data()[p] / rho;
    double imag = 0.0;
    st.z = TensorSvt(shifted, 1.0 / rho, &imag);
    st.max_imag = std::max(st.max_imag, imag);
    for (std::size_t p = 0; p < o.size(); ++p) {
      st.x.data()[p] =
          mask.at(p) ? o.data()[p] : st.z.data()[p] - st.y.data()[p] / rho;
      st.y.data()[p] += rho * (st.x.data()[p] - st.z.data()[p]);
    }
  }
  return st;
}

}  // namespace gslr

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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gslr/error.h"

namespace gslr {

namespace {

inline double Dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void Rotate(double* a, double* b, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a[i];
    const double y = b[i];
    a[i] = c * x - s * y;
    b[i] = s * x + c * y;
  }
}

// Decomposes a tall (rows >= cols) matrix given column-major in g.
// On return g holds u * diag(s) column-major and vt holds v column-major.
void JacobiTall(std::vector<double>& g, std::size_t rows, std::size_t cols,
                std::vector<double>& v, double fro) {
  v.assign(cols * cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) v[i * cols + i] = 1.0;
  if (cols < 2) return;

  const double rel_tol =
      std::sqrt(static_cast<double>(rows)) * std::numeric_limits<double>::epsilon();
  const double abs_tol = (1e-12 * fro) * (1e-12 * fro);
  std::vector<double> norms(cols);
  for (std::size_t i = 0; i < cols; ++i)
    norms[i] = Dot(&g[i * rows], &g[i * rows], rows);

  double worst = 0.0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    worst = 0.0;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double* gp = &g[p * rows];
        double* gq = &g[q * rows];
        const double alpha = norms[p];
        const double beta = norms[q];
        const double gamma = Dot(gp, gq, rows);
        const double scale = std::sqrt(alpha * beta);
        if (std::abs(gamma) <= std::max(rel_tol * scale, abs_tol)) continue;
        worst = std::max(worst, std::abs(gamma) / scale);
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        Rotate(gp, gq, rows, c, s);
        Rotate(&v[p * cols], &v[q * cols], cols, c, s);
        // Exact updates drift; recompute from the rotated columns.
        norms[p] = Dot(gp, gp, rows);
        norms[q] = Dot(gq, gq, rows);
      }
    }
    if (!rotated) return;
  }
  std::ostringstream msg;
  msg << "ThinSvd: no convergence after " << kMaxJacobiSweeps << " sweeps ("
      << rows << "x" << cols << ", worst column cosine " << worst << ")";
  throw NumericalError(msg.str());
}

// Orthonormalizes u's columns (column-major, rows x p) in place, replacing
// columns whose singular value is negligible with a completion of the basis.
void OrthonormalizeColumns(std::vector<double>& u, std::size_t rows,
                           std::size_t p, const std::vector<double>& s) {
  const double smax = s.empty() ? 0.0 : s.front();
  const double negligible = static_cast<double>(std::max(rows, p)) *
                            std::numeric_limits<double>::epsilon() * smax;
  std::size_t next_basis = 0;
  auto project_out = [&](double* x, std::size_t upto) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < upto; ++c) {
        const double* uc = &u[c * rows];
        const double d = Dot(uc, x, rows);
        for (std::size_t i = 0; i < rows; ++i) x[i] -= d * uc[i];
      }
    }
  };
  for (std::size_t c = 0; c < p; ++c) {
    double* x = &u[c * rows];
    if (s[c] > negligible && s[c] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) x[i] /= s[c];
      project_out(x, c);
      const double nrm = std::sqrt(Dot(x, x, rows));
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) x[i] /= nrm;
        continue;
      }
    }
    // Complete with the first standard basis vector that survives projection.
    for (; next_basis < rows; ++next_basis) {
      std::fill(x, x + rows, 0.0);
      x[next_basis] = 1.0;
      project_out(x, c);
      const double nrm = std::sqrt(Dot(x, x, rows));
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) x[i] /= nrm;
        ++next_basis;
        break;
      }
    }
  }
}

}  // namespace

SvdResult ThinSvd(const Matrix& m) {
  for (double x : m.data()) {
    if (!std::isfinite(x)) throw NumericalError("ThinSvd: non-finite input");
  }
  const bool transpose = m.rows() < m.cols();
  const std::size_t rows = transpose ? m.cols() : m.rows();
  const std::size_t cols = transpose ? m.rows() : m.cols();
  const double fro = m.FrobeniusNorm();

  // Column-major copy of the tall orientation.
  std::vector<double> g(rows * cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t i = 0; i < rows; ++i)
      g[c * rows + i] = transpose ? m(c, i) : m(i, c);

  std::vector<double> v;
  JacobiTall(g, rows, cols, v, fro);

  std::vector<double> sv(cols);
  for (std::size_t c = 0; c < cols; ++c)
    sv[c] = std::sqrt(Dot(&g[c * rows], &g[c * rows], rows));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

  std::vector<double> us(rows * cols), vs(cols * cols), s(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t src = order[c];
    s[c] = sv[src];
    std::copy_n(&g[src * rows], rows, &us[c * rows]);
    std::copy_n(&v[src * cols], cols, &vs[c * cols]);
  }
  OrthonormalizeColumns(us, rows, cols, s);

  Matrix u_tall(rows, cols), v_tall(cols, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t i = 0; i < rows; ++i) u_tall(i, c) = us[c * rows + i];
    for (std::size_t i = 0; i < cols; ++i) v_tall(i, c) = vs[c * cols + i];
  }
  SvdResult out;
  out.s = std::move(s);
  if (transpose) {
    out.u = std::move(v_tall);
    out.v = std::move(u_tall);
  } else {
    out.u = std::move(u_tall);
    out.v = std::move(v_tall);
  }
  return out;
}

double NuclearNorm(const Matrix& m) {
  const SvdResult svd = ThinSvd(m);
  return std::accumulate(svd.s.begin(), svd.s.end(), 0.0);
}

NuclearNormEval NuclearNormWithSubgrad(const Matrix& m, double tol) {
  if (tol < 0.0) throw ConfigError("NuclearNormSubgrad: tol must be >= 0");
  const SvdResult svd = ThinSvd(m);
  NuclearNormEval out;
  out.value = std::accumulate(svd.s.begin(), svd.s.end(), 0.0);
  out.subgrad = Matrix(m.rows(), m.cols());
  if (svd.s.empty() || svd.s.front() == 0.0) return out;
  const double cut = tol * svd.s.front();
  for (std::size_t c = 0; c < svd.s.size(); ++c) {
    if (!(svd.s[c] > cut)) break;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double ui = svd.u(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j)
        out.subgrad(i, j) += ui * svd.v(j, c);
    }
  }
  return out;
}

Matrix NuclearNormSubgrad(const Matrix& m, double tol) {
  return NuclearNormWithSubgrad(m, tol).subgrad;
}

Matrix SingularValueThreshold(const Matrix& m, double tau) {
  const SvdResult svd = ThinSvd(m);
  Matrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < svd.s.size(); ++c) {
    const double shrunk = svd.s[c] - tau;
    if (!(shrunk > 0.0)) break;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double ui = shrunk * svd.u(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) += ui * svd.v(j, c);
    }
  }
  return out;
}

}  // namespace gslr

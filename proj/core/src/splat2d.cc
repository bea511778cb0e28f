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

#include "gslr/splat2d.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gslr/error.h"

namespace gslr {

namespace {

// Per-primitive quantities shared by forward and backward passes.
struct Prepared {
  double mx, my;
  double inv11, l21, inv22;
  double ext_x, ext_y;  // bounding-box half extents at the cutoff radius
};

std::vector<Prepared> Prepare(const Gaussian2DField& f, double cutoff) {
  std::vector<Prepared> out(f.n);
  for (std::size_t j = 0; j < f.n; ++j) {
    const double l11 = std::exp(f.cov_raw[3 * j]);
    const double l21 = f.cov_raw[3 * j + 1];
    const double l22 = std::exp(f.cov_raw[3 * j + 2]);
    Prepared& p = out[j];
    p.mx = f.pos[2 * j];
    p.my = f.pos[2 * j + 1];
    p.inv11 = 1.0 / l11;
    p.l21 = l21;
    p.inv22 = 1.0 / l22;
    p.ext_x = cutoff * l11;
    p.ext_y = cutoff * std::sqrt(l21 * l21 + l22 * l22);
  }
  return out;
}

struct Tile {
  std::size_t i0, i1, j0, j1;
  std::vector<std::size_t> ids;
};

// Conservative assignment of primitives to tiles by bounding box; the exact
// per-pixel Mahalanobis test happens during the pixel loop.
std::vector<Tile> BuildTiles(const std::vector<Prepared>& prims, std::size_t h,
                             std::size_t w, const RenderConfig2D& cfg) {
  if (cfg.naive_mode) {
    Tile t{0, h, 0, w, {}};
    t.ids.resize(prims.size());
    for (std::size_t j = 0; j < prims.size(); ++j) t.ids[j] = j;
    return {std::move(t)};
  }
  const std::size_t ts = cfg.tile;
  const std::size_t tr = (h + ts - 1) / ts;
  const std::size_t tc = (w + ts - 1) / ts;
  std::vector<Tile> tiles(tr * tc);
  for (std::size_t a = 0; a < tr; ++a) {
    for (std::size_t b = 0; b < tc; ++b) {
      Tile& t = tiles[a * tc + b];
      t.i0 = a * ts;
      t.i1 = std::min(h, t.i0 + ts);
      t.j0 = b * ts;
      t.j1 = std::min(w, t.j0 + ts);
    }
  }
  for (std::size_t j = 0; j < prims.size(); ++j) {
    const Prepared& p = prims[j];
    const double lo_x = p.mx - p.ext_x, hi_x = p.mx + p.ext_x;
    const double lo_y = p.my - p.ext_y, hi_y = p.my + p.ext_y;
    if (hi_x < 0.0 || hi_y < 0.0) continue;
    if (lo_x > static_cast<double>(h - 1) || lo_y > static_cast<double>(w - 1))
      continue;
    // Tile index ranges intersecting the box; infinite extents cover all.
    auto first = [ts](double lo) -> std::size_t {
      if (!(lo > 0.0)) return 0;
      return static_cast<std::size_t>(std::ceil(lo)) / ts;
    };
    auto last = [ts](double hi, std::size_t n_tiles) -> std::size_t {
      const double limit = static_cast<double>(n_tiles * ts);
      if (!(hi < limit)) return n_tiles - 1;
      return std::min(n_tiles - 1, static_cast<std::size_t>(std::floor(hi)) / ts);
    };
    const std::size_t a0 = first(lo_x), a1 = last(hi_x, tr);
    const std::size_t b0 = first(lo_y), b1 = last(hi_y, tc);
    for (std::size_t a = a0; a <= a1; ++a)
      for (std::size_t b = b0; b <= b1; ++b) tiles[a * tc + b].ids.push_back(j);
  }
  return tiles;
}

struct Kernel {
  double u1, u2;
  double weight;
  bool clamped;
};

// Returns false when the pixel lies outside the primitive's cutoff radius.
inline bool Evaluate(const Prepared& p, double x, double y, double cutoff_sq,
                     bool cull, Kernel& k) {
  const double dx = x - p.mx;
  const double dy = y - p.my;
  k.u1 = dx * p.inv11;
  k.u2 = (dy - p.l21 * k.u1) * p.inv22;
  const double d2 = k.u1 * k.u1 + k.u2 * k.u2;
  if (cull && d2 > cutoff_sq) return false;
  const double e = -0.5 * d2;
  k.clamped = e < kMinExponent;
  k.weight = std::exp(k.clamped ? kMinExponent : e);
  return true;
}

void CheckInputs(const Gaussian2DField& field, std::size_t h, std::size_t w,
                 const RenderConfig2D& cfg) {
  if (h == 0 || w == 0) throw DimensionError("Render2D: empty grid");
  field.Validate();
  cfg.Validate();
}

}  // namespace

void Gaussian2DField::Validate() const {
  if (pos.size() != 2 * n || cov_raw.size() != 3 * n || feat.size() != n * r) {
    throw ParameterError("Gaussian2DField: parameter arrays do not match n=" +
                         std::to_string(n) + ", r=" + std::to_string(r));
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(pos) || !finite(cov_raw) || !finite(feat))
    throw ParameterError("Gaussian2DField: non-finite parameter");
}

void Gaussian2DField::Covariance(std::size_t j, double& sxx, double& sxy,
                                 double& syy) const {
  const double l11 = std::exp(cov_raw[3 * j]);
  const double l21 = cov_raw[3 * j + 1];
  const double l22 = std::exp(cov_raw[3 * j + 2]);
  sxx = l11 * l11;
  sxy = l11 * l21;
  syy = l21 * l21 + l22 * l22;
}

void RenderConfig2D::Validate() const {
  if (tile < 1) throw ConfigError("RenderConfig2D: tile must be >= 1");
  if (!(cutoff_sigmas > 0.0))
    throw ConfigError("RenderConfig2D: cutoff_sigmas must be > 0");
}

Tensor3 Render2D(const Gaussian2DField& field, std::size_t h, std::size_t w,
                 const RenderConfig2D& cfg) {
  CheckInputs(field, h, w, cfg);
  const auto prims = Prepare(field, cfg.cutoff_sigmas);
  const auto tiles = BuildTiles(prims, h, w, cfg);
  const double cutoff_sq = cfg.cutoff_sigmas * cfg.cutoff_sigmas;
  const bool cull = !cfg.naive_mode;
  const std::size_t r = field.r;
  const std::size_t hw = h * w;
  Tensor3 out(h, w, r);
  double* dst = out.data().data();

#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const Tile& tile = tiles[t];
    std::vector<double> acc(r);
    for (std::size_t i = tile.i0; i < tile.i1; ++i) {
      for (std::size_t j = tile.j0; j < tile.j1; ++j) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t id : tile.ids) {
          Kernel k;
          if (!Evaluate(prims[id], static_cast<double>(i),
                        static_cast<double>(j), cutoff_sq, cull, k))
            continue;
          const double* c = &field.feat[id * r];
          for (std::size_t q = 0; q < r; ++q) acc[q] += c[q] * k.weight;
        }
        const std::size_t px = i * w + j;
        for (std::size_t q = 0; q < r; ++q) dst[q * hw + px] = acc[q];
      }
    }
  }
  return out;
}

Gaussian2DFieldGrad Render2DBackward(const Gaussian2DField& field,
                                     std::size_t h, std::size_t w,
                                     const RenderConfig2D& cfg,
                                     const Tensor3& upstream) {
  CheckInputs(field, h, w, cfg);
  if (upstream.h() != h || upstream.w() != w || upstream.b() != field.r) {
    throw DimensionError("Render2DBackward: upstream gradient shape does not "
                         "match the rendered tensor");
  }
  const auto prims = Prepare(field, cfg.cutoff_sigmas);
  const auto tiles = BuildTiles(prims, h, w, cfg);
  const double cutoff_sq = cfg.cutoff_sigmas * cfg.cutoff_sigmas;
  const bool cull = !cfg.naive_mode;
  const std::size_t r = field.r;
  const std::size_t hw = h * w;
  const std::size_t stride = 5 + r;  // pos(2), cov(3), feat(r)
  const double* up = upstream.data().data();

  // Each tile accumulates into its own buffer indexed by list position; the
  // buffers are reduced in tile order so the result is deterministic.
  std::vector<std::vector<double>> partial(tiles.size());

#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const Tile& tile = tiles[t];
    std::vector<double>& buf = partial[t];
    buf.assign(tile.ids.size() * stride, 0.0);
    std::vector<double> g(r);
    for (std::size_t i = tile.i0; i < tile.i1; ++i) {
      for (std::size_t j = tile.j0; j < tile.j1; ++j) {
        const std::size_t px = i * w + j;
        bool any = false;
        for (std::size_t q = 0; q < r; ++q) {
          g[q] = up[q * hw + px];
          any = any || g[q] != 0.0;
        }
        if (!any) continue;
        for (std::size_t slot = 0; slot < tile.ids.size(); ++slot) {
          const std::size_t id = tile.ids[slot];
          const Prepared& p = prims[id];
          Kernel k;
          if (!Evaluate(p, static_cast<double>(i), static_cast<double>(j),
                        cutoff_sq, cull, k))
            continue;
          double* gb = &buf[slot * stride];
          const double* c = &field.feat[id * r];
          double s = 0.0;
          for (std::size_t q = 0; q < r; ++q) {
            gb[5 + q] += g[q] * k.weight;
            s += g[q] * c[q];
          }
          if (k.clamped) continue;
          // d(weight)/d(theta) = -weight * (u1 du1 + u2 du2).
          const double coef = -s * k.weight;
          const double u1 = k.u1, u2 = k.u2;
          gb[0] += coef * (-u1 * p.inv11 + u2 * p.l21 * p.inv11 * p.inv22);
          gb[1] += coef * (-u2 * p.inv22);
          gb[2] += coef * (-u1 * u1 + u2 * p.l21 * u1 * p.inv22);
          gb[3] += coef * (-u2 * u1 * p.inv22);
          gb[4] += coef * (-u2 * u2);
        }
      }
    }
  }

  Gaussian2DFieldGrad grad;
  grad.pos.assign(2 * field.n, 0.0);
  grad.cov_raw.assign(3 * field.n, 0.0);
  grad.feat.assign(field.n * r, 0.0);
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const auto& ids = tiles[t].ids;
    const std::vector<double>& buf = partial[t];
    for (std::size_t slot = 0; slot < ids.size(); ++slot) {
      const std::size_t id = ids[slot];
      const double* gb = &buf[slot * stride];
      grad.pos[2 * id] += gb[0];
      grad.pos[2 * id + 1] += gb[1];
      grad.cov_raw[3 * id] += gb[2];
      grad.cov_raw[3 * id + 1] += gb[3];
      grad.cov_raw[3 * id + 2] += gb[4];
      for (std::size_t q = 0; q < r; ++q) grad.feat[id * r + q] += gb[5 + q];
    }
  }
  return grad;
}

Gaussian2DField DegenerateFieldFor(const Tensor3& target, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("DegenerateFieldFor: sigma must be > 0");
  const std::size_t h = target.h(), w = target.w(), r = target.b();
  Gaussian2DField f(h * w, r);
  const double log_sigma = std::log(sigma);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t id = i * w + j;
      f.pos[2 * id] = static_cast<double>(i);
      f.pos[2 * id + 1] = static_cast<double>(j);
      f.cov_raw[3 * id] = log_sigma;
      f.cov_raw[3 * id + 1] = 0.0;
      f.cov_raw[3 * id + 2] = log_sigma;
      for (std::size_t q = 0; q < r; ++q) f.feat[id * r + q] = target(i, j, q);
    }
  }
  return f;
}

Gaussian2DField InitField2D(std::size_t n, std::size_t r, std::size_t h,
                            std::size_t w, std::mt19937_64& rng,
                            double feat_std, InitLayout layout) {
  Gaussian2DField f(n, r);
  const double hd = static_cast<double>(h);
  const double wd = static_cast<double>(w);
  const auto grid_rows = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(std::sqrt(n * hd / wd))));
  const std::size_t grid_cols = (n + grid_rows - 1) / grid_rows;
  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(h - 1));
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(w - 1));
  std::normal_distribution<double> nf(0.0, feat_std);
  const double log_std =
      0.5 * std::log(static_cast<double>(h * w) / static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (layout == InitLayout::kGrid) {
      f.pos[2 * j] = (static_cast<double>(j / grid_cols) + 0.5) * hd /
                         static_cast<double>(grid_rows) - 0.5;
      f.pos[2 * j + 1] = (static_cast<double>(j % grid_cols) + 0.5) * wd /
                             static_cast<double>(grid_cols) - 0.5;
    } else {
      f.pos[2 * j] = h > 1 ? ux(rng) : 0.0;
      f.pos[2 * j + 1] = w > 1 ? uy(rng) : 0.0;
    }
    f.cov_raw[3 * j] = log_std;
    f.cov_raw[3 * j + 1] = 0.0;
    f.cov_raw[3 * j + 2] = log_std;
    for (std::size_t q = 0; q < r; ++q) f.feat[j * r + q] = nf(rng);
  }
  return f;
}

}  // namespace gslr

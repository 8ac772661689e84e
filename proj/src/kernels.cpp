/*
 * Copyright 2026 The damp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "damp/kernels.hpp"

#include <cmath>

namespace damp::kernels {

std::vector<double> gaussian_kernel(double width) {
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * width));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double s = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * static_cast<double>(i * i) / (width * width));
    k[static_cast<std::size_t>(i + radius)] = v;
    s += v;
  }
  for (auto& v : k) v /= s;
  return k;
}

namespace {

using Idx = std::ptrdiff_t;

inline double row_dot(const double* row, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
  return s;
}

// out[j0:j1] = sum_i a[i, j0:j1] * u[i], accumulated in increasing i.
inline void adjoint_chunk(const double* a, std::size_t m, std::size_t n,
                          const double* u, double* out, std::size_t j0,
                          std::size_t j1) {
  for (std::size_t j = j0; j < j1; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ui = u[i];
    const double* row = a + i * n;
    for (std::size_t j = j0; j < j1; ++j) out[j] += row[j] * ui;
  }
}

constexpr std::size_t kAdjointChunk = 256;

// Padded copy of an image. Flat signals (h == 0) are padded horizontally only.
struct Padded {
  std::vector<double> v;
  Idx rows, cols, py, px, stride;
  Padded(std::span<const double> img, std::size_t h, std::size_t w, Idx pad) {
    const bool flat = h == 0;
    rows = flat ? 1 : static_cast<Idx>(h);
    cols = static_cast<Idx>(w);
    py = flat ? 0 : pad;
    px = pad;
    stride = cols + 2 * px;
    v.resize(static_cast<std::size_t>((rows + 2 * py) * stride));
    for (Idx r = -py; r < rows + py; ++r)
      for (Idx c = -px; c < cols + px; ++c)
        v[static_cast<std::size_t>((r + py) * stride + c + px)] =
            img[static_cast<std::size_t>(reflect(r, rows) * cols + reflect(c, cols))];
  }
  const double* at(Idx r, Idx c) const { return v.data() + (r + py) * stride + (c + px); }
};

inline double nlm_pixel(const Padded& p, Idx r, Idx c, double inv_h2,
                        const NlmGeometry& g, bool flat) {
  const Idx pr = static_cast<Idx>(g.patch_radius);
  const Idx wr = static_cast<Idx>(g.window_radius);
  const Idx pry = flat ? 0 : pr;
  const Idx wry = flat ? 0 : wr;
  const double count = static_cast<double>((2 * pry + 1) * (2 * pr + 1));
  double num = 0.0, den = 0.0;
  for (Idx dy = -wry; dy <= wry; ++dy) {
    for (Idx dx = -wr; dx <= wr; ++dx) {
      double d = 0.0;
      for (Idx qy = -pry; qy <= pry; ++qy) {
        const double* a = p.at(r + qy, c - pr);
        const double* b = p.at(r + dy + qy, c + dx - pr);
        for (Idx q = 0; q <= 2 * pr; ++q) {
          double t = a[q] - b[q];
          d += t * t;
        }
      }
      if (g.mean_distance) d /= count;
      double wgt = std::exp(-d * inv_h2);
      num += wgt * *p.at(r + dy, c + dx);
      den += wgt;
    }
  }
  return num / den;
}

inline double bilateral_pixel(const Padded& p, Idx r, Idx c, double inv_h2,
                              const BilateralGeometry& g, bool flat) {
  const Idx wr = static_cast<Idx>(g.window_radius);
  const Idx wry = flat ? 0 : wr;
  const double center = *p.at(r, c);
  const double inv_s2 = 1.0 / (2.0 * g.spatial_sigma * g.spatial_sigma);
  double num = 0.0, den = 0.0;
  for (Idx dy = -wry; dy <= wry; ++dy) {
    for (Idx dx = -wr; dx <= wr; ++dx) {
      double f = *p.at(r + dy, c + dx);
      double t = f - center;
      double e = t * t * inv_h2;
      if (!g.range_only) e += static_cast<double>(dx * dx + dy * dy) * inv_s2;
      double wgt = std::exp(-e);
      num += wgt * f;
      den += wgt;
    }
  }
  return num / den;
}

inline void convolve_row(const double* src, Idx n, Idx stride_in, const double* k,
                         Idx radius, double* dst, Idx stride_out) {
  for (Idx c = 0; c < n; ++c) {
    double s = 0.0;
    for (Idx t = -radius; t <= radius; ++t)
      s += k[t + radius] * src[reflect(c + t, n) * stride_in];
    dst[c * stride_out] = s;
  }
}

}  // namespace

namespace serial {

void gemv(std::span<const double> a, std::size_t m, std::size_t n,
          std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = row_dot(a.data() + i * n, x.data(), n);
}

void gemv_t(std::span<const double> a, std::size_t m, std::size_t n,
            std::span<const double> u, std::span<double> out) {
  adjoint_chunk(a.data(), m, n, u.data(), out.data(), 0, n);
}

void convolve_separable(std::span<const double> img, std::size_t h, std::size_t w,
                        std::span<const double> kernel, std::span<double> out) {
  const Idx H = static_cast<Idx>(h), W = static_cast<Idx>(w);
  const Idx radius = static_cast<Idx>(kernel.size() / 2);
  std::vector<double> tmp(img.size());
  for (Idx r = 0; r < H; ++r)
    convolve_row(img.data() + r * W, W, 1, kernel.data(), radius, tmp.data() + r * W, 1);
  for (Idx c = 0; c < W; ++c)
    convolve_row(tmp.data() + c, H, W, kernel.data(), radius, out.data() + c, W);
}

void nlm(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
         const NlmGeometry& g, std::span<double> out) {
  const bool flat = h == 0;
  Padded p(img, h, w, static_cast<Idx>(g.patch_radius + g.window_radius));
  const double inv_h2 = 1.0 / (hpar * hpar);
  for (Idx r = 0; r < p.rows; ++r)
    for (Idx c = 0; c < p.cols; ++c)
      out[static_cast<std::size_t>(r * p.cols + c)] = nlm_pixel(p, r, c, inv_h2, g, flat);
}

void bilateral(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
               const BilateralGeometry& g, std::span<double> out) {
  const bool flat = h == 0;
  Padded p(img, h, w, static_cast<Idx>(g.window_radius));
  const double inv_h2 = 1.0 / (hpar * hpar);
  for (Idx r = 0; r < p.rows; ++r)
    for (Idx c = 0; c < p.cols; ++c)
      out[static_cast<std::size_t>(r * p.cols + c)] =
          bilateral_pixel(p, r, c, inv_h2, g, flat);
}

}  // namespace serial

namespace omp {

void gemv(std::span<const double> a, std::size_t m, std::size_t n,
          std::span<const double> x, std::span<double> y) {
  const Idx M = static_cast<Idx>(m);
#pragma omp parallel for schedule(static)
  for (Idx i = 0; i < M; ++i)
    y[static_cast<std::size_t>(i)] = row_dot(a.data() + i * static_cast<Idx>(n), x.data(), n);
}

void gemv_t(std::span<const double> a, std::size_t m, std::size_t n,
            std::span<const double> u, std::span<double> out) {
  const Idx chunks = static_cast<Idx>((n + kAdjointChunk - 1) / kAdjointChunk);
#pragma omp parallel for schedule(static)
  for (Idx ch = 0; ch < chunks; ++ch) {
    std::size_t j0 = static_cast<std::size_t>(ch) * kAdjointChunk;
    std::size_t j1 = std::min(n, j0 + kAdjointChunk);
    adjoint_chunk(a.data(), m, n, u.data(), out.data(), j0, j1);
  }
}

void convolve_separable(std::span<const double> img, std::size_t h, std::size_t w,
                        std::span<const double> kernel, std::span<double> out) {
  const Idx H = static_cast<Idx>(h), W = static_cast<Idx>(w);
  const Idx radius = static_cast<Idx>(kernel.size() / 2);
  std::vector<double> tmp(img.size());
#pragma omp parallel for schedule(static)
  for (Idx r = 0; r < H; ++r)
    convolve_row(img.data() + r * W, W, 1, kernel.data(), radius, tmp.data() + r * W, 1);
#pragma omp parallel for schedule(static)
  for (Idx c = 0; c < W; ++c)
    convolve_row(tmp.data() + c, H, W, kernel.data(), radius, out.data() + c, W);
}

void nlm(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
         const NlmGeometry& g, std::span<double> out) {
  const bool flat = h == 0;
  Padded p(img, h, w, static_cast<Idx>(g.patch_radius + g.window_radius));
  const double inv_h2 = 1.0 / (hpar * hpar);
  const Idx total = p.rows * p.cols;
#pragma omp parallel for schedule(static)
  for (Idx i = 0; i < total; ++i)
    out[static_cast<std::size_t>(i)] = nlm_pixel(p, i / p.cols, i % p.cols, inv_h2, g, flat);
}

void bilateral(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
               const BilateralGeometry& g, std::span<double> out) {
  const bool flat = h == 0;
  Padded p(img, h, w, static_cast<Idx>(g.window_radius));
  const double inv_h2 = 1.0 / (hpar * hpar);
  const Idx total = p.rows * p.cols;
#pragma omp parallel for schedule(static)
  for (Idx i = 0; i < total; ++i)
    out[static_cast<std::size_t>(i)] =
        bilateral_pixel(p, i / p.cols, i % p.cols, inv_h2, g, flat);
}

}  // namespace omp

void gemv(Exec e, std::span<const double> a, std::size_t m, std::size_t n,
          std::span<const double> x, std::span<double> y) {
  e == Exec::serial ? serial::gemv(a, m, n, x, y) : omp::gemv(a, m, n, x, y);
}

void gemv_t(Exec e, std::span<const double> a, std::size_t m, std::size_t n,
            std::span<const double> u, std::span<double> out) {
  e == Exec::serial ? serial::gemv_t(a, m, n, u, out) : omp::gemv_t(a, m, n, u, out);
}

void convolve_separable(Exec e, std::span<const double> img, std::size_t h,
                        std::size_t w, std::span<const double> kernel,
                        std::span<double> out) {
  e == Exec::serial ? serial::convolve_separable(img, h, w, kernel, out)
                    : omp::convolve_separable(img, h, w, kernel, out);
}

void nlm(Exec e, std::span<const double> img, std::size_t h, std::size_t w, double hpar,
         const NlmGeometry& g, std::span<double> out) {
  e == Exec::serial ? serial::nlm(img, h, w, hpar, g, out)
                    : omp::nlm(img, h, w, hpar, g, out);
}

void bilateral(Exec e, std::span<const double> img, std::size_t h, std::size_t w,
               double hpar, const BilateralGeometry& g, std::span<double> out) {
  e == Exec::serial ? serial::bilateral(img, h, w, hpar, g, out)
                    : omp::bilateral(img, h, w, hpar, g, out);
}

}  // namespace damp::kernels

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

// Independent reference computations used only by tests. Nothing here calls
// into the library code it checks.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Map = std::function<Vec(const Vec&)>;

// Central finite-difference Jacobian trace, h = rel * ||x||_inf.
inline double fd_trace(const Map& f, const Vec& x, double rel = 1e-5) {
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  const double h = rel * (xmax > 0.0 ? xmax : 1.0);
  double tr = 0.0;
  Vec xp = x, xm = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    tr += (f(xp)[i] - f(xm)[i]) / (2.0 * h);
    xp[i] = xm[i] = x[i];
  }
  return tr;
}

inline double npdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Composite Simpson rule of g(z) phi(z) over [-L, L].
inline double gauss_expect(const std::function<double(double)>& g, double L = 12.0,
                           int panels = 200000) {
  const double h = 2.0 * L / panels;
  double s = 0.0;
  for (int i = 0; i <= panels; ++i) {
    double z = -L + i * h;
    double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * g(z) * npdf(z);
  }
  return s * h / 3.0;
}

inline double soft(double v, double t) {
  double a = std::abs(v) - t;
  return a > 0 ? std::copysign(a, v) : 0.0;
}

inline double hard(double v, double t) { return std::abs(v) >= t ? v : 0.0; }

// Gaussian-smoothed scalar hard threshold by quadrature.
inline double smoothed_hard(double v, double tau, double r) {
  return gauss_expect([&](double z) { return hard(v + r * z, tau); }, 12.0, 400000);
}

// E (soft(mu + s Z; tau) - mu)^2 by quadrature.
inline double soft_risk(double mu, double tau, double s) {
  return gauss_expect([&](double z) {
    double e = soft(mu + s * z, tau) - mu;
    return e * e;
  });
}

// Plain row-major matrix-vector products.
inline Vec matvec(const std::vector<double>& a, std::size_t m, std::size_t n, const Vec& x) {
  Vec y(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += a[i * n + j] * x[j];
  return y;
}

inline Vec matvec_t(const std::vector<double>& a, std::size_t m, std::size_t n, const Vec& u) {
  Vec y(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y[j] += a[i * n + j] * u[i];
  return y;
}

}  // namespace oracle

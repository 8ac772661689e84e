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

#include "damp/diagnostics.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "damp/errors.hpp"
#include "damp/io.hpp"

namespace damp {

NoiseSnapshot effective_noise_from_pseudo_data(std::span<const double> r,
                                               const Signal& x_true, std::size_t iter,
                                               const std::string& algorithm) {
  if (r.size() != x_true.size()) throw DimensionError("effective_noise: length mismatch");
  NoiseSnapshot s;
  s.iter = iter;
  s.algorithm = algorithm;
  s.v.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) s.v[i] = r[i] - x_true.values[i];
  return s;
}

NoiseSnapshot effective_noise(const RecoveryState& state, const MeasurementMatrix& a,
                              const Signal& x_true, const std::string& algorithm) {
  if (state.x.size() != a.cols() || x_true.size() != a.cols() || state.z.size() != a.rows())
    throw DimensionError("effective_noise: dimensions do not conform");
  Vec r = a.apply_adjoint(state.z);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += state.x.values[i];
  return effective_noise_from_pseudo_data(r, x_true, state.iter, algorithm);
}

namespace {

struct Moments {
  double mean, m2, m3, m4;
};

Moments central_moments(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  Moments m{mean, 0.0, 0.0, 0.0};
  for (double x : v) {
    double d = x - mean, d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

void check_input(std::span<const double> v) {
  if (v.size() < 8) throw ParameterError("normality needs at least 8 samples");
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError("normality: non-finite sample");
}

}  // namespace

double skewness(std::span<const double> v) {
  check_input(v);
  auto m = central_moments(v);
  if (m.m2 <= 0.0) throw DegenerateInputError("zero variance");
  return m.m3 / std::pow(m.m2, 1.5);
}

double excess_kurtosis(std::span<const double> v) {
  check_input(v);
  auto m = central_moments(v);
  if (m.m2 <= 0.0) throw DegenerateInputError("zero variance");
  return m.m4 / (m.m2 * m.m2) - 3.0;
}

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> N01;
  return boost::math::quantile(N01, p);
}

double anderson_darling(std::span<const double> v) {
  check_input(v);
  const std::size_t n = v.size();
  auto m = central_moments(v);
  const double sd = std::sqrt(m.m2 * static_cast<double>(n) / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateInputError("zero variance");
  std::vector<double> y(v.begin(), v.end());
  std::sort(y.begin(), y.end());
  for (auto& x : y) x = (x - m.mean) / sd;
  auto log_cdf = [](double x) {
    return std::log(std::max(1e-300, 0.5 * std::erfc(-x / std::numbers::sqrt2)));
  };
  auto log_sf = [](double x) {
    return std::log(std::max(1e-300, 0.5 * std::erfc(x / std::numbers::sqrt2)));
  };
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += static_cast<double>(2 * i + 1) * (log_cdf(y[i]) + log_sf(y[n - 1 - i]));
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

NormalityReport normality(std::span<const double> v) {
  check_input(v);
  auto m = central_moments(v);
  if (!(m.m2 > 0.0)) throw DegenerateInputError("normality: zero variance input");
  NormalityReport r;
  const std::size_t n = v.size();
  r.mean = m.mean;
  r.std_dev = std::sqrt(m.m2 * static_cast<double>(n) / static_cast<double>(n - 1));
  r.skewness = m.m3 / std::pow(m.m2, 1.5);
  r.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
  r.anderson_darling = anderson_darling(v);
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  r.qq.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    r.qq.emplace_back(normal_quantile(p), sorted[i]);
  }
  return r;
}

TraceComparison compare_traces(const Vec& empirical, const Vec& predicted, std::size_t from) {
  TraceComparison c;
  const std::size_t len = std::min(empirical.size(), predicted.size());
  c.empirical.assign(empirical.begin(), empirical.begin() + static_cast<std::ptrdiff_t>(len));
  c.predicted.assign(predicted.begin(), predicted.begin() + static_cast<std::ptrdiff_t>(len));
  for (std::size_t i = 0; i < len; ++i) {
    double e = empirical[i], p = predicted[i];
    double rel = p != 0.0 ? std::abs(e - p) / std::abs(p) : (e == 0.0 ? 0.0 : INFINITY);
    c.rel_error.push_back(rel);
    if (i >= from) c.max_rel_error = std::max(c.max_rel_error, rel);
  }
  if (len) c.terminal_rel_error = c.rel_error.back();
  return c;
}

TraceComparison compare_traces(const RecoveryTrace& empirical, const SETrace& predicted,
                               std::size_t from) {
  return compare_traces(empirical.mse_curve(), predicted.theta, from);
}

std::string qq_csv(const NormalityReport& r) {
  std::string s = "theoretical,empirical\n";
  for (auto& [t, e] : r.qq) s += format_double(t) + "," + format_double(e) + "\n";
  return s;
}

}  // namespace damp

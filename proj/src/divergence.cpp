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

#include "damp/divergence.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <omp.h>

#include "damp/errors.hpp"
#include "damp/rng.hpp"

namespace damp {

std::string to_string(DivergenceMethod m) {
  return m == DivergenceMethod::exact ? "exact" : "monte_carlo";
}

double div_soft(std::span<const double> v, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("div_soft: tau must be >= 0");
  double c = 0.0;
  for (double x : v) c += std::abs(x) > tau ? 1.0 : 0.0;
  return c;
}

double div_hard(std::span<const double> v, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("div_hard: tau must be >= 0");
  double c = 0.0;
  for (double x : v) c += std::abs(x) >= tau ? 1.0 : 0.0;
  return c;
}

double div_block_soft(std::span<const double> v, double tau, std::size_t block_len) {
  if (!(tau >= 0.0)) throw ParameterError("div_block_soft: tau must be >= 0");
  if (block_len == 0 || v.size() % block_len != 0)
    throw DimensionError("div_block_soft: length not divisible by block length");
  const double B = static_cast<double>(block_len);
  double div = 0.0;
  for (std::size_t b = 0; b < v.size(); b += block_len) {
    double nrm = 0.0;
    for (std::size_t i = b; i < b + block_len; ++i) nrm += v[i] * v[i];
    nrm = std::sqrt(nrm);
    if (nrm > tau && nrm > 0.0) div += B - tau * (B - 1.0) / nrm;
  }
  return div;
}

double div_svt(std::span<const double> m, std::size_t n, double lambda,
               double degeneracy_tol) {
  if (!(lambda >= 0.0)) throw ParameterError("div_svt: lambda must be >= 0");
  if (m.size() != n * n) throw DimensionError("div_svt: expected a square matrix");
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> M(m.data(), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(n));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  if (svd.info() != Eigen::Success) throw NumericalError("div_svt: SVD failed");
  const Eigen::VectorXd s = svd.singularValues();
  const double smax2 = s.size() ? s[0] * s[0] : 0.0;
  double div = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s[i] > lambda)) continue;
    div += 1.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (j == i) continue;
      const double gap = s[i] * s[i] - s[j] * s[j];
      if (std::abs(gap) <= degeneracy_tol * smax2)
        throw DegenerateSpectrumError("div_svt: singular values " + std::to_string(i) +
                                      " and " + std::to_string(j) + " coincide (gap " +
                                      std::to_string(gap) + ")");
      div += 2.0 * s[i] * (s[i] - lambda) / gap;
    }
  }
  return div;
}

double default_epsilon(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m > 0.0 ? m / 1000.0 : 1e-3;
}

std::size_t default_mc_samples(std::size_t n) {
  if (n >= 10000) return 1;
  if (n < 1000) return 10;
  double t = static_cast<double>(n - 1000) / 9000.0;
  return static_cast<std::size_t>(std::lround(10.0 - 9.0 * t));
}

DivergenceEstimate mc_divergence(const DenoiserHandle& handle, const Signal& v,
                                 double sigma_hat, double epsilon, std::size_t samples,
                                 std::uint64_t seed, const Signal* baseline,
                                 std::uint64_t call_key, Exec exec) {
  if (!(epsilon > 0.0)) throw ParameterError("mc_divergence: epsilon must be > 0");
  if (samples < 1) throw ParameterError("mc_divergence: samples must be >= 1");
  Signal base_storage;
  if (!baseline) {
    base_storage = handle.apply(v, sigma_hat, call_key, exec);
    baseline = &base_storage;
  }
  const std::size_t n = v.size();
  std::vector<double> terms(samples, 0.0);
  auto one = [&](std::size_t s, Exec inner) {
    Rng rng(seed, Stream::mc_divergence, call_key, s);
    Vec b = rng.normals(n);
    Signal probe = v;
    for (std::size_t i = 0; i < n; ++i) probe.values[i] += epsilon * b[i];
    Signal out = handle.apply(probe, sigma_hat, call_key, inner);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += b[i] * (out.values[i] - baseline->values[i]);
    terms[s] = acc / epsilon;
  };
  if (exec == Exec::parallel && samples > 1 && !omp_in_parallel()) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(samples); ++s) {
      try {
        one(static_cast<std::size_t>(s), Exec::serial);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t s = 0; s < samples; ++s) one(s, exec);
  }
  double sum = 0.0;
  for (double t : terms) sum += t;
  DivergenceEstimate est;
  est.value = sum / static_cast<double>(samples);
  est.method = DivergenceMethod::monte_carlo;
  est.mc_samples = samples;
  est.epsilon = epsilon;
  est.seed = seed;
  return est;
}

bool has_exact_divergence(const DenoiserHandle& handle, const Signal& v) {
  switch (handle.kind()) {
    case DenoiserKind::identity:
    case DenoiserKind::zero:
    case DenoiserKind::projection:
    case DenoiserKind::soft_threshold:
    case DenoiserKind::block_soft:
      return true;
    case DenoiserKind::svt:
      return v.is_grid() && v.height == v.width;
    case DenoiserKind::wavelet_soft:
      return wavelet_shape_exact(v, handle.params().levels);
    default:
      return false;
  }
}

double exact_divergence(const DenoiserHandle& handle, const Signal& v, double sigma_hat) {
  const double p = handle.resolve(sigma_hat);
  switch (handle.kind()) {
    case DenoiserKind::identity: return static_cast<double>(v.size());
    case DenoiserKind::zero: return 0.0;
    case DenoiserKind::projection: {
      double k = 0.0;
      for (auto i : handle.params().support) k += i < v.size() ? 1.0 : 0.0;
      return k;
    }
    case DenoiserKind::soft_threshold: return div_soft(v.values, p);
    case DenoiserKind::block_soft:
      return div_block_soft(v.values, p, handle.params().block_len);
    case DenoiserKind::svt:
      if (!v.is_grid() || v.height != v.width)
        throw LayoutError("svt divergence needs a square matrix signal");
      return div_svt(v.values, v.height, p);
    case DenoiserKind::wavelet_soft:
      return wavelet_divergence(v, p, handle.params().basis, ThresholdMode::soft,
                                handle.params().levels);
    default:
      throw ParameterError("no closed-form divergence for " + handle.describe());
  }
}

}  // namespace damp

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

#include "damp/recovery.hpp"

#include <chrono>
#include <cmath>

#include "damp/diagnostics.hpp"
#include "damp/errors.hpp"

namespace damp {

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ist") return Algorithm::ist;
  if (s == "amp") return Algorithm::amp;
  if (s == "dit") return Algorithm::dit;
  if (s == "damp") return Algorithm::damp;
  throw ParameterError("unknown algorithm '" + s + "'");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ist: return "ist";
    case Algorithm::amp: return "amp";
    case Algorithm::dit: return "dit";
    case Algorithm::damp: return "damp";
  }
  return "?";
}

OnsagerMode parse_onsager(const std::string& s) {
  if (s == "exact") return OnsagerMode::exact;
  if (s == "monte_carlo" || s == "mc") return OnsagerMode::monte_carlo;
  if (s == "none") return OnsagerMode::none;
  throw ParameterError("unknown onsager mode '" + s + "'");
}

std::string to_string(OnsagerMode o) {
  switch (o) {
    case OnsagerMode::exact: return "exact";
    case OnsagerMode::monte_carlo: return "monte_carlo";
    case OnsagerMode::none: return "none";
  }
  return "?";
}

void RecoveryConfig::validate() const {
  const bool plain = algorithm == Algorithm::ist || algorithm == Algorithm::amp;
  if (plain && !denoiser.is_thresholding())
    throw ParameterError(to_string(algorithm) + " needs a thresholding denoiser, got " +
                         denoiser.describe());
  if ((algorithm == Algorithm::ist || algorithm == Algorithm::dit) &&
      onsager != OnsagerMode::none)
    throw ParameterError(to_string(algorithm) + " has no Onsager term; use onsager=none");
  if (!(stop_rel_change >= 0.0)) throw ParameterError("stop_rel_change must be >= 0");
  if (!(oversmooth_factor > 0.0)) throw ParameterError("oversmooth_factor must be > 0");
  if (mc.epsilon < 0.0 || mc.epsilon_sigma_cap < 0.0)
    throw ParameterError("MC epsilon settings must be >= 0");
  if ((height == 0) != (width == 0)) throw ParameterError("layout needs both height and width");
}

std::vector<double> RecoveryTrace::mse_curve() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.mse);
  return out;
}

Vec onsager_term(std::span<const double> z_prev, double div_value, std::size_t m) {
  if (m < 1) throw ParameterError("onsager_term: m must be >= 1");
  const double c = div_value / static_cast<double>(m);
  Vec out(z_prev.size());
  for (std::size_t i = 0; i < z_prev.size(); ++i) out[i] = z_prev[i] * c;
  return out;
}

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool wants_snapshot(const RecoveryConfig& cfg, std::size_t t) {
  for (auto s : cfg.snapshot_iters)
    if (s == t) return true;
  return false;
}

}  // namespace

RecoveryTrace run_recovery(const Measurement& meas, const MeasurementMatrix& a,
                           const RecoveryConfig& cfg, const Signal* x_true) {
  cfg.validate();
  const std::size_t m = a.rows(), n = a.cols();
  if (meas.y.size() != m)
    throw DimensionError("measurement length " + std::to_string(meas.y.size()) +
                         " does not match matrix rows " + std::to_string(m));
  if (x_true && x_true->size() != n)
    throw DimensionError("truth length does not match matrix columns");
  const bool onsager = cfg.onsager != OnsagerMode::none;
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  double peak = cfg.psnr_peak;
  if (x_true && peak <= 0.0) peak = norm_inf(x_true->values);
  if (peak <= 0.0) peak = 1.0;

  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();

  RecoveryTrace trace;
  RecoveryState st;
  if (x_true) {
    st.x = Signal::zeros_like(*x_true);
  } else if (cfg.height) {
    st.x = Signal(Vec(n, 0.0), cfg.height, cfg.width);
  } else {
    st.x = Signal(Vec(n, 0.0));
  }
  st.z = meas.y;
  st.sigma_hat = norm2(st.z) / sqrt_m;
  st.iter = 0;

  auto record = [&](const RecoveryState& s, std::optional<DivergenceEstimate> div,
                    double rel_change) {
    IterationRecord r;
    r.iter = s.iter;
    r.sigma_hat = s.sigma_hat;
    if (x_true) {
      r.mse = mse(s.x, *x_true);
      r.psnr = psnr_from_mse(r.mse, peak);
    }
    r.div = div;
    r.rel_change = rel_change;
    r.wallclock_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t_start).count();
    trace.records.push_back(r);
  };
  record(st, std::nullopt, std::numeric_limits<double>::quiet_NaN());

  const std::string tag = to_string(cfg.algorithm);
  Signal r = st.x;
  Vec ax(m);
  for (std::size_t t = 0; t < cfg.max_iters; ++t) {
    // r = x^t + A* z^t, the point the denoiser sees.
    a.apply_adjoint_into(st.z, r.values, cfg.exec);
    for (std::size_t i = 0; i < n; ++i) r.values[i] += st.x.values[i];
    if (x_true && wants_snapshot(cfg, t))
      trace.snapshots.push_back(effective_noise_from_pseudo_data(r.values, *x_true, t, tag));

    const double sigma_den =
        cfg.algorithm == Algorithm::dit ? cfg.oversmooth_factor * st.sigma_hat : st.sigma_hat;
    Signal x_next;
    std::optional<DivergenceEstimate> div;
    try {
      x_next = cfg.denoiser.apply(r, sigma_den, t, cfg.exec);
      if (onsager) {
        if (cfg.onsager == OnsagerMode::exact) {
          DivergenceEstimate d;
          d.value = exact_divergence(cfg.denoiser, r, sigma_den);
          d.method = DivergenceMethod::exact;
          div = d;
        } else {
          double eps = cfg.mc.epsilon > 0.0 ? cfg.mc.epsilon : default_epsilon(r.values);
          if (cfg.mc.epsilon_sigma_cap > 0.0 && st.sigma_hat > 0.0)
            eps = std::min(eps, cfg.mc.epsilon_sigma_cap * st.sigma_hat);
          std::size_t samples = cfg.mc.samples > 0 ? cfg.mc.samples : default_mc_samples(n);
          div = mc_divergence(cfg.denoiser, r, sigma_den, eps, samples, cfg.seed, &x_next, t,
                              cfg.exec);
        }
      }
    } catch (const NumericalError& e) {
      trace.abort = AbortKind::numerical;
      trace.abort_reason = "iteration " + std::to_string(t + 1) + ": " + e.what();
      break;
    } catch (const Error& e) {
      if (!onsager) throw;
      trace.abort = AbortKind::divergence_failure;
      trace.abort_reason = "iteration " + std::to_string(t + 1) + ": " + e.what();
      break;
    }

    // z^{t+1} = y - A x^{t+1} + z^t div / m
    a.apply_into(x_next.values, ax, cfg.exec);
    Vec z_next(m);
    const double c = div ? div->value / static_cast<double>(m) : 0.0;
    for (std::size_t i = 0; i < m; ++i) z_next[i] = meas.y[i] - ax[i] + st.z[i] * c;

    if (!all_finite(x_next.values) || !all_finite(z_next) || (div && !std::isfinite(div->value))) {
      trace.abort = AbortKind::numerical;
      trace.abort_reason = "non-finite iterate at iteration " + std::to_string(t + 1);
      break;
    }

    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = x_next.values[i] - st.x.values[i];
      diff += d * d;
    }
    const double xn = norm2(x_next.values);
    const double rel = xn > 0.0 ? std::sqrt(diff) / xn : (diff > 0.0 ? INFINITY : 0.0);

    st.x = std::move(x_next);
    st.z = std::move(z_next);
    st.sigma_hat = norm2(st.z) / sqrt_m;
    st.iter = t + 1;
    record(st, div, rel);
    if (cfg.stop_rel_change > 0.0 && rel < cfg.stop_rel_change) break;
  }
  if (x_true && !trace.aborted() && wants_snapshot(cfg, st.iter)) {
    a.apply_adjoint_into(st.z, r.values, cfg.exec);
    for (std::size_t i = 0; i < n; ++i) r.values[i] += st.x.values[i];
    trace.snapshots.push_back(effective_noise_from_pseudo_data(r.values, *x_true, st.iter, tag));
  }
  trace.final_state = std::move(st);
  return trace;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

Signal exhaustive_bk_recover(const Measurement& meas, const MeasurementMatrix& a,
                             std::size_t k, double budget) {
  const std::size_t m = a.rows(), n = a.cols();
  if (meas.y.size() != m) throw DimensionError("measurement length does not match matrix");
  if (k > n) throw ParameterError("k > n");
  const double count = binomial(n, k);
  if (count > budget)
    throw BudgetError("exhaustive search over " + std::to_string(count) +
                          " supports exceeds budget " + std::to_string(budget),
                      count, budget);
  Vec x(n, 0.0);
  if (k == 0) return Signal(std::move(x));

  std::vector<std::size_t> idx(k), best;
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  double best_res = INFINITY;
  Vec resid(m);
  while (true) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = meas.y[i];
      for (auto j : idx) s -= a(i, j);
      resid[i] = s;
    }
    double res = norm2_sq(resid);
    if (res < best_res) {  // strict: the lexicographically first support wins ties
      best_res = res;
      best = idx;
    }
    // next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  for (auto j : best) x[j] = 1.0;
  return Signal(std::move(x));
}

}  // namespace damp

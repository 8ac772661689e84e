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

#include "damp/state_evolution.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <omp.h>

#include "damp/errors.hpp"
#include "damp/io.hpp"
#include "damp/rng.hpp"

namespace damp {

namespace {

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double phi(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// E[(sZ + c)^2 ; lo < Z < hi]
double truncated_second(double s, double c, double lo, double hi) {
  const double plo = std::isinf(lo) ? 0.0 : phi(lo);
  const double phi_hi = std::isinf(hi) ? 0.0 : phi(hi);
  const double P = Phi(hi) - Phi(lo);
  const double ez = plo - phi_hi;
  const double ez2 = P + (std::isinf(lo) ? 0.0 : lo * plo) - (std::isinf(hi) ? 0.0 : hi * phi_hi);
  return s * s * ez2 + 2.0 * s * c * ez + c * c * P;
}

}  // namespace

std::size_t default_se_trials(std::size_t n) {
  if (n <= 1000) return 400;
  if (n >= 10000) return 20;
  double t = static_cast<double>(n - 1000) / 9000.0;
  return static_cast<std::size_t>(std::lround(400.0 - 380.0 * t));
}

double soft_threshold_risk(double mu, double tau, double s) {
  if (s <= 0.0) {
    double a = std::abs(mu) - tau;
    double e = (a > 0.0 ? std::copysign(a, mu) : 0.0) - mu;
    return e * e;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double a = (tau - mu) / s;
  const double b = (-tau - mu) / s;
  return truncated_second(s, -tau, a, inf) + truncated_second(s, tau, -inf, b) +
         mu * mu * (Phi(a) - Phi(b));
}

double soft_null_second_moment(double tau) {
  return 2.0 * ((1.0 + tau * tau) * Phi(-tau) - tau * phi(tau));
}

double soft_sparse_risk_ratio(double rho, double tau) {
  return (1.0 + tau * tau) * rho + (1.0 - rho) * soft_null_second_moment(tau);
}

bool has_closed_form_risk(const DenoiserHandle& h) {
  switch (h.kind()) {
    case DenoiserKind::identity:
    case DenoiserKind::zero:
    case DenoiserKind::projection:
    case DenoiserKind::soft_threshold:
      return true;
    default:
      return false;
  }
}

double closed_form_risk(const DenoiserHandle& h, const Signal& x_o, double sigma) {
  const double n = static_cast<double>(x_o.size());
  switch (h.kind()) {
    case DenoiserKind::identity:
      return sigma * sigma;
    case DenoiserKind::zero:
      return norm2_sq(x_o.values) / n;
    case DenoiserKind::projection: {
      double off = norm2_sq(x_o.values);
      double k = 0.0;
      for (auto i : h.params().support) {
        if (i >= x_o.size()) continue;
        off -= x_o.values[i] * x_o.values[i];
        k += 1.0;
      }
      return (std::max(0.0, off) + k * sigma * sigma) / n;
    }
    case DenoiserKind::soft_threshold: {
      const double tau = h.resolve(sigma);
      double s = 0.0;
      for (double mu : x_o.values) s += soft_threshold_risk(mu, tau, sigma);
      return s / n;
    }
    default:
      throw ParameterError("no closed-form risk for " + h.describe());
  }
}

RiskEstimate denoiser_risk(const DenoiserHandle& h, const Signal& x_o, double sigma,
                           const SeOptions& opts, std::uint64_t step_key) {
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  const bool closed = opts.method == SeMethod::exact ||
                      (opts.method == SeMethod::automatic && has_closed_form_risk(h));
  if (closed) {
    RiskEstimate r;
    r.mean = closed_form_risk(h, x_o, sigma);
    r.exact = true;
    return r;
  }
  const std::size_t n = x_o.size();
  const std::size_t trials = opts.mc_trials ? opts.mc_trials : default_se_trials(n);
  std::vector<double> vals(trials);
  auto one = [&](std::size_t j, Exec inner) {
    Rng rng(opts.seed, Stream::state_evolution, step_key, j);
    Signal noisy = x_o;
    for (auto& v : noisy.values) v += sigma * rng.normal();
    const std::uint64_t key = derive_seed(step_key, Stream::state_evolution, j);
    Signal est = h.apply(noisy, sigma, key, inner);
    vals[j] = mse(est, x_o);
  };
  if (opts.exec == Exec::parallel && trials > 1 && !omp_in_parallel()) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(trials); ++j) {
      try {
        one(static_cast<std::size_t>(j), Exec::serial);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t j = 0; j < trials; ++j) one(j, opts.exec);
  }
  double s = 0.0;
  for (double v : vals) s += v;
  const double mean = s / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  RiskEstimate r;
  r.mean = mean;
  r.std_error = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) /
                                       static_cast<double>(trials))
                           : 0.0;
  return r;
}

static void check_se_args(double theta, double delta, double sigma_w2) {
  if (!(theta >= 0.0)) throw ParameterError("theta must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (!(sigma_w2 >= 0.0)) throw ParameterError("sigma_w2 must be >= 0");
}

double se_step(const DenoiserHandle& h, const Signal& x_o, double theta, double delta,
               double sigma_w2, const SeOptions& opts, std::uint64_t step) {
  check_se_args(theta, delta, sigma_w2);
  const double sigma = std::sqrt(theta / delta + sigma_w2);
  return denoiser_risk(h, x_o, sigma, opts, step).mean;
}

SETrace se_trace(const DenoiserHandle& h, const Signal& x_o, double delta, double sigma_w2,
                 std::size_t iters, const SeOptions& opts) {
  check_se_args(0.0, delta, sigma_w2);
  SETrace t;
  t.delta = delta;
  t.sigma_w2 = sigma_w2;
  const bool closed = opts.method == SeMethod::exact ||
                      (opts.method == SeMethod::automatic && has_closed_form_risk(h));
  t.mc_trials = closed ? 0 : (opts.mc_trials ? opts.mc_trials : default_se_trials(x_o.size()));
  double theta = norm2_sq(x_o.values) / static_cast<double>(x_o.size());
  t.theta.push_back(theta);
  t.sigma.push_back(std::sqrt(theta / delta + sigma_w2));
  for (std::size_t s = 0; s < iters; ++s) {
    theta = se_step(h, x_o, theta, delta, sigma_w2, opts, s);
    if (!std::isfinite(theta)) throw NumericalError("state evolution produced a non-finite value");
    t.theta.push_back(theta);
    t.sigma.push_back(std::sqrt(theta / delta + sigma_w2));
  }
  return t;
}

FixedPointResult se_fixed_point(const DenoiserHandle& h, const Signal& x_o, double delta,
                                double sigma_w2, double tol, std::size_t max_iters,
                                const SeOptions& opts) {
  if (!(tol > 0.0)) throw ParameterError("fixed-point tolerance must be > 0");
  check_se_args(0.0, delta, sigma_w2);
  FixedPointResult r;
  double theta = norm2_sq(x_o.values) / static_cast<double>(x_o.size());
  r.theta = theta;
  r.previous = theta;
  for (std::size_t s = 0; s < max_iters; ++s) {
    double next = se_step(h, x_o, theta, delta, sigma_w2, opts, s);
    r.previous = theta;
    r.theta = next;
    r.iterations = s + 1;
    if (!std::isfinite(next)) break;
    if (std::abs(next - theta) < tol * std::max(theta, 1e-12)) {
      r.converged = true;
      break;
    }
    theta = next;
  }
  return r;
}

DenoiserLevel estimate_level(const DenoiserHandle& h, const Signal& x_o,
                             const Vec& sigma_grid, const SeOptions& opts) {
  if (sigma_grid.empty()) throw ParameterError("sigma grid is empty");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0.0)) throw ParameterError("sigma grid must be positive");
    if (i && !(sigma_grid[i] > sigma_grid[i - 1]))
      throw ParameterError("sigma grid must be ascending");
  }
  DenoiserLevel lv;
  lv.sigma = sigma_grid;
  const std::size_t g = sigma_grid.size();
  Vec s2(g);
  for (std::size_t i = 0; i < g; ++i) {
    // Common noise draws across the grid.
    RiskEstimate r = denoiser_risk(h, x_o, sigma_grid[i], opts, 0);
    lv.risk.push_back(r.mean);
    lv.std_error.push_back(r.std_error);
    s2[i] = sigma_grid[i] * sigma_grid[i];
  }
  const auto& R = lv.risk;

  // Least upper envelope kappa s + B >= R_i minimizing sum_i (kappa s_i + B).
  double best_obj = INFINITY, bk = 0.0, bb = 0.0;
  auto consider = [&](double k, double b) {
    if (k < 0.0 || b < 0.0 || !std::isfinite(k) || !std::isfinite(b)) return;
    for (std::size_t i = 0; i < g; ++i)
      if (k * s2[i] + b < R[i] * (1.0 - 1e-12) - 1e-300) return;
    double obj = 0.0;
    for (std::size_t i = 0; i < g; ++i) obj += k * s2[i] + b;
    if (obj < best_obj) {
      best_obj = obj;
      bk = k;
      bb = b;
    }
  };
  double k0 = 0.0, b0 = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    k0 = std::max(k0, R[i] / s2[i]);
    b0 = std::max(b0, R[i]);
  }
  consider(k0, 0.0);
  consider(0.0, b0);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j) {
      double k = (R[j] - R[i]) / (s2[j] - s2[i]);
      consider(k, std::max(0.0, R[i] - k * s2[i]));
    }

  // Proper fit (B = 0) when R / sigma^2 stays bounded toward the smallest
  // sigma, or when B is within Monte Carlo noise of zero. A bias term makes
  // the ratio grow like B / sigma^2.
  double max_se = 0.0;
  for (double e : lv.std_error) max_se = std::max(max_se, e);
  bool bounded = true;
  if (g >= 2) {
    const double r0 = R[0] / s2[0], r1 = R[1] / s2[1];
    const double noise = 3.0 * (lv.std_error[0] / s2[0] + lv.std_error[1] / s2[1]);
    bounded = r0 <= 1.5 * r1 + noise;
  }
  if (bounded || bb <= 3.0 * max_se || bb <= 1e-12 * best_obj) {
    bb = 0.0;
    bk = k0;
  }
  lv.kappa = bk;
  lv.bias_B = bb;

  for (std::size_t i = 0; i + 1 < g; ++i) {
    double tol = 3.0 * std::hypot(lv.std_error[i], lv.std_error[i + 1]);
    if (R[i + 1] < R[i] - tol - 1e-12 * R[i]) {
      lv.monotone = false;
      lv.warnings.push_back("risk decreases between sigma=" + format_double(sigma_grid[i]) +
                            " and sigma=" + format_double(sigma_grid[i + 1]) +
                            "; denoiser is not monotone on this grid");
    }
  }
  if (lv.kappa >= 1.0) lv.warnings.push_back("kappa >= 1: denoiser is not proper below delta=1");
  return lv;
}

bool se_succeeds(const DenoiserHandle& h, const Signal& x_o, double delta,
                 const DeltaStarOptions& d, const SeOptions& opts) {
  const double theta0 = norm2_sq(x_o.values) / static_cast<double>(x_o.size());
  if (theta0 == 0.0) return true;
  double theta = theta0;
  for (std::size_t s = 0; s < d.max_iters; ++s) {
    double next = se_step(h, x_o, theta, delta, d.sigma_w2, opts, s);
    if (!std::isfinite(next) || next > d.blowup * theta0) return false;
    if (next < d.success_tol * theta0) return true;
    if (std::abs(next - theta) <= 1e-14 * theta) return false;  // stalled above zero
    theta = next;
  }
  return false;
}

double delta_star(const DenoiserHandle& h, const Signal& x_o, const DeltaStarOptions& d,
                  const SeOptions& opts) {
  if (!(d.lo > 0.0 && d.lo < d.hi && d.hi <= 1.0)) throw ParameterError("invalid delta bracket");
  if (!(d.tol > 0.0)) throw ParameterError("bisection tolerance must be > 0");
  if (se_succeeds(h, x_o, d.lo, d, opts)) return d.lo;
  if (!se_succeeds(h, x_o, d.hi, d, opts))
    throw NumericalError("state evolution fails at the top of the delta bracket");
  // Success must be monotone in delta; probe the interior before bisecting.
  double lo = d.lo, hi = d.hi;
  bool seen_success = false;
  for (std::size_t i = 1; i <= d.monotone_probes; ++i) {
    double dl = d.lo + (d.hi - d.lo) * static_cast<double>(i) /
                           static_cast<double>(d.monotone_probes + 1);
    bool ok = se_succeeds(h, x_o, dl, d, opts);
    if (ok) {
      if (!seen_success) hi = dl;
      seen_success = true;
    } else {
      if (seen_success)
        throw NumericalError("SE success is not monotone in delta (fails at " +
                             format_double(dl) + " after succeeding below)");
      lo = dl;
    }
  }
  while (hi - lo > d.tol) {
    double mid = 0.5 * (lo + hi);
    if (se_succeeds(h, x_o, mid, d, opts)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double noise_sensitivity_bound(double kappa, double B, double delta, double sigma_w2) {
  if (!(delta > kappa)) throw ParameterError("noise sensitivity bound undefined for delta <= kappa");
  if (kappa < 0.0 || B < 0.0 || sigma_w2 < 0.0)
    throw ParameterError("kappa, B and sigma_w2 must be >= 0");
  return (kappa * sigma_w2 + B) / (1.0 - kappa / delta);
}

GreedyResult greedy_tune(const DenoiserHandle& family, const Signal& x_o, double delta,
                         double sigma_w2, std::size_t iters, const Vec& param_grid,
                         const SeOptions& opts) {
  if (param_grid.empty()) throw ParameterError("parameter grid is empty");
  check_se_args(0.0, delta, sigma_w2);
  std::vector<DenoiserHandle> members;
  for (double p : param_grid) members.push_back(family.with_value(p));
  GreedyResult out;
  out.trace.delta = delta;
  out.trace.sigma_w2 = sigma_w2;
  const bool closed = opts.method == SeMethod::exact ||
                      (opts.method == SeMethod::automatic && has_closed_form_risk(family));
  out.trace.mc_trials =
      closed ? 0 : (opts.mc_trials ? opts.mc_trials : default_se_trials(x_o.size()));
  double theta = norm2_sq(x_o.values) / static_cast<double>(x_o.size());
  out.trace.theta.push_back(theta);
  out.trace.sigma.push_back(std::sqrt(theta / delta + sigma_w2));
  for (std::size_t s = 0; s < iters; ++s) {
    const double sigma = std::sqrt(theta / delta + sigma_w2);
    double best = INFINITY;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      double r = denoiser_risk(members[i], x_o, sigma, opts, s).mean;
      if (r < best) {
        best = r;
        arg = i;
      }
    }
    theta = best;
    out.params.push_back(param_grid[arg]);
    out.trace.theta.push_back(theta);
    out.trace.sigma.push_back(std::sqrt(theta / delta + sigma_w2));
  }
  return out;
}

double binary_sparse_mmse(double rho, double sigma) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1)");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
  const double odds = (1.0 - rho) / rho;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  // Posterior P(x = 1 | y); the posterior mean of a zero-one variable.
  auto post = [&](double y) {
    double e = (1.0 - 2.0 * y) * inv2s2;
    if (e > 700.0) return 0.0;
    return 1.0 / (1.0 + odds * std::exp(e));
  };
  auto f = [&](double z) {
    double p1 = post(1.0 + sigma * z);
    double p0 = post(sigma * z);
    return phi(z) * (rho * (1.0 - p1) * (1.0 - p1) + (1.0 - rho) * p0 * p0);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  // The posterior jumps near y* = 1/2 + sigma^2 log(odds); splitting the
  // integral at the matching z values keeps the adaptive rule honest for
  // small sigma.
  const double ystar = 0.5 + sigma * sigma * std::log(odds);
  const double c0 = ystar / sigma, c1 = (ystar - 1.0) / sigma;
  double total = 0.0, e1 = 0.0;
  const double pts[] = {-inf, std::min(c0, c1), std::max(c0, c1), inf};
  for (int i = 0; i < 3; ++i) {
    total += GK::integrate(f, pts[i], pts[i + 1], 20, 1e-12, &e1);
    err += e1;
  }
  if (!(err <= 1e-8) || !std::isfinite(total))
    throw NumericalError("binary_sparse_mmse: quadrature did not converge (error " +
                         format_double(err) + ")");
  return total;
}

double kappa_mm_binary_sparse(double rho, const Vec& sigma_grid) {
  if (sigma_grid.empty()) throw ParameterError("sigma grid is empty");
  double best = 0.0;
  for (double s : sigma_grid) best = std::max(best, binary_sparse_mmse(rho, s) / (s * s));
  return best;
}

void write_se_csv(const std::string& path, const SETrace& t) {
  std::string s = "iter,theta,sigma\n";
  for (std::size_t i = 0; i < t.theta.size(); ++i)
    s += std::to_string(i) + "," + format_double(t.theta[i]) + "," + format_double(t.sigma[i]) +
         "\n";
  write_file_atomic(path, s);
}

}  // namespace damp

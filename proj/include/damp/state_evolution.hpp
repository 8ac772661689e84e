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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "damp/denoisers.hpp"

namespace damp {

enum class SeMethod {
  monte_carlo,  // default; works for any handle
  exact,        // closed form, error if unavailable
  automatic,    // closed form when available, else Monte Carlo
};

struct SeOptions {
  std::size_t mc_trials = 0;  // 0: 400 for n <= 1000, 20 for n >= 10^4, linear in between
  std::uint64_t seed = 0;
  SeMethod method = SeMethod::monte_carlo;
  Exec exec = Exec::parallel;
};

std::size_t default_se_trials(std::size_t n);

struct SETrace {
  Vec theta;  // theta[t], t = 0..iters
  Vec sigma;  // sigma[t] = sqrt(theta[t] / delta + sigma_w2)
  double delta = 0.0;
  double sigma_w2 = 0.0;
  std::size_t mc_trials = 0;  // 0 when every step used a closed form
};

struct RiskEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // 0 for closed forms
  bool exact = false;
};

// Per-coordinate risk (1/n) E ||D_sigma(x_o + sigma eps) - x_o||^2. Trial j
// of the Monte Carlo average draws eps from (seed, step_key, j), so two
// handles evaluated with the same key share their noise draws.
RiskEstimate denoiser_risk(const DenoiserHandle& h, const Signal& x_o, double sigma,
                           const SeOptions& opts, std::uint64_t step_key = 0);

bool has_closed_form_risk(const DenoiserHandle& h);
double closed_form_risk(const DenoiserHandle& h, const Signal& x_o, double sigma);

// E (eta(mu + s Z; tau) - mu)^2 for soft thresholding, Z ~ N(0, 1).
double soft_threshold_risk(double mu, double tau, double s);
// E eta(Z; tau)^2 = 2 [(1 + tau^2) Phi(-tau) - tau phi(tau)].
double soft_null_second_moment(double tau);
// Large-amplitude k-sparse risk / sigma^2 of soft thresholding at tau sigma.
double soft_sparse_risk_ratio(double rho, double tau);

double se_step(const DenoiserHandle& h, const Signal& x_o, double theta, double delta,
               double sigma_w2, const SeOptions& opts, std::uint64_t step = 0);

SETrace se_trace(const DenoiserHandle& h, const Signal& x_o, double delta, double sigma_w2,
                 std::size_t iters, const SeOptions& opts);

struct FixedPointResult {
  double theta = 0.0;
  double previous = 0.0;  // the iterate before theta
  std::size_t iterations = 0;
  bool converged = false;
};

FixedPointResult se_fixed_point(const DenoiserHandle& h, const Signal& x_o, double delta,
                                double sigma_w2, double tol, std::size_t max_iters,
                                const SeOptions& opts);

struct DenoiserLevel {
  double kappa = 0.0;
  double bias_B = 0.0;
  Vec sigma;
  Vec risk;
  Vec std_error;
  bool monotone = true;
  std::vector<std::string> warnings;
};

DenoiserLevel estimate_level(const DenoiserHandle& h, const Signal& x_o,
                             const Vec& sigma_grid, const SeOptions& opts);

struct DeltaStarOptions {
  double sigma_w2 = 0.0;
  double lo = 0.01, hi = 0.99;
  double tol = 1e-3;           // bisection width
  double success_tol = 1e-6;   // theta_inf < success_tol * theta_0
  double blowup = 1e3;         // theta > blowup * theta_0 counts as failure
  std::size_t max_iters = 2000;
  std::size_t monotone_probes = 5;
};

// True when the noiseless SE at delta drives theta below success_tol * theta_0.
bool se_succeeds(const DenoiserHandle& h, const Signal& x_o, double delta,
                 const DeltaStarOptions& d, const SeOptions& opts);

double delta_star(const DenoiserHandle& h, const Signal& x_o, const DeltaStarOptions& d,
                  const SeOptions& opts);

double noise_sensitivity_bound(double kappa, double B, double delta, double sigma_w2);

struct GreedyResult {
  Vec params;  // parameter chosen at each step
  SETrace trace;
};

// At each SE step, the grid value with the smallest one-step risk is kept.
GreedyResult greedy_tune(const DenoiserHandle& family, const Signal& x_o, double delta,
                         double sigma_w2, std::size_t iters, const Vec& param_grid,
                         const SeOptions& opts);

// Posterior-mean risk of x ~ rho delta_1 + (1 - rho) delta_0 observed in
// N(0, sigma^2) noise, by adaptive quadrature (tolerance 1e-8).
double binary_sparse_mmse(double rho, double sigma);
double kappa_mm_binary_sparse(double rho, const Vec& sigma_grid);

void write_se_csv(const std::string& path, const SETrace& t);

}  // namespace damp

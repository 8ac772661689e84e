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
#include <span>
#include <string>

#include "damp/denoisers.hpp"

namespace damp {

enum class DivergenceMethod { exact, monte_carlo };
std::string to_string(DivergenceMethod m);

struct DivergenceEstimate {
  double value = 0.0;
  DivergenceMethod method = DivergenceMethod::exact;
  std::size_t mc_samples = 0;  // monte_carlo only
  double epsilon = 0.0;        // monte_carlo only
  std::uint64_t seed = 0;      // monte_carlo only
};

// #{i : |v_i| > tau}
double div_soft(std::span<const double> v, double tau);
// Almost-everywhere derivative of hard thresholding, #{i : |v_i| >= tau}.
// It ignores the jumps, so it is not used as an Onsager term.
double div_hard(std::span<const double> v, double tau);
// Sum over active blocks of B - tau (B - 1) / ||v_B||.
double div_block_soft(std::span<const double> v, double tau, std::size_t block_len);
// Square n x n row-major matrix. Throws DegenerateSpectrumError when an
// active singular value nearly coincides with another one.
double div_svt(std::span<const double> m, std::size_t n, double lambda,
               double degeneracy_tol = 1e-10);

// ||v||_inf / 1000, or 1e-3 for an all-zero input.
double default_epsilon(std::span<const double> v);
// 10 probes below n = 1000, 1 from n = 10^4, linear in between.
std::size_t default_mc_samples(std::size_t n);

// Averages b'(D(v + eps b) - D(v)) / eps over `samples` standard normal
// probes b. Probe i is drawn from (seed, call_key, i). When `baseline` is
// given it must equal handle.apply(v, sigma_hat, call_key); otherwise it is
// computed once.
DivergenceEstimate mc_divergence(const DenoiserHandle& handle, const Signal& v,
                                 double sigma_hat, double epsilon, std::size_t samples,
                                 std::uint64_t seed, const Signal* baseline = nullptr,
                                 std::uint64_t call_key = 0, Exec exec = Exec::parallel);

bool has_exact_divergence(const DenoiserHandle& handle, const Signal& v);
// Divergence of handle.apply(., sigma_hat) at v through a closed form.
double exact_divergence(const DenoiserHandle& handle, const Signal& v, double sigma_hat);

}  // namespace damp

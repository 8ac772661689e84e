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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "damp/denoisers.hpp"
#include "damp/divergence.hpp"
#include "damp/sensing.hpp"

namespace damp {

enum class Algorithm { ist, amp, dit, damp };
enum class OnsagerMode { exact, monte_carlo, none };

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);
OnsagerMode parse_onsager(const std::string& s);
std::string to_string(OnsagerMode o);

struct McDivergenceOptions {
  double epsilon = 0.0;            // 0: ||v||_inf / 1000
  std::size_t samples = 0;         // 0: default_mc_samples(n)
  double epsilon_sigma_cap = 0.0;  // > 0: epsilon <= cap * sigma_hat
};

struct RecoveryConfig {
  Algorithm algorithm = Algorithm::damp;
  DenoiserHandle denoiser;
  OnsagerMode onsager = OnsagerMode::monte_carlo;
  std::size_t max_iters = 30;
  double stop_rel_change = 0.0;
  double oversmooth_factor = 2.0;  // dit only
  McDivergenceOptions mc;
  std::uint64_t seed = 0;
  std::vector<std::size_t> snapshot_iters;
  double psnr_peak = 0.0;  // 0: max |x_true|
  std::size_t height = 0, width = 0;  // layout of the iterate when no truth is given
  Exec exec = Exec::parallel;

  void validate() const;
};

struct RecoveryState {
  Signal x;
  Vec z;
  double sigma_hat = 0.0;
  std::size_t iter = 0;
};

struct IterationRecord {
  std::size_t iter = 0;
  double sigma_hat = 0.0;  // ||z^iter|| / sqrt(m)
  double mse = std::numeric_limits<double>::quiet_NaN();
  double psnr = std::numeric_limits<double>::quiet_NaN();
  // Divergence that entered z^iter (absent at iter 0 and without Onsager).
  std::optional<DivergenceEstimate> div;
  double rel_change = std::numeric_limits<double>::quiet_NaN();
  double wallclock_ms = 0.0;
};

struct NoiseSnapshot {
  Vec v;  // x^t + A* z^t - x_o
  std::size_t iter = 0;
  std::string algorithm;
};

enum class AbortKind { none, numerical, divergence_failure };

struct RecoveryTrace {
  std::vector<IterationRecord> records;
  RecoveryState final_state;
  std::vector<NoiseSnapshot> snapshots;
  AbortKind abort = AbortKind::none;
  std::string abort_reason;

  bool aborted() const { return abort != AbortKind::none; }
  const Signal& estimate() const { return final_state.x; }
  std::vector<double> mse_curve() const;
};

Vec onsager_term(std::span<const double> z_prev, double div_value, std::size_t m);

RecoveryTrace run_recovery(const Measurement& y, const MeasurementMatrix& a,
                           const RecoveryConfig& cfg, const Signal* x_true = nullptr);

// Best zero-one k-sparse fit to y by enumeration of all supports.
Signal exhaustive_bk_recover(const Measurement& y, const MeasurementMatrix& a, std::size_t k,
                             double budget = 1e6);

double binomial(std::size_t n, std::size_t k);

}  // namespace damp

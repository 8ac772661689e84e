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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "damp/recovery.hpp"
#include "damp/state_evolution.hpp"

namespace damp {

NoiseSnapshot effective_noise(const RecoveryState& state, const MeasurementMatrix& a,
                              const Signal& x_true, const std::string& algorithm = "");
// v = r - x_o where r = x^t + A* z^t has already been formed.
NoiseSnapshot effective_noise_from_pseudo_data(std::span<const double> r,
                                               const Signal& x_true, std::size_t iter,
                                               const std::string& algorithm);

struct NormalityReport {
  double mean = 0.0;
  double std_dev = 0.0;
  double excess_kurtosis = 0.0;
  double skewness = 0.0;
  double anderson_darling = 0.0;
  std::vector<std::pair<double, double>> qq;  // (theoretical, empirical)
};

double skewness(std::span<const double> v);
double excess_kurtosis(std::span<const double> v);
// A^2 against N(mean, var) with both estimated from v.
double anderson_darling(std::span<const double> v);
double normal_quantile(double p);

NormalityReport normality(std::span<const double> v);

struct TraceComparison {
  Vec empirical;
  Vec predicted;
  Vec rel_error;  // |empirical - predicted| / predicted
  double max_rel_error = 0.0;
  double terminal_rel_error = 0.0;
};

// Truncates to the shorter sequence. `from` skips leading iterations in the
// max (the terminal value is always the last common one).
TraceComparison compare_traces(const Vec& empirical, const Vec& predicted,
                               std::size_t from = 0);
TraceComparison compare_traces(const RecoveryTrace& empirical, const SETrace& predicted,
                               std::size_t from = 0);

std::string qq_csv(const NormalityReport& r);

}  // namespace damp

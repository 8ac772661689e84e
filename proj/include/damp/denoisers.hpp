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
#include <memory>
#include <string>
#include <vector>

#include "damp/kernels.hpp"
#include "damp/signal.hpp"
#include "damp/wavelet.hpp"

namespace damp {

enum class DenoiserKind {
  identity,
  zero,
  projection,
  soft_threshold,
  hard_threshold,
  block_soft,
  svt,
  gaussian_filter,
  bilateral,
  nlm,
  wavelet_soft,
  wavelet_hard,
  smoothed,
};

enum class Tuning { fixed, scale_with_sigma, lookup_table };

DenoiserKind parse_denoiser_kind(const std::string& name);
std::string to_string(DenoiserKind k);
Tuning parse_tuning(const std::string& name);
std::string to_string(Tuning t);

// Piecewise-constant parameter schedule over sigma. Row i covers
// [breakpoints[i-1], breakpoints[i]); the first and last rows extend to 0
// and infinity. values.size() == breakpoints.size() + 1.
struct TuningTable {
  std::vector<double> breakpoints;
  std::vector<double> values;
  bool relative = false;  // value is a multiple of sigma
  std::string name;

  void validate() const;
  std::size_t row(double sigma) const;
  double resolve(double sigma) const;
};

struct SmoothingParams {
  double r = 0.1;          // width; multiple of sigma_hat when r_relative
  bool r_relative = true;
  std::size_t samples = 10;
  std::uint64_t seed = 0;
};

struct DenoiserParams {
  double value = 1.0;  // tau, lambda, width or h; a multiplier under scale_with_sigma
  std::size_t block_len = 1;
  NlmGeometry nlm;
  BilateralGeometry bilateral;
  WaveletBasis basis = WaveletBasis::haar;
  std::size_t levels = 3;
  std::vector<std::size_t> support;  // projection: sorted coordinate subset
  SmoothingParams smooth;
};

class DenoiserHandle;
using DenoiserPtr = std::shared_ptr<const DenoiserHandle>;

// Immutable description of one denoiser family member. apply() is
// reentrant; stochastic handles (smoothed) are keyed by call_key so that
// repeated calls with the same key give the same output.
class DenoiserHandle {
 public:
  DenoiserHandle() = default;
  DenoiserHandle(DenoiserKind kind, DenoiserParams params, Tuning tuning,
                 TuningTable table = {});

  static DenoiserHandle identity();
  static DenoiserHandle zero();
  static DenoiserHandle projection(std::vector<std::size_t> support);
  static DenoiserHandle soft(double value, Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle hard(double value, Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle block_soft(double value, std::size_t block_len,
                                   Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle svt(double value, Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle gaussian(double width, Tuning t = Tuning::fixed);
  static DenoiserHandle bilateral(double h, BilateralGeometry g,
                                  Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle nlm(double h, NlmGeometry g, Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle nlm_table(TuningTable table, NlmGeometry g);
  static DenoiserHandle wavelet(double value, WaveletBasis basis, ThresholdMode mode,
                                std::size_t levels, Tuning t = Tuning::scale_with_sigma);
  static DenoiserHandle smoothed(const DenoiserHandle& inner, SmoothingParams s);

  DenoiserKind kind() const { return kind_; }
  Tuning tuning() const { return tuning_; }
  const DenoiserParams& params() const { return params_; }
  const TuningTable& table() const { return table_; }
  const DenoiserHandle& inner() const;
  bool is_thresholding() const;
  bool is_stochastic() const { return kind_ == DenoiserKind::smoothed; }

  // The concrete parameter (tau, lambda, h, width) used at sigma_hat.
  double resolve(double sigma_hat) const;
  // Same handle with a new primary value (used by greedy tuning).
  DenoiserHandle with_value(double value) const;

  Signal apply(const Signal& noisy, double sigma_hat, std::uint64_t call_key = 0,
               Exec exec = Exec::parallel) const;

  std::string describe() const;

 private:
  DenoiserKind kind_ = DenoiserKind::identity;
  DenoiserParams params_;
  Tuning tuning_ = Tuning::fixed;
  TuningTable table_;
  DenoiserPtr inner_;
};

// Concrete maps.
Vec soft_threshold(std::span<const double> v, double tau);
Vec hard_threshold(std::span<const double> v, double tau);
Vec block_soft_threshold(std::span<const double> v, double tau, std::size_t block_len);
// Square n x n row-major matrix.
Vec svt(std::span<const double> m, std::size_t n, double lambda);
Signal gaussian_filter(const Signal& img, double width, Exec e = Exec::parallel);
Signal bilateral_filter(const Signal& img, double h, const BilateralGeometry& g,
                        Exec e = Exec::parallel);
Signal nlm_filter(const Signal& img, double h, const NlmGeometry& g,
                  Exec e = Exec::parallel);

// Default geometries used by the experiments.
NlmGeometry nlm_geometry_1d();   // patch 11, window 21
NlmGeometry nlm_geometry_2d();   // patch 5x5, window 11x11

}  // namespace damp

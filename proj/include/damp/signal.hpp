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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace damp {

using Vec = std::vector<double>;

// A real vector, optionally tagged as a row-major height x width image.
struct Signal {
  Vec values;
  std::size_t height = 0;  // 0 means flat layout
  std::size_t width = 0;

  Signal() = default;
  explicit Signal(Vec v) : values(std::move(v)) {}
  Signal(Vec v, std::size_t h, std::size_t w);

  static Signal zeros_like(const Signal& s);

  std::size_t size() const { return values.size(); }
  bool is_grid() const { return height != 0; }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  // Same layout, new values.
  Signal with_values(Vec v) const;
  void check_finite() const;
};

enum class SignalKind {
  k_sparse_binary,
  k_sparse_gaussian,
  piecewise_constant,
  lp_ball,
  image_file,
};

struct SignalClass {
  SignalKind kind = SignalKind::k_sparse_gaussian;
  std::size_t k = 0;          // sparsity
  double p = 1.0;             // lp_ball exponent
  std::size_t segments = 1;   // piecewise_constant
  std::string path;           // image_file
};

SignalKind parse_signal_kind(const std::string& name);
std::string to_string(SignalKind kind);

// Pure function of (cls, n, seed). For image_file, n must be 0 or the pixel
// count of the file.
Signal gen_signal(const SignalClass& cls, std::size_t n, std::uint64_t seed);

double mse(std::span<const double> a, std::span<const double> b);
double mse(const Signal& a, const Signal& b);

// Returned when the estimate equals the reference exactly.
inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();
double psnr(const Signal& estimate, const Signal& reference, double peak);
double psnr_from_mse(double mse_value, double peak);

double norm2(std::span<const double> v);
double norm2_sq(std::span<const double> v);
double norm_inf(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_nonzero(std::span<const double> v);

}  // namespace damp

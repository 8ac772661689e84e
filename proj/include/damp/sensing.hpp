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

#include "damp/kernels.hpp"
#include "damp/signal.hpp"

namespace damp {

enum class MatrixScaling {
  column_normalized,  // every column has unit l2 norm
  raw,                // i.i.d. N(0, 1)
  inv_sqrt_m,         // i.i.d. N(0, 1/m)
};

// Dense row-major m x n matrix. Immutable after construction.
class MeasurementMatrix {
 public:
  MeasurementMatrix() = default;
  MeasurementMatrix(std::size_t m, std::size_t n, Vec entries, std::uint64_t seed = 0,
                    MatrixScaling scaling = MatrixScaling::raw);

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  MatrixScaling scaling() const { return scaling_; }
  bool column_normalized() const { return scaling_ == MatrixScaling::column_normalized; }
  double delta() const { return static_cast<double>(m_) / static_cast<double>(n_); }
  std::span<const double> entries() const { return a_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Vec apply(std::span<const double> v, Exec e = Exec::parallel) const;
  Vec apply_adjoint(std::span<const double> u, Exec e = Exec::parallel) const;
  void apply_into(std::span<const double> v, std::span<double> out,
                  Exec e = Exec::parallel) const;
  void apply_adjoint_into(std::span<const double> u, std::span<double> out,
                          Exec e = Exec::parallel) const;
  double column_norm(std::size_t j) const;

 private:
  std::size_t m_ = 0, n_ = 0;
  Vec a_;
  std::uint64_t seed_ = 0;
  MatrixScaling scaling_ = MatrixScaling::raw;
};

struct Measurement {
  Vec y;
  double sigma_w = 0.0;
  std::uint64_t noise_seed = 0;
};

MeasurementMatrix gen_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                             MatrixScaling scaling);
MeasurementMatrix gen_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                             bool normalize = true);

Measurement measure(const MeasurementMatrix& a, const Signal& x, double sigma_w,
                    std::uint64_t noise_seed);

// "DAMPMAT1", m, n as u64 little-endian, then m*n f64 little-endian row-major.
void write_matrix(const std::string& path, const MeasurementMatrix& a);
MeasurementMatrix read_matrix(const std::string& path);

}  // namespace damp

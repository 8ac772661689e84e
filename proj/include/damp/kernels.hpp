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
#include <span>
#include <vector>

// Hot loops, each in two flavours: a plain serial reference and an OpenMP
// version. Every output element is computed by one thread in the same
// order as the serial code, so both produce bitwise identical results for
// any thread count.

namespace damp {

enum class Exec { serial, parallel };

struct NlmGeometry {
  std::size_t patch_radius = 2;
  std::size_t window_radius = 5;
  bool mean_distance = true;  // false: plain sum of squared differences
};

struct BilateralGeometry {
  std::size_t window_radius = 3;
  double spatial_sigma = 1.5;
  bool range_only = false;
};

namespace kernels {

// Symmetric reflection with edge repetition: -1 -> 0, n -> n-1.
inline std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
  const std::ptrdiff_t period = 2 * n;
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

// Truncated at +-ceil(3 width), normalized to sum 1.
std::vector<double> gaussian_kernel(double width);

namespace serial {
void gemv(std::span<const double> a, std::size_t m, std::size_t n,
          std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> a, std::size_t m, std::size_t n,
            std::span<const double> u, std::span<double> out);
void convolve_separable(std::span<const double> img, std::size_t h, std::size_t w,
                        std::span<const double> kernel, std::span<double> out);
// h = 0 means a flat (1-D) signal of length w.
void nlm(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
         const NlmGeometry& g, std::span<double> out);
void bilateral(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
               const BilateralGeometry& g, std::span<double> out);
}  // namespace serial

namespace omp {
void gemv(std::span<const double> a, std::size_t m, std::size_t n,
          std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> a, std::size_t m, std::size_t n,
            std::span<const double> u, std::span<double> out);
void convolve_separable(std::span<const double> img, std::size_t h, std::size_t w,
                        std::span<const double> kernel, std::span<double> out);
void nlm(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
         const NlmGeometry& g, std::span<double> out);
void bilateral(std::span<const double> img, std::size_t h, std::size_t w, double hpar,
               const BilateralGeometry& g, std::span<double> out);
}  // namespace omp

void gemv(Exec e, std::span<const double> a, std::size_t m, std::size_t n,
          std::span<const double> x, std::span<double> y);
void gemv_t(Exec e, std::span<const double> a, std::size_t m, std::size_t n,
            std::span<const double> u, std::span<double> out);
void convolve_separable(Exec e, std::span<const double> img, std::size_t h,
                        std::size_t w, std::span<const double> kernel,
                        std::span<double> out);
void nlm(Exec e, std::span<const double> img, std::size_t h, std::size_t w, double hpar,
         const NlmGeometry& g, std::span<double> out);
void bilateral(Exec e, std::span<const double> img, std::size_t h, std::size_t w,
               double hpar, const BilateralGeometry& g, std::span<double> out);

}  // namespace kernels
}  // namespace damp

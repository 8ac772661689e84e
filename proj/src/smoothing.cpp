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

#include "damp/smoothing.hpp"

#include <omp.h>

#include "damp/errors.hpp"
#include "damp/rng.hpp"

namespace damp {

double smoothing_width(const SmoothingParams& p, double sigma_hat) {
  return p.r_relative ? p.r * sigma_hat : p.r;
}

Signal smooth_apply(const SmoothedDenoiser& sd, const Signal& v, double sigma_hat,
                    std::uint64_t call_key, Exec exec) {
  const auto& p = sd.params;
  if (!(p.r >= 0.0)) throw ParameterError("smoothing width must be >= 0");
  if (p.samples < 1) throw ParameterError("smoothing needs at least one sample");
  const double r = smoothing_width(p, sigma_hat);
  if (r == 0.0) return sd.inner.apply(v, sigma_hat, call_key, exec);

  const std::size_t n = v.size(), M = p.samples;
  std::vector<Vec> outs(M);
  auto one = [&](std::size_t i, Exec inner_exec) {
    Rng rng(p.seed, Stream::smoothing, call_key, i);
    Signal shifted = v;
    for (auto& x : shifted.values) x += r * rng.normal();
    outs[i] = sd.inner.apply(shifted, sigma_hat, call_key, inner_exec).values;
  };
  if (exec == Exec::parallel && M > 1 && !omp_in_parallel()) {
    // Exceptions must not escape an OpenMP region; capture the first one.
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(M); ++i) {
      try {
        one(static_cast<std::size_t>(i), Exec::serial);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t i = 0; i < M; ++i) one(i, exec);
  }
  Vec acc(n, 0.0);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < n; ++j) acc[j] += outs[i][j];
  const double inv = 1.0 / static_cast<double>(M);
  for (auto& x : acc) x *= inv;
  return v.with_values(std::move(acc));
}

}  // namespace damp

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

#include <cmath>

#include "damp/denoisers.hpp"
#include "damp/rng.hpp"
#include "damp/smoothing.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace damp;

namespace {

DenoiserHandle smoothed_hard(double tau, double r, std::size_t m, std::uint64_t seed) {
  SmoothingParams p;
  p.r = r;
  p.r_relative = false;
  p.samples = m;
  p.seed = seed;
  return DenoiserHandle::smoothed(DenoiserHandle::hard(tau, Tuning::fixed), p);
}

}  // namespace

TEST_CASE("smoothing the identity adds the mean draw") {
  SmoothingParams p;
  p.r = 0.3;
  p.r_relative = false;
  p.samples = 20000;
  p.seed = 1;
  SmoothedDenoiser sd{DenoiserHandle::identity(), p};
  Rng r(2);
  Signal v(r.normals(5));
  auto o = smooth_apply(sd, v, 1.0);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(o[i] - v[i]) < 5.0 * 0.3 / std::sqrt(20000.0));
}

TEST_CASE("smoothed hard threshold at the discontinuity") {
  auto h = smoothed_hard(2.0, 0.5, 10000, 3);
  double o = h.apply(Signal(Vec{2.0}), 1.0)[0];
  CHECK(o > 0.0);
  CHECK(o < 2.0);
  CHECK(o == doctest::Approx(oracle::smoothed_hard(2.0, 2.0, 0.5)).epsilon(0.02));
}

TEST_CASE("smoothed hard threshold matches quadrature on a grid") {
  const double tau = 2.0, r = 0.5;
  const std::size_t m = 20000;
  Vec grid;
  for (int i = 0; i < 20; ++i) grid.push_back(1.0 + 2.0 * i / 19.0);
  auto out = smoothed_hard(tau, r, m, 8).apply(Signal(grid), 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid[i];
    const double mean = oracle::smoothed_hard(v, tau, r);
    const double m2 = oracle::gauss_expect([&](double z) { return std::pow(oracle::hard(v + r * z, tau), 2); },
                                           12.0, 400000);
    const double se = std::sqrt(std::max(m2 - mean * mean, 0.0) / m);
    CHECK_MESSAGE(std::abs(out[i] - mean) <= 3.0 * se + 1e-12, "v = " << v);
  }
}

TEST_CASE("vanishing width recovers the inner denoiser away from jumps") {
  Vec v{0.5, 1.0, 3.0, -4.0, -1.5};
  auto o = smoothed_hard(2.0, 1e-9, 5, 1).apply(Signal(v), 1.0);
  auto ref = hard_threshold(v, 2.0);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(o[i] - ref[i]) < 1e-8);
  SmoothingParams p;
  p.r = 0.0;
  SmoothedDenoiser sd{DenoiserHandle::hard(2.0, Tuning::fixed), p};
  CHECK(smooth_apply(sd, Signal(v), 1.0).values == ref);
}

TEST_CASE("smoothing bounds the Lipschitz ratio") {
  const double tau = 2.0, d = 1e-3;
  auto sm = smoothed_hard(tau, 0.5, 2000, 4);
  Rng r(5);
  double worst_smooth = 0.0, worst_raw = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    Vec a(100), b(100);
    for (std::size_t i = 0; i < 100; ++i) {
      a[i] = 1.0 + 2.0 * r.uniform();
      b[i] = a[i] + d * r.normal();
    }
    a[0] = tau - d;  // one pair straddles the jump
    b[0] = tau + d;
    double num = 0.0, den = 0.0, raw = 0.0;
    auto sa = sm.apply(Signal(a), 1.0, rep), sb = sm.apply(Signal(b), 1.0, rep);
    auto ha = hard_threshold(a, tau), hb = hard_threshold(b, tau);
    for (std::size_t i = 0; i < 100; ++i) {
      num += (sa[i] - sb[i]) * (sa[i] - sb[i]);
      raw += (ha[i] - hb[i]) * (ha[i] - hb[i]);
      den += (a[i] - b[i]) * (a[i] - b[i]);
    }
    worst_smooth = std::max(worst_smooth, std::sqrt(num / den));
    worst_raw = std::max(worst_raw, std::sqrt(raw / den));
  }
  CHECK(worst_smooth < 10.0);
  CHECK(worst_raw > 100.0);
}

TEST_CASE("smoothing is replayable by key") {
  auto h = smoothed_hard(1.0, 0.2, 8, 9);
  Rng r(1);
  Signal v(r.normals(64));
  CHECK(h.apply(v, 1.0, 7).values == h.apply(v, 1.0, 7, Exec::serial).values);
  CHECK(h.apply(v, 1.0, 7).values != h.apply(v, 1.0, 8).values);
  CHECK(smoothing_width(SmoothingParams{0.1, true, 10, 0}, 3.0) == doctest::Approx(0.3));
  CHECK(smoothing_width(SmoothingParams{0.1, false, 10, 0}, 3.0) == doctest::Approx(0.1));
}

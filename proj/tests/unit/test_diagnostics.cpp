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

#include "damp/diagnostics.hpp"
#include "damp/errors.hpp"
#include "damp/rng.hpp"
#include "doctest.h"

using namespace damp;

TEST_CASE("moments and AD statistic against scipy") {
  Vec v{0.3, -1.2, 2.5, 0.7, -0.1, 1.1, -0.8, 0.05, 3.0, -2.2, 0.4, 0.9};
  // scipy.stats.anderson / kurtosis / skew on the same vector
  CHECK(anderson_darling(v) == doctest::Approx(0.22313695691296154).epsilon(1e-12));
  CHECK(excess_kurtosis(v) == doctest::Approx(-0.30932816622525916).epsilon(1e-12));
  CHECK(skewness(v) == doctest::Approx(0.1441104421321052).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
}

TEST_CASE("normality report") {
  Rng r(1);
  auto v = r.normals(10000);
  auto rep = normality(v);
  CHECK(std::abs(rep.excess_kurtosis) < 0.15);
  CHECK(std::abs(rep.mean) < 0.05);
  CHECK(rep.std_dev == doctest::Approx(1.0).epsilon(0.03));
  REQUIRE(rep.qq.size() == 10000);
  for (std::size_t i = 1; i < rep.qq.size(); ++i) {
    CHECK(rep.qq[i].first > rep.qq[i - 1].first);
    CHECK(rep.qq[i].second >= rep.qq[i - 1].second);
  }
  CHECK(rep.qq[0].first == doctest::Approx(normal_quantile(0.5 / 10000)));

  CHECK_THROWS_AS(normality(Vec(20, 3.0)), DegenerateInputError);
  CHECK_THROWS_AS(normality(Vec{1, 2, 3}), ParameterError);

  Vec lap(20000);
  for (auto& x : lap) {
    double u = r.uniform() - 0.5;
    x = -std::copysign(std::log(1.0 - 2.0 * std::abs(u)), u);
  }
  const double k = excess_kurtosis(lap);
  CHECK(k > 1.0);
  CHECK(k == doctest::Approx(3.0).epsilon(0.2));
}

TEST_CASE("gaussian input passes the self-calibrated thresholds at the stated rate") {
  // |excess kurtosis| < 0.15 at n = 10^4 in at least 95% of seeds, and the
  // AD test at its 5% critical value rejects about 5% of seeds.
  int kurt_ok = 0, ad_reject = 0;
  const int seeds = 200;
  const std::size_t n = 10000;
  for (int s = 0; s < seeds; ++s) {
    Rng r(5000 + s);
    auto v = r.normals(n);
    auto rep = normality(v);
    if (std::abs(rep.excess_kurtosis) < 0.15) ++kurt_ok;
    const double a2 = rep.anderson_darling * (1.0 + 0.75 / n + 2.25 / (double(n) * n));
    if (a2 > 0.752) ++ad_reject;
  }
  CHECK(kurt_ok >= 190);
  CHECK(ad_reject >= 2);
  CHECK(ad_reject <= 20);
}

TEST_CASE("effective noise") {
  const std::size_t m = 30, n = 60;
  auto a = gen_matrix(m, n, 2);
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 5}, n, 3);
  auto meas = measure(a, x, 0.0, 1);
  RecoveryState s0{Signal::zeros_like(x), meas.y, 0.0, 0};
  auto e = effective_noise(s0, a, x, "amp");
  auto ata = a.apply_adjoint(a.apply(x.values));
  for (std::size_t i = 0; i < n; ++i) CHECK(e.v[i] == doctest::Approx(ata[i] - x[i]).epsilon(1e-12));
  CHECK(e.iter == 0);
  CHECK(e.algorithm == "amp");

  RecoveryState done{x, Vec(m, 0.0), 0.0, 7};
  auto e2 = effective_noise(done, a, x);
  for (double v : e2.v) CHECK(v == 0.0);
  CHECK(e2.iter == 7);
  CHECK_THROWS_AS(effective_noise(done, a, Signal(Vec(n + 1, 0.0))), DimensionError);
}

TEST_CASE("trace comparison") {
  Vec a{1.0, 0.5, 0.25, 0.125};
  auto same = compare_traces(a, a);
  for (double e : same.rel_error) CHECK(e == 0.0);
  CHECK(same.max_rel_error == 0.0);

  auto c = compare_traces(Vec{1.1, 0.5, 0.3}, a);
  CHECK(c.rel_error.size() == 3);
  CHECK(c.rel_error[0] == doctest::Approx(0.1));
  CHECK(c.terminal_rel_error == doctest::Approx(0.2));
  CHECK(c.max_rel_error == doctest::Approx(0.2));
  CHECK(compare_traces(Vec{1.1, 0.5, 0.3}, a, 1).max_rel_error == doctest::Approx(0.2));
  CHECK(compare_traces(Vec{2.0, 0.5}, a, 1).max_rel_error == 0.0);

  auto csv = qq_csv(normality(Vec{1, 2, 3, 4, 5, 6, 7, 9}));
  CHECK(csv.rfind("theoretical,empirical\n", 0) == 0);
}

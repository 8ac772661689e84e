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
#include "damp/recovery.hpp"
#include "damp/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace damp;

namespace {

RecoveryConfig amp_soft(double tau, std::size_t iters) {
  RecoveryConfig c;
  c.algorithm = Algorithm::amp;
  c.denoiser = DenoiserHandle::soft(tau);
  c.onsager = OnsagerMode::exact;
  c.max_iters = iters;
  return c;
}

}  // namespace

TEST_CASE("zero signal without noise stays at the origin") {
  auto a = gen_matrix(40, 100, 1);
  Signal x(Vec(100, 0.0));
  auto meas = measure(a, x, 0.0, 2);
  for (auto alg : {Algorithm::ist, Algorithm::amp, Algorithm::dit, Algorithm::damp}) {
    RecoveryConfig c;
    c.algorithm = alg;
    c.denoiser = alg == Algorithm::ist || alg == Algorithm::amp ? DenoiserHandle::soft(1.0)
                                                                : DenoiserHandle::nlm(1.5, nlm_geometry_1d());
    c.onsager = alg == Algorithm::ist || alg == Algorithm::dit ? OnsagerMode::none
                                                               : OnsagerMode::monte_carlo;
    c.max_iters = 5;
    auto tr = run_recovery(meas, a, c, &x);
    CHECK_FALSE(tr.aborted());
    for (double v : tr.estimate().values) CHECK(v == 0.0);
    CHECK(tr.records.size() == 6);
  }
}

TEST_CASE("soft-threshold AMP equals a hand-written AMP loop bit for bit") {
  const std::size_t n = 400, m = 200;
  auto a = gen_matrix(m, n, 3);
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 30}, n, 4);
  auto meas = measure(a, x, 0.01, 5);
  const double tau = 1.4;
  const std::size_t iters = 12;
  auto tr = run_recovery(meas, a, amp_soft(tau, iters), &x);

  Vec A(a.entries().begin(), a.entries().end());
  Vec xt(n, 0.0), z = meas.y;
  for (std::size_t t = 0; t < iters; ++t) {
    double ss = 0.0;
    for (double v : z) ss += v * v;
    const double sig = std::sqrt(ss) / std::sqrt(static_cast<double>(m));
    auto atz = oracle::matvec_t(A, m, n, z);
    Vec r(n), xn(n);
    double active = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = xt[i] + atz[i];
      xn[i] = oracle::soft(r[i], tau * sig);
      if (std::abs(r[i]) > tau * sig) active += 1.0;
    }
    auto ax = oracle::matvec(A, m, n, xn);
    Vec zn(m);
    for (std::size_t i = 0; i < m; ++i) zn[i] = meas.y[i] - ax[i] + z[i] * (active / m);
    xt = xn;
    z = zn;
  }
  CHECK(tr.estimate().values == xt);
  CHECK(tr.final_state.z == z);
}

TEST_CASE("onsager none in a damp config reproduces dit at oversmooth factor 1") {
  const std::size_t n = 256, m = 128;
  auto a = gen_matrix(m, n, 7);
  SignalClass pc{SignalKind::piecewise_constant};
  pc.segments = 6;
  auto x = gen_signal(pc, n, 8);
  auto meas = measure(a, x, 0.0, 9);
  RecoveryConfig c;
  c.algorithm = Algorithm::damp;
  c.denoiser = DenoiserHandle::nlm(1.5, nlm_geometry_1d());
  c.onsager = OnsagerMode::none;
  c.max_iters = 8;
  c.seed = 4;
  auto t1 = run_recovery(meas, a, c, &x);
  c.algorithm = Algorithm::dit;
  c.oversmooth_factor = 1.0;
  auto t2 = run_recovery(meas, a, c, &x);
  CHECK(t1.estimate().values == t2.estimate().values);
  CHECK(t1.mse_curve() == t2.mse_curve());
}

TEST_CASE("config validation") {
  RecoveryConfig c;
  c.algorithm = Algorithm::amp;
  c.denoiser = DenoiserHandle::nlm(1.0, nlm_geometry_1d());
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c.algorithm = Algorithm::ist;
  c.denoiser = DenoiserHandle::soft(1.0);
  c.onsager = OnsagerMode::exact;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c.onsager = OnsagerMode::none;
  CHECK_NOTHROW(c.validate());
  c.algorithm = Algorithm::dit;
  c.onsager = OnsagerMode::monte_carlo;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  CHECK(parse_algorithm("damp") == Algorithm::damp);
  CHECK_THROWS_AS(parse_algorithm("omp"), ParameterError);
  auto a = gen_matrix(10, 20, 1);
  Measurement bad{Vec(9, 0.0), 0.0, 0};
  CHECK_THROWS_AS(run_recovery(bad, a, amp_soft(1.0, 2)), DimensionError);
}

TEST_CASE("onsager term") {
  CHECK(onsager_term(Vec{1, 2, 3}, 0.0, 3) == Vec{0, 0, 0});
  CHECK(onsager_term(Vec(4, 1.0), 4.0, 4) == Vec(4, 1.0));
}

TEST_CASE("AMP recovers a sparse signal at n = 5000") {
  const std::size_t n = 5000, m = 2500;
  auto a = gen_matrix(m, n, 11);
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 500}, n, 12);
  auto meas = measure(a, x, 0.0, 13);
  auto tr = run_recovery(meas, a, amp_soft(1.4, 30), &x);
  CHECK(tr.records.back().mse < 1e-6);
  CHECK(tr.records.size() == 31);
  CHECK(tr.records[1].div.has_value());
  CHECK(tr.records[1].div->method == DivergenceMethod::exact);

  // sigma_hat^2 tracks mse / delta once the transient is gone
  const double delta = 0.5;
  for (std::size_t t = 3; t < 12; ++t) {
    const double s2 = tr.records[t].sigma_hat * tr.records[t].sigma_hat;
    CHECK(s2 == doctest::Approx(tr.records[t].mse / delta).epsilon(0.15));
  }
}

TEST_CASE("Onsager correction keeps the effective noise Gaussian") {
  const std::size_t n = 4000, m = 2000;
  auto a = gen_matrix(m, n, 21);
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 400}, n, 22);
  auto meas = measure(a, x, 0.0, 23);
  auto amp = amp_soft(1.4, 6);
  amp.snapshot_iters = {5};
  auto ist = amp;
  ist.algorithm = Algorithm::ist;
  ist.onsager = OnsagerMode::none;
  auto ta = run_recovery(meas, a, amp, &x);
  auto ti = run_recovery(meas, a, ist, &x);
  REQUIRE(ta.snapshots.size() == 1);
  REQUIRE(ti.snapshots.size() == 1);
  CHECK(ta.snapshots[0].iter == 5);
  const double ka = std::abs(excess_kurtosis(ta.snapshots[0].v));
  const double ki = std::abs(excess_kurtosis(ti.snapshots[0].v));
  CHECK(ka < 0.3);
  CHECK(ki > ka);
}

TEST_CASE("non-finite iterates abort with a partial trace") {
  auto a = gen_matrix(20, 40, 1);
  Measurement meas{Vec(20, 1.0), 0.0, 0};
  meas.y[3] = INFINITY;
  auto tr = run_recovery(meas, a, amp_soft(1.0, 10));
  CHECK(tr.aborted());
  CHECK(tr.abort == AbortKind::numerical);
  CHECK(tr.records.size() < 11);
  CHECK(tr.abort_reason.find("iteration") != std::string::npos);
}

TEST_CASE("svt D-AMP on a square layout with an all-zero residual") {
  // Every singular value is zero, so nothing is active and the exact
  // divergence is 0 rather than a degenerate-spectrum failure.
  auto a = gen_matrix(8, 16, 2);
  Signal x(Vec(16, 0.0), 4, 4);
  auto meas = measure(a, x, 0.0, 1);
  RecoveryConfig c;
  c.denoiser = DenoiserHandle::svt(1.0);
  c.onsager = OnsagerMode::exact;
  c.max_iters = 3;
  auto tr = run_recovery(meas, a, c, &x);
  CHECK_FALSE(tr.aborted());
}

TEST_CASE("exhaustive B_k recovery") {
  // n = 4, k = 1 by hand
  auto a4 = gen_matrix(2, 4, 5);
  Signal e2(Vec{0, 0, 1, 0});
  auto m4 = measure(a4, e2, 0.0, 1);
  CHECK(exhaustive_bk_recover(m4, a4, 1).values == e2.values);
  CHECK(exhaustive_bk_recover(m4, a4, 0).values == Vec(4, 0.0));

  // one measurement, n = 16, k = 3
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto a = gen_matrix(1, 16, s, false);
    Vec xv(16, 0.0);
    xv[2] = xv[7] = xv[13] = 1.0;
    Signal xo(xv);
    auto meas = measure(a, xo, 0.0, s);
    CHECK(exhaustive_bk_recover(meas, a, 3).values == xv);
  }

  CHECK(binomial(16, 3) == 560.0);
  CHECK(binomial(5, 7) == 0.0);
  auto big = gen_matrix(2, 60, 1);
  Measurement y{Vec(2, 0.0), 0.0, 0};
  try {
    exhaustive_bk_recover(y, big, 10);
    CHECK(false);
  } catch (const BudgetError& e) {
    CHECK(e.requested() == binomial(60, 10));
    CHECK(e.budget() == 1e6);
  }
}

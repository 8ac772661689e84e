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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "damp/errors.hpp"
#include "damp/rng.hpp"
#include "damp/state_evolution.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace damp;

namespace {

SeOptions exact_opts() {
  SeOptions o;
  o.method = SeMethod::exact;
  return o;
}

// Sparse signal with projection onto its support.
struct ProjCase {
  Signal x;
  DenoiserHandle h;
  std::size_t k;
};

ProjCase proj_case(std::size_t n, std::size_t k, std::uint64_t seed) {
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, k}, n, seed);
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != 0.0) supp.push_back(i);
  return {x, DenoiserHandle::projection(supp), k};
}

std::vector<std::size_t> top_k(const Signal& x, std::size_t k) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                    [&](auto a, auto b) { return std::abs(x[a]) > std::abs(x[b]); });
  idx.resize(k);
  return idx;
}

}  // namespace

TEST_CASE("projection trace is geometric") {
  auto pc = proj_case(1000, 100, 1);
  const double delta = 0.4;
  auto tr = se_trace(pc.h, pc.x, delta, 0.0, 15, exact_opts());
  CHECK(tr.mc_trials == 0);
  const double ratio = 0.1 / delta;
  for (std::size_t t = 0; t <= 15; ++t)
    CHECK(std::abs(tr.theta[t] - std::pow(ratio, t) * tr.theta[0]) <= 1e-12 * tr.theta[0]);
  // MC path agrees in mean
  SeOptions mc;
  mc.mc_trials = 400;
  mc.seed = 3;
  double th = se_step(pc.h, pc.x, 2.0, delta, 0.01, mc);
  double pred = 0.1 * (2.0 / delta + 0.01);
  CHECK(th == doctest::Approx(pred).epsilon(0.02));
  CHECK(se_step(pc.h, pc.x, 2.0, delta, 0.01, exact_opts()) == doctest::Approx(pred).epsilon(1e-12));
  // delta < k/n grows
  auto up = se_trace(pc.h, pc.x, 0.05, 0.0, 5, exact_opts());
  CHECK(up.theta.back() > up.theta.front());
}

TEST_CASE("zero-noise fixed point") {
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 10}, 200, 2);
  CHECK(se_step(DenoiserHandle::soft(1.5), x, 0.0, 0.5, 0.0, exact_opts()) == 0.0);
  SeOptions mc;
  mc.mc_trials = 10;
  CHECK(se_step(DenoiserHandle::soft(1.5), x, 0.0, 0.5, 0.0, mc) == 0.0);
  CHECK(se_step(DenoiserHandle::hard(2.0), x, 0.0, 0.5, 0.0, mc) == 0.0);
}

TEST_CASE("Example 2 large-amplitude ratio") {
  const std::size_t n = 1000, k = 50;
  Vec xv(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) xv[i] = 1e7;
  Signal x(xv);
  const double tau = 1.2, sigma = 0.7;
  const double rho = static_cast<double>(k) / n;
  const double pred = (1.0 + tau * tau) * rho + (1.0 - rho) * soft_null_second_moment(tau);
  CHECK(soft_sparse_risk_ratio(rho, tau) == doctest::Approx(pred).epsilon(1e-14));
  CHECK(closed_form_risk(DenoiserHandle::soft(tau), x, sigma) / (sigma * sigma) ==
        doctest::Approx(pred).epsilon(1e-10));
}

TEST_CASE("fixed point with measurement noise") {
  auto pc = proj_case(500, 50, 4);
  const double delta = 0.3, w2 = 0.02, kappa = 0.1;
  auto fp = se_fixed_point(pc.h, pc.x, delta, w2, 1e-12, 2000, exact_opts());
  CHECK(fp.converged);
  const double want = kappa * w2 / (1.0 - kappa / delta);
  CHECK(fp.theta == doctest::Approx(want).epsilon(1e-9));
  CHECK(noise_sensitivity_bound(kappa, 0.0, delta, w2) == doctest::Approx(want).epsilon(1e-14));
  CHECK(noise_sensitivity_bound(kappa, 0.0, delta, 0.0) == 0.0);
  CHECK_THROWS_AS(noise_sensitivity_bound(0.5, 0.0, 0.4, 0.1), ParameterError);

  auto fp0 = se_fixed_point(pc.h, pc.x, delta, 0.0, 1e-8, 2000, exact_opts());
  CHECK(fp0.theta < 1e-8 * norm2_sq(pc.x.values) / 500.0);
}

TEST_CASE("estimate_level for a projection") {
  auto pc = proj_case(500, 50, 5);
  SeOptions mc;
  mc.mc_trials = 400;
  mc.seed = 1;
  Vec grid{0.01, 0.03, 0.1, 0.3, 1.0, 3.0};
  auto lv = estimate_level(pc.h, pc.x, grid, mc);
  double max_rel_se = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    max_rel_se = std::max(max_rel_se, lv.std_error[i] / (grid[i] * grid[i]));
  CHECK(std::abs(lv.kappa - 0.1) < 4.0 * max_rel_se);
  CHECK(lv.bias_B == 0.0);
  auto ex = estimate_level(pc.h, pc.x, grid, exact_opts());
  CHECK(ex.kappa == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ex.bias_B == 0.0);
  CHECK(ex.monotone);
}

TEST_CASE("oracle top-k on an lp ball is near proper") {
  const std::size_t n = 1000, k = 20;
  const double p = 0.7;
  SignalClass c{SignalKind::lp_ball};
  c.p = p;
  auto x = gen_signal(c, n, 6);
  auto h = DenoiserHandle::projection(top_k(x, k));
  Vec grid{1e-4, 1e-3, 0.003, 0.01, 0.03, 0.1};
  auto lv = estimate_level(h, x, grid, exact_opts());
  const double bound = std::pow(static_cast<double>(k), 1.0 - 2.0 / p) / (n * (2.0 / p - 1.0));
  CHECK(lv.bias_B > 0.0);
  CHECK(lv.bias_B <= bound);
  CHECK(lv.kappa == doctest::Approx(static_cast<double>(k) / n).epsilon(1e-9));

  // The fixed point stays below B / (1 - kappa / delta)
  const double delta = 0.1;
  auto fp = se_fixed_point(h, x, delta, 0.0, 1e-12, 5000, exact_opts());
  CHECK(fp.theta <= noise_sensitivity_bound(lv.kappa, lv.bias_B, delta, 0.0) * (1.0 + 1e-9));
  CHECK(fp.theta <= lv.bias_B / (delta - lv.kappa));
}

TEST_CASE("level of tuned soft thresholding grows with sparsity") {
  const std::size_t n = 2000;
  Vec grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  double prev = 0.0;
  for (double rho : {0.05, 0.1, 0.2, 0.3}) {
    auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, static_cast<std::size_t>(rho * n)}, n, 7);
    double best = INFINITY;
    for (double tau = 0.6; tau < 3.0; tau += 0.1)
      best = std::min(best, estimate_level(DenoiserHandle::soft(tau), x, grid, exact_opts()).kappa);
    CHECK(best > prev);
    CHECK(best < 1.0);
    prev = best;
  }
}

TEST_CASE("delta_star") {
  auto pc = proj_case(400, 80, 8);
  DeltaStarOptions d;
  CHECK(delta_star(pc.h, pc.x, d, exact_opts()) == doctest::Approx(0.2).epsilon(0.01));

  const std::size_t n = 2000;
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 200}, n, 9);
  auto h = DenoiserHandle::soft(1.4);
  const double ds = delta_star(h, x, d, exact_opts());
  auto lv = estimate_level(h, x, Vec{1e-4, 1e-3, 1e-2, 0.1, 1.0}, exact_opts());
  CHECK(ds == doctest::Approx(lv.kappa).epsilon(0.02));

  Signal zero(Vec(100, 0.0));
  CHECK(delta_star(DenoiserHandle::soft(1.4), zero, d, exact_opts()) == d.lo);
}

TEST_CASE("SE contracts at rate kappa / delta") {
  const std::size_t n = 2000;
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 100}, n, 10);
  auto h = DenoiserHandle::soft(1.5);
  auto lv = estimate_level(h, x, Vec{1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}, exact_opts());
  REQUIRE(lv.bias_B == 0.0);
  for (double delta : {lv.kappa * 1.2, 0.5, 0.8}) {
    auto tr = se_trace(h, x, delta, 0.0, 25, exact_opts());
    for (std::size_t t = 0; t + 1 < tr.theta.size(); ++t)
      CHECK(tr.theta[t + 1] <= (lv.kappa / delta) * tr.theta[t] * (1.0 + 1e-9));
  }
}

TEST_CASE("final theta is monotone in delta") {
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 150}, 1000, 11);
  double prev = INFINITY;
  for (double delta = 0.1; delta < 0.95; delta += 0.05) {
    auto tr = se_trace(DenoiserHandle::soft(1.3), x, delta, 0.001, 20, exact_opts());
    CHECK(tr.theta.back() <= prev * (1.0 + 1e-12));
    prev = tr.theta.back();
  }
}

TEST_CASE("MC variance of se_step scales as 1/trials") {
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 20}, 200, 12);
  auto h = DenoiserHandle::soft(1.5);
  auto var_at = [&](std::size_t trials) {
    double s = 0.0, s2 = 0.0;
    const int seeds = 200;
    for (int sd = 0; sd < seeds; ++sd) {
      SeOptions o;
      o.mc_trials = trials;
      o.seed = 1000 + sd;
      double v = se_step(h, x, 0.5, 0.5, 0.0, o);
      s += v;
      s2 += v * v;
    }
    double m = s / seeds;
    return (s2 / seeds - m * m) * seeds / (seeds - 1);
  };
  const double ratio = var_at(10) / var_at(40);
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.5);
}

TEST_CASE("greedy tuning") {
  auto x = gen_signal(SignalClass{SignalKind::k_sparse_gaussian, 100}, 1000, 13);
  auto fam = DenoiserHandle::soft(1.0);
  Vec grid{0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.5};
  const double delta = 0.35, w2 = 1e-4;
  auto g = greedy_tune(fam, x, delta, w2, 15, grid, exact_opts());
  CHECK(g.params.size() == 15);
  for (double tau : grid) {
    auto tr = se_trace(fam.with_value(tau), x, delta, w2, 15, exact_opts());
    CHECK(g.trace.theta.back() <= tr.theta.back() * (1.0 + 1e-12));
  }
  auto single = greedy_tune(fam, x, delta, w2, 15, Vec{1.4}, exact_opts());
  CHECK(single.trace.theta == se_trace(fam.with_value(1.4), x, delta, w2, 15, exact_opts()).theta);

  SeOptions mc;
  mc.mc_trials = 50;
  mc.seed = 2;
  auto gm = greedy_tune(fam, x, delta, w2, 10, grid, mc);
  double best_fixed = INFINITY;
  for (double tau : grid)
    best_fixed = std::min(best_fixed, se_trace(fam.with_value(tau), x, delta, w2, 10, mc).theta.back());
  CHECK(gm.trace.theta.back() <= best_fixed * 1.05);
}

TEST_CASE("binary sparse minimax level") {
  Vec grid;
  for (double s = 0.05; s < 20.0; s *= 1.25) grid.push_back(s);
  CHECK(kappa_mm_binary_sparse(1e-6, grid) < 1e-3);
  CHECK(binary_sparse_mmse(0.1, 100.0) / 1e4 < 1e-5);
  CHECK(binary_sparse_mmse(0.1, 0.01) / 1e-4 < 1e-3);
  const double k1 = kappa_mm_binary_sparse(0.1, grid);
  CHECK(k1 > 0.0);
  CHECK(k1 < 1.0);
  CHECK(kappa_mm_binary_sparse(0.2, grid) > k1);

  // plain MC of the posterior-mean risk at rho = 0.1, sigma = 1
  Rng r(17);
  const double rho = 0.1, sigma = 1.0;
  const int N = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = r.uniform() < rho ? 1.0 : 0.0;
    const double y = x + sigma * r.normal();
    const double a = rho * oracle::npdf((y - 1.0) / sigma);
    const double b = (1.0 - rho) * oracle::npdf(y / sigma);
    const double e = a / (a + b) - x;
    s += e * e;
    s2 += e * e * e * e;
  }
  const double mean = s / N;
  const double se = std::sqrt((s2 / N - mean * mean) / N);
  CHECK(std::abs(binary_sparse_mmse(rho, sigma) - mean) < 3.0 * se);
  CHECK_THROWS_AS(binary_sparse_mmse(1.5, 1.0), ParameterError);
}

TEST_CASE("default trial ramp") {
  CHECK(default_se_trials(500) == 400);
  CHECK(default_se_trials(1000) == 400);
  CHECK(default_se_trials(10000) == 20);
  CHECK(default_se_trials(100000) == 20);
  auto mid = default_se_trials(5000);
  CHECK(mid < 400);
  CHECK(mid > 20);
}

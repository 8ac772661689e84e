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

// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "damp/denoisers.hpp"
#include "damp/divergence.hpp"
#include "damp/kernels.hpp"
#include "damp/rng.hpp"

using namespace damp;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "omp" : "serial"); }

void BM_gemv(benchmark::State& s) {
  const std::size_t m = 2000, n = 5000;
  Rng r(1);
  auto a = r.normals(m * n);
  auto x = r.normals(n);
  Vec y(m);
  for (auto _ : s) {
    kernels::gemv(exec_of(s), a, m, n, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  label(s);
}

void BM_gemv_t(benchmark::State& s) {
  const std::size_t m = 2000, n = 5000;
  Rng r(2);
  auto a = r.normals(m * n);
  auto u = r.normals(m);
  Vec out(n);
  for (auto _ : s) {
    kernels::gemv_t(exec_of(s), a, m, n, u, out);
    benchmark::DoNotOptimize(out.data());
  }
  label(s);
}

void BM_nlm_2d(benchmark::State& s) {
  const std::size_t h = 128, w = 128;
  Rng r(3);
  auto img = r.normals(h * w, 20.0);
  Vec out(h * w);
  for (auto _ : s) {
    kernels::nlm(exec_of(s), img, h, w, 20.0, nlm_geometry_2d(), out);
    benchmark::DoNotOptimize(out.data());
  }
  label(s);
}

void BM_nlm_1d(benchmark::State& s) {
  const std::size_t n = 4096;
  Rng r(4);
  auto v = r.normals(n);
  Vec out(n);
  for (auto _ : s) {
    kernels::nlm(exec_of(s), v, 0, n, 1.5, nlm_geometry_1d(), out);
    benchmark::DoNotOptimize(out.data());
  }
  label(s);
}

void BM_bilateral(benchmark::State& s) {
  const std::size_t h = 128, w = 128;
  Rng r(5);
  auto img = r.normals(h * w, 20.0);
  Vec out(h * w);
  for (auto _ : s) {
    kernels::bilateral(exec_of(s), img, h, w, 20.0, BilateralGeometry{}, out);
    benchmark::DoNotOptimize(out.data());
  }
  label(s);
}

void BM_gaussian(benchmark::State& s) {
  const std::size_t h = 256, w = 256;
  Rng r(6);
  auto img = r.normals(h * w);
  auto k = kernels::gaussian_kernel(2.0);
  Vec out(h * w);
  for (auto _ : s) {
    kernels::convolve_separable(exec_of(s), img, h, w, k, out);
    benchmark::DoNotOptimize(out.data());
  }
  label(s);
}

void BM_mc_divergence_nlm(benchmark::State& s) {
  const std::size_t n = 1024;
  Rng r(7);
  Signal v(r.normals(n));
  auto h = DenoiserHandle::nlm(1.5, nlm_geometry_1d());
  for (auto _ : s) {
    auto d = mc_divergence(h, v, 1.0, 1e-3, 10, 1, nullptr, 0, exec_of(s));
    benchmark::DoNotOptimize(d.value);
  }
  label(s);
}

}  // namespace

BENCHMARK(BM_gemv)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gemv_t)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nlm_2d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nlm_1d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bilateral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gaussian)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_divergence_nlm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

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

#include "damp/kernels.hpp"
#include "damp/rng.hpp"
#include "damp/signal.hpp"
#include "doctest.h"

using namespace damp;

TEST_CASE("reflect repeats the edge sample") {
  using kernels::reflect;
  CHECK(reflect(-1, 5) == 0);
  CHECK(reflect(-2, 5) == 1);
  CHECK(reflect(5, 5) == 4);
  CHECK(reflect(6, 5) == 3);
  CHECK(reflect(12, 5) == 2);  // beyond one period
  CHECK(reflect(0, 1) == 0);
  CHECK(reflect(-3, 1) == 0);
}

TEST_CASE("gaussian kernel is normalized and truncated at 3 width") {
  for (double w : {0.3, 1.0, 2.5}) {
    auto k = kernels::gaussian_kernel(w);
    double s = 0.0;
    for (double v : k) s += v;
    CHECK(std::abs(s - 1.0) < 1e-12);
    CHECK(k.size() == 2 * static_cast<std::size_t>(std::ceil(3 * w)) + 1);
  }
}

TEST_CASE("serial and OpenMP image kernels agree bitwise") {
  Rng r(17);
  const std::size_t h = 23, w = 31;
  auto img = r.normals(h * w, 10.0);
  Vec a(h * w), b(h * w);

  kernels::serial::nlm(img, h, w, 7.0, NlmGeometry{2, 4, true}, a);
  kernels::omp::nlm(img, h, w, 7.0, NlmGeometry{2, 4, true}, b);
  CHECK(a == b);

  kernels::serial::nlm(img, 0, h * w, 7.0, NlmGeometry{5, 10, false}, a);
  kernels::omp::nlm(img, 0, h * w, 7.0, NlmGeometry{5, 10, false}, b);
  CHECK(a == b);

  kernels::serial::bilateral(img, h, w, 5.0, BilateralGeometry{3, 1.5, false}, a);
  kernels::omp::bilateral(img, h, w, 5.0, BilateralGeometry{3, 1.5, false}, b);
  CHECK(a == b);

  auto k = kernels::gaussian_kernel(1.3);
  kernels::serial::convolve_separable(img, h, w, k, a);
  kernels::omp::convolve_separable(img, h, w, k, b);
  CHECK(a == b);
}

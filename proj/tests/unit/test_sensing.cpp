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
#include <filesystem>

#include "damp/errors.hpp"
#include "damp/rng.hpp"
#include "damp/sensing.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace damp;

TEST_CASE("gen_matrix examples") {
  auto one = gen_matrix(1, 1, 5, true);
  CHECK(std::abs(one(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));

  auto a = gen_matrix(100, 200, 9, true);
  for (std::size_t j = 0; j < 200; ++j) CHECK(std::abs(a.column_norm(j) - 1.0) < 1e-12);
  CHECK(a.column_normalized());
  CHECK(a.delta() == 0.5);

  auto raw = gen_matrix(100, 200, 9, false);
  double s = 0.0;
  for (double v : raw.entries()) s += v;
  CHECK(std::abs(s / 20000.0) < 4.0 / std::sqrt(20000.0));

  auto scaled = gen_matrix(100, 200, 9, MatrixScaling::inv_sqrt_m);
  CHECK(scaled(3, 4) == doctest::Approx(raw(3, 4) / 10.0));

  CHECK_THROWS_AS(gen_matrix(3, 2, 0), ParameterError);
}

TEST_CASE("matrices are reproducible") {
  auto a = gen_matrix(20, 30, 4), b = gen_matrix(20, 30, 4), c = gen_matrix(20, 30, 5);
  CHECK(std::equal(a.entries().begin(), a.entries().end(), b.entries().begin()));
  CHECK_FALSE(std::equal(a.entries().begin(), a.entries().end(), c.entries().begin()));
}

TEST_CASE("measure examples") {
  auto a = gen_matrix(10, 20, 1);
  Signal zero(Vec(20, 0.0));
  auto y = measure(a, zero, 0.0, 0);
  for (double v : y.y) CHECK(v == 0.0);

  MeasurementMatrix id(1, 1, Vec{1.0});
  CHECK(measure(id, Signal(Vec{2.0}), 0.0, 0).y[0] == 2.0);

  CHECK_THROWS_AS(measure(a, Signal(Vec(19)), 0.0, 0), DimensionError);
  CHECK_THROWS_AS(measure(a, zero, -1.0, 0), ParameterError);
}

TEST_CASE("measurement noise variance over 100 seeds") {
  auto a = gen_matrix(1000, 1000, 2);
  Signal x(Vec(1000, 0.5));
  auto clean = a.apply(x.values);
  const double sw = 0.7;
  double acc = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto y = measure(a, x, sw, seed);
    double s = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) s += (y.y[i] - clean[i]) * (y.y[i] - clean[i]);
    acc += s / 1000.0;
  }
  CHECK(std::abs(acc / 100.0 - sw * sw) < 0.05 * sw * sw);
}

TEST_CASE("apply and adjoint match naive products") {
  auto a = gen_matrix(37, 301, 3);
  Rng r(1);
  auto v = r.normals(301), u = r.normals(37);
  auto y = a.apply(v), yt = a.apply_adjoint(u);
  Vec ent(a.entries().begin(), a.entries().end());
  auto y0 = oracle::matvec(ent, 37, 301, v), yt0 = oracle::matvec_t(ent, 37, 301, u);
  for (std::size_t i = 0; i < 37; ++i) CHECK(y[i] == doctest::Approx(y0[i]).epsilon(1e-12));
  for (std::size_t j = 0; j < 301; ++j) CHECK(yt[j] == doctest::Approx(yt0[j]).epsilon(1e-12));
  for (double x : a.apply(Vec(301, 0.0))) CHECK(x == 0.0);
  CHECK_THROWS_AS(a.apply(Vec(300)), DimensionError);
  CHECK_THROWS_AS(a.apply_adjoint(Vec(300)), DimensionError);
}

TEST_CASE("adjoint identity on 100 random pairs") {
  auto a = gen_matrix(60, 140, 8);
  Rng r(99);
  for (int k = 0; k < 100; ++k) {
    auto v = r.normals(140), u = r.normals(60);
    double lhs = dot(a.apply(v), u), rhs = dot(v, a.apply_adjoint(u));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("A* A e_i has unit diagonal for column-normalized A") {
  auto a = gen_matrix(50, 80, 6);
  for (std::size_t i = 0; i < 80; i += 7) {
    Vec e(80, 0.0);
    e[i] = 1.0;
    CHECK(std::abs(a.apply_adjoint(a.apply(e))[i] - 1.0) < 1e-10);
  }
}

TEST_CASE("serial and parallel products are bitwise identical") {
  auto a = gen_matrix(300, 1000, 12);
  Rng r(5);
  auto v = r.normals(1000), u = r.normals(300);
  CHECK(a.apply(v, Exec::serial) == a.apply(v, Exec::parallel));
  CHECK(a.apply_adjoint(u, Exec::serial) == a.apply_adjoint(u, Exec::parallel));
}

TEST_CASE("matrix file round trip") {
  auto dir = std::filesystem::temp_directory_path() / "damp_test_sensing";
  std::filesystem::create_directories(dir);
  auto a = gen_matrix(7, 11, 21);
  auto p = (dir / "A.bin").string();
  write_matrix(p, a);
  CHECK(std::filesystem::file_size(p) == 24 + 8 * 77);
  auto b = read_matrix(p);
  CHECK(b.rows() == 7);
  CHECK(b.cols() == 11);
  CHECK(b.column_normalized());
  CHECK(std::equal(a.entries().begin(), a.entries().end(), b.entries().begin()));
}

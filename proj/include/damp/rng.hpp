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
#include <vector>

namespace damp {

// Named substreams. Each consumer of randomness derives its own generator
// from (seed, stream, index) so adding draws in one place never shifts the
// numbers seen by another.
enum class Stream : std::uint64_t {
  matrix = 1,
  signal = 2,
  noise = 3,
  mc_divergence = 4,
  smoothing = 5,
  state_evolution = 6,
  test = 7,
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t x);

// Derive a 64-bit key for a substream. Pure function.
std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                          std::uint64_t index = 0, std::uint64_t sub = 0);

// xoshiro256** (Blackman and Vigna), seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0,
      std::uint64_t sub = 0)
      : Rng(derive_seed(seed, stream, index, sub)) {}

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_pos();
  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();
  // Uniform integer in [0, bound), rejection sampled, bound > 0.
  std::uint64_t below(std::uint64_t bound);

  void fill_normal(std::vector<double>& out, double scale = 1.0);
  std::vector<double> normals(std::size_t n, double scale = 1.0);

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace damp

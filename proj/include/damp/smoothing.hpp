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

#include "damp/denoisers.hpp"

namespace damp {

struct SmoothedDenoiser {
  DenoiserHandle inner;
  SmoothingParams params;
};

// Width actually used at sigma_hat.
double smoothing_width(const SmoothingParams& p, double sigma_hat);

// (1/M) sum_i inner(v + h_i, sigma_hat), h_i ~ N(0, r^2 I). The draws are a
// pure function of (seed, call_key), so a baseline and a perturbed input
// evaluated with the same key see the same h_i.
Signal smooth_apply(const SmoothedDenoiser& sd, const Signal& v, double sigma_hat,
                    std::uint64_t call_key = 0, Exec exec = Exec::parallel);

}  // namespace damp

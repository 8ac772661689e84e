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

#include <cstddef>
#include <string>

#include "damp/signal.hpp"

namespace damp {

enum class WaveletBasis { haar, db4 };
enum class ThresholdMode { soft, hard };

WaveletBasis parse_wavelet_basis(const std::string& name);
std::string to_string(WaveletBasis b);

// Orthonormal periodic DWT. 1-D layout: [a_L | d_L | d_{L-1} | ... | d_1].
// Length must be a multiple of 2^levels.
Vec dwt(const Vec& x, std::size_t levels, WaveletBasis basis);
Vec idwt(const Vec& c, std::size_t levels, WaveletBasis basis);

// Separable 2-D transform in Mallat layout; approximation band is the
// top-left (h/2^L) x (w/2^L) block.
Vec dwt2(const Vec& x, std::size_t h, std::size_t w, std::size_t levels,
         WaveletBasis basis);
Vec idwt2(const Vec& c, std::size_t h, std::size_t w, std::size_t levels,
          WaveletBasis basis);

// True when coefficient i of a transform of the given shape is in the
// approximation band. h == 0 means 1-D of length w.
bool is_approximation(std::size_t i, std::size_t h, std::size_t w, std::size_t levels);

// Threshold detail coefficients only. Signals whose dimensions are not
// multiples of 2^levels are symmetrically padded, processed and cropped.
Signal wavelet_threshold(const Signal& sig, double tau, WaveletBasis basis,
                         ThresholdMode mode, std::size_t levels);

// True when no padding is needed, i.e. the map is W^T eta W exactly.
bool wavelet_shape_exact(const Signal& sig, std::size_t levels);

// Jacobian trace of wavelet_threshold; requires wavelet_shape_exact.
double wavelet_divergence(const Signal& sig, double tau, WaveletBasis basis,
                          ThresholdMode mode, std::size_t levels);

}  // namespace damp

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

#include "damp/wavelet.hpp"

#include <array>
#include <cmath>
#include <span>

#include "damp/errors.hpp"
#include "damp/kernels.hpp"

namespace damp {

namespace {

constexpr double kS = 0.70710678118654752440;
constexpr std::array<double, 2> kHaar = {kS, kS};
// Daubechies 8-tap (4 vanishing moments) scaling filter.
constexpr std::array<double, 8> kDb4 = {
    0.2303778133088965,   0.7148465705529157,   0.6308807679298589,
    -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
    0.0328830116668852,   -0.010597401785069032};

std::span<const double> scaling_filter(WaveletBasis b) {
  if (b == WaveletBasis::haar) return kHaar;
  return kDb4;
}

// One analysis step on x[0..n) with stride s, writing approx then detail.
void analyze(const double* x, std::size_t n, std::size_t s, double* out,
             std::span<const double> h) {
  const std::size_t L = h.size(), half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (std::size_t t = 0; t < L; ++t) {
      double v = x[((2 * k + t) % n) * s];
      a += h[t] * v;
      d += ((t & 1) ? -h[L - 1 - t] : h[L - 1 - t]) * v;
    }
    out[k] = a;
    out[half + k] = d;
  }
}

void synthesize(const double* c, std::size_t n, double* out, std::size_t s,
                std::span<const double> h) {
  const std::size_t L = h.size(), half = n / 2;
  for (std::size_t i = 0; i < n; ++i) out[i * s] = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const double a = c[k], d = c[half + k];
    for (std::size_t t = 0; t < L; ++t) {
      double g = (t & 1) ? -h[L - 1 - t] : h[L - 1 - t];
      out[((2 * k + t) % n) * s] += h[t] * a + g * d;
    }
  }
}

void check_levels(std::size_t len, std::size_t levels, const char* what) {
  if (levels == 0) throw ParameterError("wavelet levels must be >= 1");
  if (levels >= 63 || len % (std::size_t{1} << levels) != 0)
    throw DimensionError(std::string(what) + " length " + std::to_string(len) +
                         " is not a multiple of 2^" + std::to_string(levels));
}

}  // namespace

WaveletBasis parse_wavelet_basis(const std::string& name) {
  if (name == "haar") return WaveletBasis::haar;
  if (name == "db4") return WaveletBasis::db4;
  throw ParameterError("unsupported wavelet basis '" + name + "'");
}

std::string to_string(WaveletBasis b) { return b == WaveletBasis::haar ? "haar" : "db4"; }

Vec dwt(const Vec& x, std::size_t levels, WaveletBasis basis) {
  check_levels(x.size(), levels, "signal");
  auto h = scaling_filter(basis);
  Vec c = x, tmp(x.size());
  std::size_t n = x.size();
  for (std::size_t l = 0; l < levels; ++l, n /= 2) {
    analyze(c.data(), n, 1, tmp.data(), h);
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n), c.begin());
  }
  return c;
}

Vec idwt(const Vec& c, std::size_t levels, WaveletBasis basis) {
  check_levels(c.size(), levels, "signal");
  auto h = scaling_filter(basis);
  Vec x = c, tmp(c.size());
  for (std::size_t l = levels; l-- > 0;) {
    std::size_t n = c.size() >> l;
    synthesize(x.data(), n, tmp.data(), 1, h);
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n), x.begin());
  }
  return x;
}

Vec dwt2(const Vec& x, std::size_t h, std::size_t w, std::size_t levels,
         WaveletBasis basis) {
  check_levels(h, levels, "image height");
  check_levels(w, levels, "image width");
  auto f = scaling_filter(basis);
  Vec c = x, line(std::max(h, w)), out(std::max(h, w));
  std::size_t hh = h, ww = w;
  for (std::size_t l = 0; l < levels; ++l, hh /= 2, ww /= 2) {
    for (std::size_t r = 0; r < hh; ++r) {
      analyze(c.data() + r * w, ww, 1, out.data(), f);
      std::copy(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(ww),
                c.begin() + static_cast<std::ptrdiff_t>(r * w));
    }
    for (std::size_t col = 0; col < ww; ++col) {
      analyze(c.data() + col, hh, w, out.data(), f);
      for (std::size_t r = 0; r < hh; ++r) c[r * w + col] = out[r];
    }
  }
  return c;
}

Vec idwt2(const Vec& c, std::size_t h, std::size_t w, std::size_t levels,
          WaveletBasis basis) {
  check_levels(h, levels, "image height");
  check_levels(w, levels, "image width");
  auto f = scaling_filter(basis);
  Vec x = c, line(std::max(h, w)), out(std::max(h, w));
  for (std::size_t l = levels; l-- > 0;) {
    std::size_t hh = h >> l, ww = w >> l;
    for (std::size_t col = 0; col < ww; ++col) {
      for (std::size_t r = 0; r < hh; ++r) line[r] = x[r * w + col];
      synthesize(line.data(), hh, out.data(), 1, f);
      for (std::size_t r = 0; r < hh; ++r) x[r * w + col] = out[r];
    }
    for (std::size_t r = 0; r < hh; ++r) {
      synthesize(x.data() + r * w, ww, out.data(), 1, f);
      std::copy(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(ww),
                x.begin() + static_cast<std::ptrdiff_t>(r * w));
    }
  }
  return x;
}

bool is_approximation(std::size_t i, std::size_t h, std::size_t w, std::size_t levels) {
  if (h == 0) return i < (w >> levels);
  return (i / w) < (h >> levels) && (i % w) < (w >> levels);
}

namespace {

inline double threshold(double v, double tau, ThresholdMode mode) {
  if (mode == ThresholdMode::hard) return std::abs(v) >= tau ? v : 0.0;
  double a = std::abs(v) - tau;
  return a > 0.0 ? std::copysign(a, v) : 0.0;
}

std::size_t round_up(std::size_t v, std::size_t levels) {
  std::size_t q = std::size_t{1} << levels;
  return (v + q - 1) / q * q;
}

}  // namespace

bool wavelet_shape_exact(const Signal& sig, std::size_t levels) {
  std::size_t q = std::size_t{1} << levels;
  if (sig.is_grid()) return sig.height % q == 0 && sig.width % q == 0;
  return sig.size() % q == 0;
}

Signal wavelet_threshold(const Signal& sig, double tau, WaveletBasis basis,
                         ThresholdMode mode, std::size_t levels) {
  if (!(tau >= 0.0)) throw ParameterError("wavelet threshold must be >= 0");
  if (levels == 0 || levels > 20) throw ParameterError("wavelet levels must be in [1, 20]");
  const bool grid = sig.is_grid();
  const std::size_t H = grid ? sig.height : 0;
  const std::size_t W = grid ? sig.width : sig.size();
  const std::size_t PH = grid ? round_up(H, levels) : 0;
  const std::size_t PW = round_up(W, levels);
  const std::size_t rows = grid ? PH : 1;
  Vec padded(rows * PW);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < PW; ++c) {
      std::size_t sr = grid ? static_cast<std::size_t>(kernels::reflect(
                                  static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(H)))
                            : 0;
      std::size_t sc = static_cast<std::size_t>(
          kernels::reflect(static_cast<std::ptrdiff_t>(c), static_cast<std::ptrdiff_t>(W)));
      padded[r * PW + c] = sig.values[sr * W + sc];
    }
  Vec coeffs = grid ? dwt2(padded, PH, PW, levels, basis) : dwt(padded, levels, basis);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (!is_approximation(i, PH, PW, levels)) coeffs[i] = threshold(coeffs[i], tau, mode);
  Vec rec = grid ? idwt2(coeffs, PH, PW, levels, basis) : idwt(coeffs, levels, basis);
  Vec out(sig.size());
  for (std::size_t r = 0; r < (grid ? H : 1); ++r)
    for (std::size_t c = 0; c < W; ++c) out[r * W + c] = rec[r * PW + c];
  return sig.with_values(std::move(out));
}

double wavelet_divergence(const Signal& sig, double tau, WaveletBasis basis,
                          ThresholdMode mode, std::size_t levels) {
  if (!wavelet_shape_exact(sig, levels))
    throw DimensionError("exact wavelet divergence needs dimensions divisible by 2^levels");
  const bool grid = sig.is_grid();
  Vec coeffs = grid ? dwt2(sig.values, sig.height, sig.width, levels, basis)
                    : dwt(sig.values, levels, basis);
  const std::size_t H = grid ? sig.height : 0;
  const std::size_t W = grid ? sig.width : sig.size();
  double div = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (is_approximation(i, H, W, levels)) {
      div += 1.0;
    } else if (mode == ThresholdMode::soft ? std::abs(coeffs[i]) > tau
                                           : std::abs(coeffs[i]) >= tau) {
      div += 1.0;
    }
  }
  return div;
}

}  // namespace damp

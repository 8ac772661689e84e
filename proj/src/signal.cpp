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

#include "damp/signal.hpp"

#include <algorithm>
#include <cmath>

#include "damp/errors.hpp"
#include "damp/io.hpp"
#include "damp/rng.hpp"

namespace damp {

Signal::Signal(Vec v, std::size_t h, std::size_t w)
    : values(std::move(v)), height(h), width(w) {
  if (h * w != values.size() || (h == 0) != (w == 0))
    throw LayoutError("grid " + std::to_string(h) + "x" + std::to_string(w) +
                      " does not match length " + std::to_string(values.size()));
}

Signal Signal::zeros_like(const Signal& s) {
  Signal out = s;
  std::fill(out.values.begin(), out.values.end(), 0.0);
  return out;
}

Signal Signal::with_values(Vec v) const {
  if (v.size() != values.size()) throw DimensionError("with_values: length mismatch");
  Signal out;
  out.values = std::move(v);
  out.height = height;
  out.width = width;
  return out;
}

void Signal::check_finite() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw NumericalError("non-finite signal entry at index " + std::to_string(i));
}

SignalKind parse_signal_kind(const std::string& name) {
  if (name == "k_sparse_binary") return SignalKind::k_sparse_binary;
  if (name == "k_sparse_gaussian") return SignalKind::k_sparse_gaussian;
  if (name == "piecewise_constant") return SignalKind::piecewise_constant;
  if (name == "lp_ball") return SignalKind::lp_ball;
  if (name == "image_file") return SignalKind::image_file;
  throw ParameterError("unknown signal class '" + name + "'");
}

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::k_sparse_binary: return "k_sparse_binary";
    case SignalKind::k_sparse_gaussian: return "k_sparse_gaussian";
    case SignalKind::piecewise_constant: return "piecewise_constant";
    case SignalKind::lp_ball: return "lp_ball";
    case SignalKind::image_file: return "image_file";
  }
  return "?";
}

namespace {

// k distinct indices out of [0, n), partial Fisher-Yates, returned sorted.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Signal gen_signal(const SignalClass& cls, std::size_t n, std::uint64_t seed) {
  if (cls.kind == SignalKind::image_file) {
    Signal img = read_pgm(cls.path);
    if (n != 0 && n != img.size())
      throw ParameterError("image has " + std::to_string(img.size()) +
                           " pixels, requested n=" + std::to_string(n));
    return img;
  }
  if (n < 1) throw ParameterError("n must be >= 1");
  Rng rng(seed, Stream::signal);
  Vec x(n, 0.0);
  switch (cls.kind) {
    case SignalKind::k_sparse_binary:
    case SignalKind::k_sparse_gaussian: {
      if (cls.k > n) throw ParameterError("k > n");
      auto support = sample_without_replacement(n, cls.k, rng);
      for (auto i : support) {
        if (cls.kind == SignalKind::k_sparse_binary) {
          x[i] = 1.0;
        } else {
          double a = 0.0;
          while (a == 0.0) a = rng.normal();
          x[i] = a;
        }
      }
      break;
    }
    case SignalKind::piecewise_constant: {
      if (cls.segments < 1 || cls.segments > n)
        throw ParameterError("segments must be in [1, n]");
      // breakpoints are the first index of each new segment, drawn from [1, n)
      auto cuts = sample_without_replacement(n - 1, cls.segments - 1, rng);
      std::size_t start = 0;
      for (std::size_t s = 0; s < cls.segments; ++s) {
        std::size_t stop = s + 1 < cls.segments ? cuts[s] + 1 : n;
        double level = rng.uniform();
        for (std::size_t i = start; i < stop; ++i) x[i] = level;
        start = stop;
      }
      break;
    }
    case SignalKind::lp_ball: {
      if (!(cls.p > 0.0 && cls.p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
      double s = 0.0;
      for (auto& v : x) {
        double mag = std::abs(rng.normal());
        v = rng.uniform() < 0.5 ? -mag : mag;
        s += std::pow(mag, cls.p);
      }
      // rescale so that ||x||_p = 1 exactly (up to rounding)
      double scale = std::pow(s, -1.0 / cls.p);
      for (auto& v : x) v *= scale;
      break;
    }
    case SignalKind::image_file:
      break;
  }
  return Signal(std::move(x));
}

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionError("mse: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double mse(const Signal& a, const Signal& b) { return mse(a.values, b.values); }

double psnr_from_mse(double mse_value, double peak) {
  if (!(peak > 0.0)) throw ParameterError("psnr: peak must be > 0");
  if (mse_value == 0.0) return kPsnrInfinity;
  return 10.0 * std::log10(peak * peak / mse_value);
}

double psnr(const Signal& estimate, const Signal& reference, double peak) {
  return psnr_from_mse(mse(estimate, reference), peak);
}

double norm2_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(norm2_sq(v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::size_t count_nonzero(std::span<const double> v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

}  // namespace damp

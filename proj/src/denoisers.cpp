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

#include "damp/denoisers.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "damp/errors.hpp"
#include "damp/smoothing.hpp"

namespace damp {

DenoiserKind parse_denoiser_kind(const std::string& name) {
  static const std::pair<const char*, DenoiserKind> names[] = {
      {"identity", DenoiserKind::identity},
      {"zero", DenoiserKind::zero},
      {"projection", DenoiserKind::projection},
      {"soft_threshold", DenoiserKind::soft_threshold},
      {"soft", DenoiserKind::soft_threshold},
      {"hard_threshold", DenoiserKind::hard_threshold},
      {"hard", DenoiserKind::hard_threshold},
      {"block_soft", DenoiserKind::block_soft},
      {"svt", DenoiserKind::svt},
      {"gaussian_filter", DenoiserKind::gaussian_filter},
      {"gaussian", DenoiserKind::gaussian_filter},
      {"bilateral", DenoiserKind::bilateral},
      {"nlm", DenoiserKind::nlm},
      {"wavelet_soft", DenoiserKind::wavelet_soft},
      {"wavelet_hard", DenoiserKind::wavelet_hard},
      {"smoothed", DenoiserKind::smoothed},
  };
  for (auto& [n, k] : names)
    if (name == n) return k;
  throw ParameterError("unknown denoiser kind '" + name + "'");
}

std::string to_string(DenoiserKind k) {
  switch (k) {
    case DenoiserKind::identity: return "identity";
    case DenoiserKind::zero: return "zero";
    case DenoiserKind::projection: return "projection";
    case DenoiserKind::soft_threshold: return "soft_threshold";
    case DenoiserKind::hard_threshold: return "hard_threshold";
    case DenoiserKind::block_soft: return "block_soft";
    case DenoiserKind::svt: return "svt";
    case DenoiserKind::gaussian_filter: return "gaussian_filter";
    case DenoiserKind::bilateral: return "bilateral";
    case DenoiserKind::nlm: return "nlm";
    case DenoiserKind::wavelet_soft: return "wavelet_soft";
    case DenoiserKind::wavelet_hard: return "wavelet_hard";
    case DenoiserKind::smoothed: return "smoothed";
  }
  return "?";
}

Tuning parse_tuning(const std::string& name) {
  if (name == "fixed") return Tuning::fixed;
  if (name == "scale_with_sigma") return Tuning::scale_with_sigma;
  if (name == "lookup_table") return Tuning::lookup_table;
  throw ParameterError("unknown tuning '" + name + "'");
}

std::string to_string(Tuning t) {
  switch (t) {
    case Tuning::fixed: return "fixed";
    case Tuning::scale_with_sigma: return "scale_with_sigma";
    case Tuning::lookup_table: return "lookup_table";
  }
  return "?";
}

void TuningTable::validate() const {
  if (values.size() != breakpoints.size() + 1)
    throw ParameterError("tuning table needs one more row than breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > 0.0) || !std::isfinite(breakpoints[i]))
      throw ParameterError("tuning table breakpoints must be positive and finite");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw ParameterError("tuning table breakpoints must be strictly increasing");
  }
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ParameterError("tuning table values must be finite and >= 0");
}

std::size_t TuningTable::row(double sigma) const {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), sigma) - breakpoints.begin());
}

double TuningTable::resolve(double sigma) const {
  double v = values.at(row(sigma));
  return relative ? v * sigma : v;
}

// ---------------------------------------------------------------------------

Vec soft_threshold(std::span<const double> v, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("soft_threshold: tau must be >= 0");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]) - tau;
    out[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
  }
  return out;
}

Vec hard_threshold(std::span<const double> v, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("hard_threshold: tau must be >= 0");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]) >= tau ? v[i] : 0.0;
  return out;
}

Vec block_soft_threshold(std::span<const double> v, double tau, std::size_t block_len) {
  if (!(tau >= 0.0)) throw ParameterError("block_soft_threshold: tau must be >= 0");
  if (block_len == 0 || v.size() % block_len != 0)
    throw DimensionError("block_soft_threshold: length " + std::to_string(v.size()) +
                         " not divisible by block length " + std::to_string(block_len));
  Vec out(v.size(), 0.0);
  for (std::size_t b = 0; b < v.size(); b += block_len) {
    double nrm = 0.0;
    for (std::size_t i = b; i < b + block_len; ++i) nrm += v[i] * v[i];
    nrm = std::sqrt(nrm);
    if (nrm <= tau || nrm == 0.0) continue;
    const double scale = (nrm - tau) / nrm;
    for (std::size_t i = b; i < b + block_len; ++i) out[i] = scale * v[i];
  }
  return out;
}

Vec svt(std::span<const double> m, std::size_t n, double lambda) {
  if (!(lambda >= 0.0)) throw ParameterError("svt: lambda must be >= 0");
  if (m.size() != n * n) throw DimensionError("svt: expected a square matrix");
  for (double x : m)
    if (!std::isfinite(x)) throw NumericalError("svt: non-finite matrix entry");
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> M(m.data(), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(n));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success)
    throw NumericalError("svt: SVD failed (Eigen info " + std::to_string(svd.info()) + ")");
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::max(0.0, s[i] - lambda);
  RowMat R = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  return Vec(R.data(), R.data() + R.size());
}

static void require_grid(const Signal& s, const char* what) {
  if (!s.is_grid()) throw LayoutError(std::string(what) + " needs a grid (image) signal");
}

Signal gaussian_filter(const Signal& img, double width, Exec e) {
  require_grid(img, "gaussian_filter");
  if (!(width > 0.0)) throw ParameterError("gaussian_filter: width must be > 0");
  auto k = kernels::gaussian_kernel(width);
  Vec out(img.size());
  kernels::convolve_separable(e, img.values, img.height, img.width, k, out);
  return img.with_values(std::move(out));
}

Signal bilateral_filter(const Signal& img, double h, const BilateralGeometry& g, Exec e) {
  if (!(h > 0.0)) throw ParameterError("bilateral: h must be > 0");
  if (!(g.spatial_sigma > 0.0)) throw ParameterError("bilateral: spatial sigma must be > 0");
  Vec out(img.size());
  kernels::bilateral(e, img.values, img.height, img.is_grid() ? img.width : img.size(), h, g,
                     out);
  return img.with_values(std::move(out));
}

Signal nlm_filter(const Signal& img, double h, const NlmGeometry& g, Exec e) {
  if (!(h > 0.0)) throw ParameterError("nlm: h must be > 0");
  if (g.patch_radius > g.window_radius)
    throw ParameterError("nlm: patch radius must not exceed window radius");
  Vec out(img.size());
  kernels::nlm(e, img.values, img.height, img.is_grid() ? img.width : img.size(), h, g, out);
  return img.with_values(std::move(out));
}

NlmGeometry nlm_geometry_1d() { return NlmGeometry{5, 10, true}; }
NlmGeometry nlm_geometry_2d() { return NlmGeometry{2, 5, true}; }

// ---------------------------------------------------------------------------

DenoiserHandle::DenoiserHandle(DenoiserKind kind, DenoiserParams params, Tuning tuning,
                               TuningTable table)
    : kind_(kind), params_(std::move(params)), tuning_(tuning), table_(std::move(table)) {
  if (tuning_ == Tuning::lookup_table) table_.validate();
  if (!(params_.value >= 0.0) || !std::isfinite(params_.value))
    throw ParameterError("denoiser parameter must be finite and >= 0");
  if (kind_ == DenoiserKind::block_soft && params_.block_len == 0)
    throw ParameterError("block length must be >= 1");
  if (kind_ == DenoiserKind::projection &&
      !std::is_sorted(params_.support.begin(), params_.support.end()))
    throw ParameterError("projection support must be sorted");
}

DenoiserHandle DenoiserHandle::identity() {
  return DenoiserHandle(DenoiserKind::identity, {}, Tuning::fixed);
}

DenoiserHandle DenoiserHandle::zero() {
  return DenoiserHandle(DenoiserKind::zero, {}, Tuning::fixed);
}

DenoiserHandle DenoiserHandle::projection(std::vector<std::size_t> support) {
  DenoiserParams p;
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  p.support = std::move(support);
  return DenoiserHandle(DenoiserKind::projection, std::move(p), Tuning::fixed);
}

DenoiserHandle DenoiserHandle::soft(double value, Tuning t) {
  DenoiserParams p;
  p.value = value;
  return DenoiserHandle(DenoiserKind::soft_threshold, p, t);
}

DenoiserHandle DenoiserHandle::hard(double value, Tuning t) {
  DenoiserParams p;
  p.value = value;
  return DenoiserHandle(DenoiserKind::hard_threshold, p, t);
}

DenoiserHandle DenoiserHandle::block_soft(double value, std::size_t block_len, Tuning t) {
  DenoiserParams p;
  p.value = value;
  p.block_len = block_len;
  return DenoiserHandle(DenoiserKind::block_soft, p, t);
}

DenoiserHandle DenoiserHandle::svt(double value, Tuning t) {
  DenoiserParams p;
  p.value = value;
  return DenoiserHandle(DenoiserKind::svt, p, t);
}

DenoiserHandle DenoiserHandle::gaussian(double width, Tuning t) {
  DenoiserParams p;
  p.value = width;
  return DenoiserHandle(DenoiserKind::gaussian_filter, p, t);
}

DenoiserHandle DenoiserHandle::bilateral(double h, BilateralGeometry g, Tuning t) {
  DenoiserParams p;
  p.value = h;
  p.bilateral = g;
  return DenoiserHandle(DenoiserKind::bilateral, p, t);
}

DenoiserHandle DenoiserHandle::nlm(double h, NlmGeometry g, Tuning t) {
  DenoiserParams p;
  p.value = h;
  p.nlm = g;
  return DenoiserHandle(DenoiserKind::nlm, p, t);
}

DenoiserHandle DenoiserHandle::nlm_table(TuningTable table, NlmGeometry g) {
  DenoiserParams p;
  p.nlm = g;
  return DenoiserHandle(DenoiserKind::nlm, p, Tuning::lookup_table, std::move(table));
}

DenoiserHandle DenoiserHandle::wavelet(double value, WaveletBasis basis, ThresholdMode mode,
                                       std::size_t levels, Tuning t) {
  DenoiserParams p;
  p.value = value;
  p.basis = basis;
  p.levels = levels;
  return DenoiserHandle(
      mode == ThresholdMode::soft ? DenoiserKind::wavelet_soft : DenoiserKind::wavelet_hard, p,
      t);
}

DenoiserHandle DenoiserHandle::smoothed(const DenoiserHandle& inner, SmoothingParams s) {
  if (inner.kind() == DenoiserKind::smoothed)
    throw ParameterError("nested smoothing is not supported");
  if (s.samples < 1) throw ParameterError("smoothing needs at least one sample");
  if (!(s.r > 0.0)) throw ParameterError("smoothing width r must be > 0");
  DenoiserParams p;
  p.smooth = s;
  DenoiserHandle h(DenoiserKind::smoothed, p, Tuning::fixed);
  h.inner_ = std::make_shared<const DenoiserHandle>(inner);
  return h;
}

const DenoiserHandle& DenoiserHandle::inner() const {
  if (!inner_) throw ParameterError("denoiser has no inner handle");
  return *inner_;
}

bool DenoiserHandle::is_thresholding() const {
  switch (kind_) {
    case DenoiserKind::soft_threshold:
    case DenoiserKind::hard_threshold:
    case DenoiserKind::block_soft:
    case DenoiserKind::wavelet_soft:
    case DenoiserKind::wavelet_hard:
      return true;
    default:
      return false;
  }
}

double DenoiserHandle::resolve(double sigma_hat) const {
  switch (tuning_) {
    case Tuning::fixed: return params_.value;
    case Tuning::scale_with_sigma: return params_.value * sigma_hat;
    case Tuning::lookup_table: return table_.resolve(sigma_hat);
  }
  return params_.value;
}

DenoiserHandle DenoiserHandle::with_value(double value) const {
  DenoiserHandle h = *this;
  if (kind_ == DenoiserKind::smoothed) {
    h.inner_ = std::make_shared<const DenoiserHandle>(inner_->with_value(value));
  } else {
    if (!(value >= 0.0)) throw ParameterError("denoiser parameter must be >= 0");
    h.params_.value = value;
  }
  return h;
}

Signal DenoiserHandle::apply(const Signal& noisy, double sigma_hat, std::uint64_t call_key,
                             Exec exec) const {
  if (!(sigma_hat >= 0.0)) throw ParameterError("sigma_hat must be >= 0");
  const double p = resolve(sigma_hat);
  switch (kind_) {
    case DenoiserKind::identity:
      return noisy;
    case DenoiserKind::zero:
      return Signal::zeros_like(noisy);
    case DenoiserKind::projection: {
      Signal out = Signal::zeros_like(noisy);
      for (auto i : params_.support) {
        if (i >= noisy.size()) throw DimensionError("projection support exceeds signal length");
        out.values[i] = noisy.values[i];
      }
      return out;
    }
    case DenoiserKind::soft_threshold:
      return noisy.with_values(soft_threshold(noisy.values, p));
    case DenoiserKind::hard_threshold:
      return noisy.with_values(hard_threshold(noisy.values, p));
    case DenoiserKind::block_soft:
      return noisy.with_values(block_soft_threshold(noisy.values, p, params_.block_len));
    case DenoiserKind::svt: {
      require_grid(noisy, "svt");
      if (noisy.height != noisy.width) throw LayoutError("svt needs a square matrix signal");
      return noisy.with_values(damp::svt(noisy.values, noisy.height, p));
    }
    case DenoiserKind::wavelet_soft:
    case DenoiserKind::wavelet_hard:
      return wavelet_threshold(noisy, p, params_.basis,
                               kind_ == DenoiserKind::wavelet_soft ? ThresholdMode::soft
                                                                   : ThresholdMode::hard,
                               params_.levels);
    case DenoiserKind::gaussian_filter:
      require_grid(noisy, "gaussian_filter");
      if (p == 0.0) return noisy;
      return gaussian_filter(noisy, p, exec);
    case DenoiserKind::bilateral:
      if (p == 0.0) return noisy;  // zero range width keeps only the centre pixel
      return bilateral_filter(noisy, p, params_.bilateral, exec);
    case DenoiserKind::nlm:
      if (p == 0.0) return noisy;
      return nlm_filter(noisy, p, params_.nlm, exec);
    case DenoiserKind::smoothed:
      return smooth_apply(SmoothedDenoiser{*inner_, params_.smooth}, noisy, sigma_hat, call_key,
                          exec);
  }
  throw ParameterError("unhandled denoiser kind");
}

std::string DenoiserHandle::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == DenoiserKind::smoothed) {
    os << "(" << inner_->describe() << ", r=" << params_.smooth.r
       << (params_.smooth.r_relative ? "*sigma" : "") << ", M=" << params_.smooth.samples << ")";
    return os.str();
  }
  if (kind_ == DenoiserKind::identity || kind_ == DenoiserKind::zero) return os.str();
  if (kind_ == DenoiserKind::projection) {
    os << "(k=" << params_.support.size() << ")";
    return os.str();
  }
  os << "(" << to_string(tuning_);
  if (tuning_ == Tuning::lookup_table) {
    os << " " << (table_.name.empty() ? "inline" : table_.name);
  } else {
    os << " " << params_.value;
  }
  os << ")";
  return os.str();
}

}  // namespace damp

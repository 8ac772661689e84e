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

#include "damp/sensing.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "damp/errors.hpp"
#include "damp/io.hpp"
#include "damp/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix file I/O assumes a little-endian host");

namespace damp {

MeasurementMatrix::MeasurementMatrix(std::size_t m, std::size_t n, Vec entries,
                                     std::uint64_t seed, MatrixScaling scaling)
    : m_(m), n_(n), a_(std::move(entries)), seed_(seed), scaling_(scaling) {
  if (a_.size() != m * n) throw DimensionError("matrix entries do not match m*n");
}

void MeasurementMatrix::apply_into(std::span<const double> v, std::span<double> out,
                                   Exec e) const {
  if (v.size() != n_ || out.size() != m_)
    throw DimensionError("apply: expected length " + std::to_string(n_) + ", got " +
                         std::to_string(v.size()));
  kernels::gemv(e, a_, m_, n_, v, out);
}

void MeasurementMatrix::apply_adjoint_into(std::span<const double> u,
                                           std::span<double> out, Exec e) const {
  if (u.size() != m_ || out.size() != n_)
    throw DimensionError("apply_adjoint: expected length " + std::to_string(m_) +
                         ", got " + std::to_string(u.size()));
  kernels::gemv_t(e, a_, m_, n_, u, out);
}

Vec MeasurementMatrix::apply(std::span<const double> v, Exec e) const {
  Vec out(m_);
  apply_into(v, out, e);
  return out;
}

Vec MeasurementMatrix::apply_adjoint(std::span<const double> u, Exec e) const {
  Vec out(n_);
  apply_adjoint_into(u, out, e);
  return out;
}

double MeasurementMatrix::column_norm(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < m_; ++i) s += a_[i * n_ + j] * a_[i * n_ + j];
  return std::sqrt(s);
}

MeasurementMatrix gen_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                             MatrixScaling scaling) {
  if (m < 1 || n < 1) throw ParameterError("matrix dimensions must be >= 1");
  if (m > n) throw ParameterError("gen_matrix: m > n (undersampling assumed)");
  Rng rng(seed, Stream::matrix);
  Vec a(m * n);
  rng.fill_normal(a);
  if (scaling == MatrixScaling::column_normalized) {
    Vec norms(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) norms[j] += a[i * n + j] * a[i * n + j];
    for (auto& s : norms) s = 1.0 / std::sqrt(s);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= norms[j];
  } else if (scaling == MatrixScaling::inv_sqrt_m) {
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (auto& v : a) v *= s;
  }
  return MeasurementMatrix(m, n, std::move(a), seed, scaling);
}

MeasurementMatrix gen_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                             bool normalize) {
  return gen_matrix(m, n, seed,
                    normalize ? MatrixScaling::column_normalized : MatrixScaling::raw);
}

Measurement measure(const MeasurementMatrix& a, const Signal& x, double sigma_w,
                    std::uint64_t noise_seed) {
  if (!(sigma_w >= 0.0)) throw ParameterError("sigma_w must be >= 0");
  if (x.size() != a.cols())
    throw DimensionError("measure: signal length " + std::to_string(x.size()) +
                         " but matrix has " + std::to_string(a.cols()) + " columns");
  Measurement out;
  out.y = a.apply(x.values);
  out.sigma_w = sigma_w;
  out.noise_seed = noise_seed;
  if (sigma_w > 0.0) {
    Rng rng(noise_seed, Stream::noise);
    for (auto& v : out.y) v += sigma_w * rng.normal();
  }
  return out;
}

namespace {
constexpr char kMagic[8] = {'D', 'A', 'M', 'P', 'M', 'A', 'T', '1'};
}

void write_matrix(const std::string& path, const MeasurementMatrix& a) {
  std::string buf(24 + 8 * a.rows() * a.cols(), '\0');
  std::memcpy(buf.data(), kMagic, 8);
  std::uint64_t m = a.rows(), n = a.cols();
  std::memcpy(buf.data() + 8, &m, 8);
  std::memcpy(buf.data() + 16, &n, 8);
  std::memcpy(buf.data() + 24, a.entries().data(), 8 * m * n);
  write_file_atomic(path, buf);
}

MeasurementMatrix read_matrix(const std::string& path) {
  std::string buf = read_file(path);
  if (buf.size() < 24 || std::memcmp(buf.data(), kMagic, 8) != 0)
    throw ValidationError(path + ": not a DAMPMAT1 matrix file");
  std::uint64_t m = 0, n = 0;
  std::memcpy(&m, buf.data() + 8, 8);
  std::memcpy(&n, buf.data() + 16, 8);
  if (m == 0 || n == 0 || m > (1ULL << 32) || n > (1ULL << 32) ||
      buf.size() != 24 + 8 * m * n)
    throw ValidationError(path + ": matrix payload size does not match header");
  Vec a(m * n);
  std::memcpy(a.data(), buf.data() + 24, 8 * m * n);
  MatrixScaling sc = MatrixScaling::raw;
  // Recover the normalization flag from the data itself.
  MeasurementMatrix probe(m, n, a);
  bool unit = true;
  for (std::size_t j = 0; j < n && unit; ++j)
    unit = std::abs(probe.column_norm(j) - 1.0) < 1e-12;
  if (unit) sc = MatrixScaling::column_normalized;
  return MeasurementMatrix(m, n, std::move(a), 0, sc);
}

}  // namespace damp

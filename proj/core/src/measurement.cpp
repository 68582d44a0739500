// Copyright 2026 The cdsdmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cdsdmm/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cdsdmm/error.hpp"
#include "fftw_plans.hpp"

namespace cdsdmm {

namespace detail {

struct SrmData {
  SrmBase base = SrmBase::kWalshHadamard;
  std::vector<std::int8_t> signs;
  std::vector<std::size_t> rows;
  // Orthonormal DCT-II scaling and its FFTW plans (DCT base only).
  std::unique_ptr<FftwPlan> dct2;
  std::unique_ptr<FftwPlan> dct3;
};

// m x n row-major. Random Gaussian matrices are stored in single precision
// (the products are the bottleneck and are bandwidth bound); caller-supplied
// dense matrices keep double precision. Exactly one of the two is filled.
struct GaussianData {
  std::vector<float> single;
  std::vector<double> full;
};

}  // namespace detail

namespace {

// Eight independent partial sums so the compiler can vectorize without
// reassociating; the summation order is fixed, so results are reproducible.
template <typename T>
double dot_row(const T* a, const double* b, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    for (int k = 0; k < 8; ++k) acc[k] += a[j + k] * b[j + k];
  }
  double s = ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

template <typename T>
void measure_rows(const T* row, std::size_t m, std::size_t n, const double* v, double* y) {
  for (std::size_t i = 0; i < m; ++i, row += n) y[i] = dot_row(row, v, n);
}

template <typename T>
void adjoint_rows(const T* row, std::size_t m, std::size_t n, const double* y, double* out) {
  for (std::size_t i = 0; i < m; ++i, row += n) {
    const double yi = y[i];
    for (std::size_t j = 0; j < n; ++j) out[j] += yi * row[j];
  }
}

// Phi v and Phi^T Phi v in a single sweep over the rows. The update of
// Phi^T Phi v takes four rows at a time so out[] is streamed once per block.
template <typename T>
void gram_rows(const T* row, std::size_t m, std::size_t n, const double* v, double* pv,
               double* out) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4, row += 4 * n) {
    const T* r0 = row;
    const T* r1 = row + n;
    const T* r2 = row + 2 * n;
    const T* r3 = row + 3 * n;
    const double s0 = pv[i] = dot_row(r0, v, n);
    const double s1 = pv[i + 1] = dot_row(r1, v, n);
    const double s2 = pv[i + 2] = dot_row(r2, v, n);
    const double s3 = pv[i + 3] = dot_row(r3, v, n);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] += (s0 * r0[j] + s1 * r1[j]) + (s2 * r2[j] + s3 * r3[j]);
    }
  }
  for (; i < m; ++i, row += n) {
    const double s = dot_row(row, v, n);
    pv[i] = s;
    for (std::size_t j = 0; j < n; ++j) out[j] += s * row[j];
  }
}

void check_sizes(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw ParameterError("measurement sizes must be positive");
  if (m > n) {
    throw ParameterError("measurement count m=" + std::to_string(m) +
                         " exceeds ambient dimension n=" + std::to_string(n));
  }
}

// Orthonormal DCT-II: C[k][j] = s_k cos(pi (j + 1/2) k / n), s_0 = sqrt(1/n),
// s_k = sqrt(2/n). FFTW's REDFT10 omits s_k and carries a factor 2.
void dct_forward(const detail::SrmData& d, std::span<double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  fftw_execute_r2r(d.dct2->get(), v.data(), out.data());
  const double s0 = std::sqrt(1.0 / static_cast<double>(n)) / 2.0;
  const double sk = std::sqrt(2.0 / static_cast<double>(n)) / 2.0;
  v[0] = out[0] * s0;
  for (std::size_t k = 1; k < n; ++k) v[k] = out[k] * sk;
}

// Transpose of dct_forward via REDFT01 (x_j = z_0 + 2 sum_k z_k cos(...)).
void dct_adjoint(const detail::SrmData& d, std::span<double> v) {
  const std::size_t n = v.size();
  std::vector<double> in(n);
  in[0] = v[0] * std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n)) / 2.0;
  for (std::size_t k = 1; k < n; ++k) in[k] = v[k] * sk;
  fftw_execute_r2r(d.dct3->get(), in.data(), v.data());
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fwht_orthonormal(std::span<double> v) {
  const std::size_t n = v.size();
  if (!is_power_of_two(n)) throw DimensionError("Walsh-Hadamard length must be a power of two");
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * len) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = v[j];
        const double b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& x : v) x *= scale;
}

std::string to_string(MeasurementKind k) {
  switch (k) {
    case MeasurementKind::kSrm:
      return "srm";
    case MeasurementKind::kGaussian:
      return "gaussian";
    case MeasurementKind::kDense:
      return "dense";
  }
  return "unknown";
}

std::string to_string(SrmBase b) {
  switch (b) {
    case SrmBase::kWalshHadamard:
      return "walsh_hadamard";
    case SrmBase::kDct:
      return "dct";
    case SrmBase::kIdentity:
      return "identity";
  }
  return "unknown";
}

MeasurementKind parse_measurement_kind(std::string_view s) {
  if (s == "srm") return MeasurementKind::kSrm;
  if (s == "gaussian") return MeasurementKind::kGaussian;
  throw ParameterError("unknown measurement kind '" + std::string(s) + "'");
}

SrmBase parse_srm_base(std::string_view s) {
  if (s == "walsh_hadamard" || s == "wht") return SrmBase::kWalshHadamard;
  if (s == "dct") return SrmBase::kDct;
  if (s == "identity") return SrmBase::kIdentity;
  throw ParameterError("unknown SRM base transform '" + std::string(s) + "'");
}

MeasurementOperator build_srm(std::uint64_t seed, std::size_t n, std::size_t m,
                              SrmOptions options) {
  check_sizes(n, m);
  if (options.base == SrmBase::kWalshHadamard && !is_power_of_two(n)) {
    throw ParameterError("Walsh-Hadamard SRM needs n to be a power of two, got " +
                         std::to_string(n));
  }
  auto data = std::make_shared<detail::SrmData>();
  data->base = options.base;

  std::mt19937_64 rng(seed);
  data->signs.assign(n, 1);
  if (options.randomize_signs) {
    for (auto& s : data->signs) s = (rng() >> 63) ? std::int8_t{-1} : std::int8_t{1};
  }
  // Partial Fisher-Yates: the first m entries are a uniform m-subset.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  data->rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(data->rows.begin(), data->rows.end());

  if (options.base == SrmBase::kDct) {
    std::vector<double> a(n);
    std::vector<double> b(n);
    const int len = static_cast<int>(n);
    std::lock_guard lock(detail::fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    data->dct2 = std::make_unique<detail::FftwPlan>(
        fftw_plan_r2r_1d(len, a.data(), b.data(), FFTW_REDFT10, flags));
    data->dct3 = std::make_unique<detail::FftwPlan>(
        fftw_plan_r2r_1d(len, a.data(), b.data(), FFTW_REDFT01, flags));
  }

  MeasurementOperator op;
  op.kind_ = MeasurementKind::kSrm;
  op.m_ = m;
  op.n_ = n;
  op.seed_ = seed;
  op.srm_ = std::move(data);
  return op;
}

MeasurementOperator build_gaussian(std::uint64_t seed, std::size_t n, std::size_t m) {
  check_sizes(n, m);
  auto data = std::make_shared<detail::GaussianData>();
  data->single.resize(m * n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  for (float& v : data->single) v = static_cast<float>(normal(rng));

  MeasurementOperator op;
  op.kind_ = MeasurementKind::kGaussian;
  op.m_ = m;
  op.n_ = n;
  op.seed_ = seed;
  op.gauss_ = std::move(data);
  return op;
}

MeasurementOperator build_dense(std::size_t m, std::size_t n, Vector matrix) {
  check_sizes(n, m);
  if (matrix.size() != m * n) throw DimensionError("dense measurement matrix has the wrong size");
  auto data = std::make_shared<detail::GaussianData>();
  data->full = std::move(matrix);
  MeasurementOperator op;
  op.kind_ = MeasurementKind::kDense;
  op.m_ = m;
  op.n_ = n;
  op.gauss_ = std::move(data);
  return op;
}

Vector MeasurementOperator::measure(std::span<const double> v) const {
  if (v.size() != n_) throw DimensionError("measure: expected length " + std::to_string(n_));
  Vector y(m_);
  if (gauss_) {
    if (gauss_->full.empty()) {
      measure_rows(gauss_->single.data(), m_, n_, v.data(), y.data());
    } else {
      measure_rows(gauss_->full.data(), m_, n_, v.data(), y.data());
    }
    return y;
  }
  Vector work(n_);
  for (std::size_t j = 0; j < n_; ++j) work[j] = srm_->signs[j] * v[j];
  switch (srm_->base) {
    case SrmBase::kWalshHadamard:
      fwht_orthonormal(work);
      break;
    case SrmBase::kDct:
      dct_forward(*srm_, work);
      break;
    case SrmBase::kIdentity:
      break;
  }
  for (std::size_t i = 0; i < m_; ++i) y[i] = work[srm_->rows[i]];
  return y;
}

Vector MeasurementOperator::measure_adjoint(std::span<const double> y) const {
  if (y.size() != m_) throw DimensionError("measure_adjoint: expected length " + std::to_string(m_));
  Vector out(n_, 0.0);
  if (gauss_) {
    if (gauss_->full.empty()) {
      adjoint_rows(gauss_->single.data(), m_, n_, y.data(), out.data());
    } else {
      adjoint_rows(gauss_->full.data(), m_, n_, y.data(), out.data());
    }
    return out;
  }
  for (std::size_t i = 0; i < m_; ++i) out[srm_->rows[i]] = y[i];
  switch (srm_->base) {
    case SrmBase::kWalshHadamard:
      fwht_orthonormal(out);
      break;
    case SrmBase::kDct:
      dct_adjoint(*srm_, out);
      break;
    case SrmBase::kIdentity:
      break;
  }
  for (std::size_t j = 0; j < n_; ++j) out[j] *= srm_->signs[j];
  return out;
}

Vector MeasurementOperator::gram(std::span<const double> v, Vector* phi_v) const {
  if (v.size() != n_) throw DimensionError("gram: expected length " + std::to_string(n_));
  if (kind_ == MeasurementKind::kSrm) {
    Vector pv = measure(v);
    Vector out = measure_adjoint(pv);
    if (phi_v) *phi_v = std::move(pv);
    return out;
  }
  Vector out(n_, 0.0);
  Vector pv(m_);
  if (gauss_->full.empty()) {
    gram_rows(gauss_->single.data(), m_, n_, v.data(), pv.data(), out.data());
  } else {
    gram_rows(gauss_->full.data(), m_, n_, v.data(), pv.data(), out.data());
  }
  if (phi_v) *phi_v = std::move(pv);
  return out;
}

Vector MeasurementOperator::materialize() const {
  if (gauss_) {
    if (!gauss_->full.empty()) return gauss_->full;
    return Vector(gauss_->single.begin(), gauss_->single.end());
  }
  Vector dense(m_ * n_);
  Vector e(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    e[j] = 1.0;
    const Vector col = measure(e);
    for (std::size_t i = 0; i < m_; ++i) dense[i * n_ + j] = col[i];
    e[j] = 0.0;
  }
  return dense;
}

SrmBase MeasurementOperator::srm_base() const {
  return srm_ ? srm_->base : SrmBase::kIdentity;
}

std::span<const std::int8_t> MeasurementOperator::signs() const {
  if (!srm_) return {};
  return srm_->signs;
}

std::span<const std::size_t> MeasurementOperator::selected_rows() const {
  if (!srm_) return {};
  return srm_->rows;
}

}  // namespace cdsdmm

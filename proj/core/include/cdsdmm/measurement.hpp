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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

enum class MeasurementKind { kSrm, kGaussian, kDense };

/// Fast orthonormal transform at the core of a structurally random matrix.
enum class SrmBase { kWalshHadamard, kDct, kIdentity };

std::string to_string(MeasurementKind k);
std::string to_string(SrmBase b);
MeasurementKind parse_measurement_kind(std::string_view s);
SrmBase parse_srm_base(std::string_view s);

struct SrmOptions {
  SrmBase base = SrmBase::kWalshHadamard;
  bool randomize_signs = true;
};

namespace detail {
struct SrmData;
struct GaussianData;
}  // namespace detail

/// Compressive sampling operator Phi: R^n -> R^m.
///
/// SRM kind: Phi = R_Omega F D with D a random +-1 diagonal, F an orthonormal
/// fast transform and R_Omega the restriction to m distinct rows (kept in
/// ascending order). Rows are orthonormal, so Phi Phi^T = I_m.
///
/// Gaussian kind: dense m x n matrix with i.i.d. N(0, 1/m) entries, rounded
/// to single precision for storage; all arithmetic is in double.
/// Dense kind: an arbitrary caller-supplied m x n matrix.
///
/// Immutable; copies share the underlying data.
class MeasurementOperator {
 public:
  MeasurementKind kind() const { return kind_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  double cs_ratio() const { return static_cast<double>(m_) / static_cast<double>(n_); }
  bool rows_orthonormal() const { return kind_ == MeasurementKind::kSrm; }

  Vector measure(std::span<const double> v) const;
  Vector measure_adjoint(std::span<const double> y) const;

  /// Phi^T Phi v. When phi_v is non-null it receives Phi v. The Gaussian
  /// path does both products in one pass over the matrix.
  Vector gram(std::span<const double> v, Vector* phi_v = nullptr) const;

  /// Explicit m x n row-major matrix. Intended for tests and small n.
  Vector materialize() const;

  // SRM parameters; empty for the Gaussian kind.
  SrmBase srm_base() const;
  std::span<const std::int8_t> signs() const;
  std::span<const std::size_t> selected_rows() const;

  friend MeasurementOperator build_srm(std::uint64_t seed, std::size_t n, std::size_t m,
                                       SrmOptions options);
  friend MeasurementOperator build_gaussian(std::uint64_t seed, std::size_t n, std::size_t m);
/// Wraps an explicit row-major m x n matrix. Never treated as row-orthonormal.
MeasurementOperator build_dense(std::size_t m, std::size_t n, Vector matrix);
  friend MeasurementOperator build_dense(std::size_t m, std::size_t n, Vector matrix);

 private:
  MeasurementOperator() = default;

  MeasurementKind kind_ = MeasurementKind::kSrm;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const detail::SrmData> srm_;
  std::shared_ptr<const detail::GaussianData> gauss_;
};

MeasurementOperator build_srm(std::uint64_t seed, std::size_t n, std::size_t m,
                              SrmOptions options = {});
MeasurementOperator build_gaussian(std::uint64_t seed, std::size_t n, std::size_t m);
/// Wraps an explicit row-major m x n matrix. Never treated as row-orthonormal.
MeasurementOperator build_dense(std::size_t m, std::size_t n, Vector matrix);

/// Orthonormal fast Walsh-Hadamard transform in place (length a power of two).
/// The normalized transform is symmetric and its own inverse.
void fwht_orthonormal(std::span<double> v);

bool is_power_of_two(std::size_t n);

}  // namespace cdsdmm

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

#include <random>

#include "cdsdmm/error.hpp"
#include "cdsdmm/measurement.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cdsdmm;

namespace {

// R_Omega F D assembled from the textbook matrices.
oracle::Dense dense_srm(const MeasurementOperator& op) {
  const std::size_t n = op.n();
  oracle::Dense f;
  switch (op.srm_base()) {
    case SrmBase::kWalshHadamard:
      f = oracle::dense_walsh(n);
      break;
    case SrmBase::kDct:
      f = oracle::dense_dct(n);
      break;
    case SrmBase::kIdentity:
      f = oracle::Dense::Identity(static_cast<long>(n), static_cast<long>(n));
      break;
  }
  oracle::Dense phi(static_cast<long>(op.m()), static_cast<long>(n));
  const auto rows = op.selected_rows();
  const auto signs = op.signs();
  for (std::size_t i = 0; i < op.m(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      phi(static_cast<long>(i), static_cast<long>(j)) =
          f(static_cast<long>(rows[i]), static_cast<long>(j)) * signs[j];
    }
  }
  return phi;
}

}  // namespace

TEST_CASE("SRM without subsampling or sign flips is orthogonal") {
  const auto op = build_srm(3, 64, 64, SrmOptions{SrmBase::kWalshHadamard, false});
  std::mt19937_64 rng(1);
  const Vector x = oracle::random_vector(64, rng);
  CHECK(std::abs(norm2(op.measure(x)) - norm2(x)) < 1e-12 * norm2(x));
  for (auto s : op.signs()) CHECK(s == 1);
}

TEST_CASE("SRM rows are orthonormal") {
  for (SrmBase base : {SrmBase::kWalshHadamard, SrmBase::kDct}) {
    CAPTURE(to_string(base));
    const auto op = build_srm(42, 256, 64, SrmOptions{base, true});
    const oracle::Dense phi = oracle::from_row_major(op.materialize(), 64, 256);
    const oracle::Dense gram = phi * phi.transpose();
    const double dev = (gram - oracle::Dense::Identity(64, 64)).cwiseAbs().maxCoeff();
    CHECK(dev < 1e-10);
  }
}

TEST_CASE("SRM fast path equals the explicitly assembled matrix") {
  std::mt19937_64 rng(8);
  for (SrmBase base : {SrmBase::kWalshHadamard, SrmBase::kDct, SrmBase::kIdentity}) {
    CAPTURE(to_string(base));
    const auto op = build_srm(99, 64, 24, SrmOptions{base, true});
    const oracle::Dense phi = dense_srm(op);
    const Vector x = oracle::random_vector(64, rng);
    const Vector y = oracle::random_vector(24, rng);
    CHECK(oracle::rel_diff(op.measure(x), oracle::from_eigen(phi * oracle::to_eigen(x))) < 1e-10);
    CHECK(oracle::rel_diff(op.measure_adjoint(y),
                           oracle::from_eigen(phi.transpose() * oracle::to_eigen(y))) < 1e-10);
  }
}

TEST_CASE("selected rows are distinct and sorted") {
  const auto op = build_srm(5, 1024, 300);
  const auto rows = op.selected_rows();
  REQUIRE(rows.size() == 300);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1] < rows[i]);
  CHECK(rows.back() < 1024);
}

TEST_CASE("adjoint dot-product identity for both kinds") {
  std::mt19937_64 rng(12);
  const MeasurementOperator ops[] = {build_srm(1, 128, 40), build_gaussian(2, 128, 40),
                                     build_srm(3, 96, 30, SrmOptions{SrmBase::kDct, true})};
  for (const auto& op : ops) {
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = oracle::random_vector(op.n(), rng);
      const Vector y = oracle::random_vector(op.m(), rng);
      const double left = dot(op.measure(x), y);
      const double right = dot(x, op.measure_adjoint(y));
      CHECK(std::abs(left - right) <= 1e-10 * (std::abs(left) + 1e-300));
    }
  }
}

TEST_CASE("measurement operators are linear") {
  std::mt19937_64 rng(4);
  for (const auto& op : {build_srm(7, 64, 20), build_gaussian(7, 64, 20)}) {
    const Vector x = oracle::random_vector(64, rng);
    const Vector z = oracle::random_vector(64, rng);
    Vector comb(64);
    for (std::size_t i = 0; i < 64; ++i) comb[i] = 2.5 * x[i] - 0.75 * z[i];
    const Vector px = op.measure(x);
    const Vector pz = op.measure(z);
    Vector expect(20);
    for (std::size_t i = 0; i < 20; ++i) expect[i] = 2.5 * px[i] - 0.75 * pz[i];
    CHECK(oracle::rel_diff(op.measure(comb), expect) < 1e-10);
  }
}

TEST_CASE("gram returns Phi^T Phi v and Phi v") {
  std::mt19937_64 rng(6);
  for (const auto& op : {build_srm(7, 64, 20), build_gaussian(7, 64, 20)}) {
    const Vector v = oracle::random_vector(64, rng);
    Vector pv;
    const Vector g = op.gram(v, &pv);
    CHECK(oracle::rel_diff(pv, op.measure(v)) < 1e-12);
    CHECK(oracle::rel_diff(g, op.measure_adjoint(op.measure(v))) < 1e-12);
  }
}

TEST_CASE("Gaussian column norms concentrate around one") {
  const auto op = build_gaussian(2024, 1024, 256);
  const Vector a = op.materialize();
  double mean_sq = 0.0;
  for (double v : a) mean_sq += v * v;
  mean_sq /= 1024.0;  // sum over all entries / number of columns
  CHECK(mean_sq == doctest::Approx(1.0).epsilon(0.10));
  CHECK_FALSE(op.rows_orthonormal());
}

TEST_CASE("same seed gives identical operators") {
  std::mt19937_64 rng(10);
  const Vector x = oracle::random_vector(256, rng);
  CHECK(build_srm(77, 256, 64).measure(x) == build_srm(77, 256, 64).measure(x));
  CHECK(build_gaussian(77, 256, 64).materialize() == build_gaussian(77, 256, 64).materialize());
  CHECK(build_srm(77, 256, 64).measure(x) != build_srm(78, 256, 64).measure(x));
}

TEST_CASE("zero in, zero out") {
  const auto op = build_srm(1, 64, 16);
  CHECK(max_abs(op.measure(Vector(64, 0.0))) == 0.0);
  CHECK(max_abs(op.measure_adjoint(Vector(16, 0.0))) == 0.0);
}

TEST_CASE("measurement errors") {
  CHECK_THROWS_AS(build_srm(1, 64, 65), ParameterError);
  CHECK_THROWS_AS(build_gaussian(1, 64, 65), ParameterError);
  CHECK_THROWS_AS(build_srm(1, 96, 10), ParameterError);  // WHT needs a power of two
  CHECK_NOTHROW(build_srm(1, 96, 10, SrmOptions{SrmBase::kDct, true}));
  const auto op = build_srm(1, 64, 16);
  CHECK_THROWS_AS(op.measure(Vector(63)), DimensionError);
  CHECK_THROWS_AS(op.measure_adjoint(Vector(17)), DimensionError);
  CHECK_THROWS_AS(parse_measurement_kind("bernoulli"), ParameterError);
}

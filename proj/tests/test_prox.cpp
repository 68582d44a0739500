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
#include "cdsdmm/prox.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cdsdmm;

namespace {

double residual(double q, double a, double k, double p) { return q + p * k * std::pow(q, p - 1.0) - a; }

}  // namespace

TEST_CASE("closed-form and reference values") {
  CHECK(prox_lp_scalar(2.0, {0.5, 1.0}) == doctest::Approx(1.5));
  CHECK(prox_lp_scalar(3.0, {1.0, 2.0}) == doctest::Approx(1.0));
  CHECK(prox_lp_scalar(-3.0, {1.0, 2.0}) == doctest::Approx(-1.0));
  CHECK(prox_lp_scalar(0.0, {2.0, 1.5}) == 0.0);

  // q + 1.5 sqrt(q) = 2. With s = sqrt(q): s^2 + 1.5 s - 2 = 0, s = (-1.5 + sqrt(10.25)) / 2.
  const double s = (-1.5 + std::sqrt(10.25)) / 2.0;
  const double q = prox_lp_scalar(2.0, {1.0, 1.5});
  CHECK(q == doctest::Approx(s * s).epsilon(1e-12));
  CHECK(q == doctest::Approx(0.72).epsilon(0.01));
}

TEST_CASE("bisection oracle for the p = 1.5 example") {
  double lo = 0.0;
  double hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid, 2.0, 1.0, 1.5) > 0 ? hi : lo) = mid;
  }
  CHECK(std::abs(prox_lp_scalar(2.0, {1.0, 1.5}) - lo) < 1e-12);
}

TEST_CASE("prox is the global minimizer against a refined grid") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(-6.0, 6.0);
  std::uniform_real_distribution<double> uk(0.0, 3.0);
  std::uniform_real_distribution<double> up(1.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = ux(rng);
    const double k = uk(rng);
    const double p = up(rng);
    CAPTURE(x);
    CAPTURE(k);
    CAPTURE(p);
    CHECK(std::abs(prox_lp_scalar(x, {k, p}) - oracle::grid_prox(x, k, p)) < 1e-3);
  }
}

TEST_CASE("shrinkage, monotonicity, nonexpansiveness, optimality") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> ux(-10.0, 10.0);
  std::uniform_real_distribution<double> uk(0.0, 5.0);
  std::uniform_real_distribution<double> up(1.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const ProxParams pp{uk(rng), up(rng)};
    const double x1 = ux(rng);
    const double x2 = ux(rng);
    const double q1 = prox_lp_scalar(x1, pp);
    const double q2 = prox_lp_scalar(x2, pp);
    CHECK(std::abs(q1) <= std::abs(x1));
    CHECK((q1 == 0.0 || std::signbit(q1) == std::signbit(x1)));
    if (std::abs(x1) <= std::abs(x2)) CHECK(std::abs(q1) <= std::abs(q2) + 1e-15);
    CHECK(std::abs(q1 - q2) <= std::abs(x1 - x2) + 1e-12);
    if (pp.p > 1.0 && q1 != 0.0) CHECK(std::abs(residual(std::abs(q1), std::abs(x1), pp.k, pp.p)) < 1e-10);

    auto f = [&](double u) { return pp.k * std::pow(std::abs(u), pp.p) + 0.5 * (u - x1) * (u - x1); };
    std::uniform_real_distribution<double> uu(-12.0, 12.0);
    for (int j = 0; j < 1000; ++j) {
      const double u = uu(rng);
      if (!(f(q1) <= f(u) + 1e-9)) {
        FAIL("prox value not optimal at u=" << u);
        break;
      }
    }
  }
}

TEST_CASE("root finder is continuous at the closed-form endpoints") {
  for (double x : {-4.0, -0.3, 0.2, 0.9, 2.5, 7.0}) {
    for (double k : {0.1, 0.5, 1.0, 3.0}) {
      CHECK(std::abs(prox_lp_scalar(x, {k, 1.0 + 1e-9}) - prox_lp_scalar(x, {k, 1.0})) < 1e-8);
      CHECK(std::abs(prox_lp_scalar(x, {k, 2.0 - 1e-9}) - prox_lp_scalar(x, {k, 2.0})) < 1e-8);
    }
  }
}

TEST_CASE("vector forms") {
  CHECK(max_abs(prox_lp_vector(Vector(5, 0.0), {1.0, 1.3})) == 0.0);
  const Vector v{3.0, -0.2, 0.0};
  const Vector s = prox_l1(v, 1.0);
  CHECK(s == Vector{2.0, 0.0, 0.0});
  CHECK(prox_l1(v, 0.0) == v);
  std::mt19937_64 rng(2);
  const Vector r = oracle::random_vector(50, rng, 3.0);
  CHECK(prox_l1(r, 0.7) == prox_lp_vector(r, {0.7, 1.0}));
  const Vector out = prox_lp_vector(r, {0.7, 1.4});
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(out[i] == prox_lp_scalar(r[i], {0.7, 1.4}));
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(std::abs(out[i] - oracle::grid_prox(r[i], 0.7, 1.4)) < 1e-3);
  }
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(prox_lp_scalar(1.0, {-0.1, 1.5}), ParameterError);
  CHECK_THROWS_AS(prox_lp_scalar(1.0, {1.0, 0.9}), ParameterError);
  CHECK_THROWS_AS(prox_lp_scalar(1.0, {1.0, 2.1}), ParameterError);
  CHECK_THROWS_AS(prox_l1(Vector{1.0}, -1.0), ParameterError);
}

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

#include "cdsdmm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cdsdmm/error.hpp"

namespace cdsdmm {
namespace {

constexpr double kResidualTol = 1e-12;
constexpr int kMaxIterations = 100;

// Root of g(q) = q + p K q^(p-1) - a on [0, a], for a > 0, K > 0, 1 < p < 2.
//
// The root can be far below the smallest step a bracket in q resolves
// (q ~ 1e-180 for p close to 1), so the first phase works in u = q^(p-1):
// G(u) = u^(1/(p-1)) + p K u - a is convex and increasing with G' >= p K,
// and Newton started at an upper bound of the root decreases monotonically
// onto it. The second phase polishes in q, where the residual is measured.
double solve_shrinkage(double a, double k, double p) {
  const double pk = p * k;
  const double e = 1.0 / (p - 1.0);
  auto g = [&](double q) { return q + pk * std::pow(q, p - 1.0) - a; };

  double u = std::min(a / pk, std::pow(a, p - 1.0));
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    const double q = std::pow(u, e);
    const double gu = q + pk * u - a;
    if (gu < kResidualTol) break;
    const double next = u - gu / (e * q / u + pk);
    if (!(next < u) || !(next >= 0.0)) break;
    u = next;
  }

  double q = std::pow(u, e);
  // Subnormal roots carry too few digits to polish; they are zero to
  // within the smallest normal double.
  if (q < std::numeric_limits<double>::min()) return 0.0;
  double lo = 0.0;
  double hi = a;
  for (; it < kMaxIterations && q > 0.0; ++it) {
    const double gq = g(q);
    if (std::abs(gq) < kResidualTol) break;
    (gq > 0.0 ? hi : lo) = q;
    double next = q - gq / (1.0 + pk * (p - 1.0) * std::pow(q, p - 2.0));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == q) break;
    q = next;
  }
  return q;
}

}  // namespace

void validate(const ProxParams& params) {
  if (!(params.k >= 0.0) || !std::isfinite(params.k)) {
    throw ParameterError("prox weight K must be finite and >= 0, got " + std::to_string(params.k));
  }
  if (!(params.p >= 1.0 && params.p <= 2.0)) {
    throw ParameterError("prox exponent p must lie in [1, 2], got " + std::to_string(params.p));
  }
}

double prox_lp_scalar(double x, const ProxParams& params) {
  validate(params);
  const double a = std::abs(x);
  if (a == 0.0 || params.k == 0.0) return x;
  if (params.p == 1.0) return soft_threshold(x, params.k);
  if (params.p == 2.0) return x / (1.0 + 2.0 * params.k);
  const double q = solve_shrinkage(a, params.k, params.p);
  return std::copysign(q, x);
}

void prox_lp_inplace(std::span<double> v, const ProxParams& params) {
  validate(params);
  for (double& x : v) x = prox_lp_scalar(x, params);
}

Vector prox_lp_vector(std::span<const double> v, const ProxParams& params) {
  Vector out(v.begin(), v.end());
  prox_lp_inplace(out, params);
  return out;
}

void prox_l1_inplace(std::span<double> v, double k) {
  validate(ProxParams{k, 1.0});
  for (double& x : v) x = soft_threshold(x, k);
}

Vector prox_l1(std::span<const double> v, double k) {
  Vector out(v.begin(), v.end());
  prox_l1_inplace(out, k);
  return out;
}

}  // namespace cdsdmm

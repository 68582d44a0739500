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

#include <span>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

/// Parameters of the penalty K |u|^p, with K >= 0 and 1 <= p <= 2.
struct ProxParams {
  double k = 0.0;
  double p = 1.0;
};

void validate(const ProxParams& params);

/// prox_{K|.|^p}(x) = argmin_u K|u|^p + (u - x)^2 / 2.
///
/// Returns sign(x) q where q >= 0 solves q + p K q^(p-1) = |x|. Closed forms
/// are used at p = 1 (soft threshold) and p = 2; otherwise a safeguarded
/// Newton iteration on the bracket [0, |x|].
double prox_lp_scalar(double x, const ProxParams& params);

Vector prox_lp_vector(std::span<const double> v, const ProxParams& params);
void prox_lp_inplace(std::span<double> v, const ProxParams& params);

/// Elementwise soft threshold max(|v| - k, 0) sign(v).
Vector prox_l1(std::span<const double> v, double k);
void prox_l1_inplace(std::span<double> v, double k);

inline double soft_threshold(double x, double k) {
  if (x > k) return x - k;
  if (x < -k) return x + k;
  return 0.0;
}

}  // namespace cdsdmm

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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdsdmm/convolution.hpp"
#include "cdsdmm/error.hpp"
#include "cdsdmm/image.hpp"
#include "cdsdmm/measurement.hpp"
#include "cdsdmm/wavelet.hpp"

namespace cdsdmm {

/// Compressive deconvolution problem
///
///   min_x ||Psi^-1 H x||_1 + alpha ||x||_p^p + (1 / 2 mu) ||y - Phi H x||_2^2
///
/// on an image grid of H.rows() x H.cols() pixels.
struct Problem {
  ConvolutionOperator h;
  SparsifyingTransform psi;
  MeasurementOperator phi;
  Vector y;
  double alpha = 0.0;
  double mu = 1.0;
  double p = 1.0;

  std::size_t rows() const { return h.rows(); }
  std::size_t cols() const { return h.cols(); }
  std::size_t n() const { return h.rows() * h.cols(); }
};

/// Throws DimensionError / ParameterError when the problem is inconsistent.
void validate(const Problem& problem);

enum class V3Strategy { kAuto, kOrthogonal, kNewton };

std::string to_string(V3Strategy s);
V3Strategy parse_v3_strategy(std::string_view s);

struct SolverConfig {
  double beta = 1.0;
  double tol = 5e-4;
  int max_iters = 500;
  V3Strategy v3_strategy = V3Strategy::kAuto;
  double newton_inner_tol = 1e-8;
  int newton_max_inner = 50;
  /// Evaluate the objective every iteration for the trace. Costs one extra
  /// forward model application.
  bool record_objective = true;
};

void validate(const SolverConfig& config);

struct TraceEntry {
  int iter = 0;
  double objective = 0.0;
  double rel_change = 0.0;
  std::optional<double> nmse;
  double seconds = 0.0;
};

/// Iterates and multipliers of the splitting
///   v1 = x, v2 = Psi^-1 H x, v3 = H x.
struct SolverState {
  Vector x;
  Vector v1, v2, v3;
  Vector b1, b2, b3;
  int iter = 0;
  std::vector<TraceEntry> trace;
  /// Phi^T y, filled by initial_state(); recomputed when empty.
  Vector phi_t_y;
  /// Phi^T Phi v3 as left by the last Newton solve, so the next one can skip
  /// a pass over Phi. Empty when unknown; clear it after editing v3 by hand.
  Vector gram_v3;
};

/// x0 = H^T Phi^T y, v_i = C_i x0, b_i = 0.
SolverState initial_state(const Problem& problem);
/// Same, starting from a caller-supplied image.
SolverState initial_state(const Problem& problem, const Vector& x0);

// Individual steps of one iteration. Each returns the new value and leaves
// the state untouched so the steps can be checked in isolation.

/// Exact minimizer of sum_i ||b_i + C_i x - v_i||^2: solves
/// (I + 2 H^T H) x = (v1 - b1) + H^T Psi (v2 - b2) + H^T (v3 - b3)
/// by pointwise division in the Fourier domain.
Vector update_x(const SolverState& state, const Problem& problem);

/// prox of alpha*beta ||.||_p^p at b1 + x.
Vector update_v1(const SolverState& state, const Problem& problem, const SolverConfig& config);

/// Soft threshold at beta of b2 + Psi^-1 H x.
Vector update_v2(const SolverState& state, const Problem& problem, const SolverConfig& config);

/// Closed-form v3 for row-orthonormal Phi:
/// v3 = r + beta / (beta + mu) Phi^T (y - Phi r), r = b3 + H x.
Vector update_v3_orthogonal(const SolverState& state, const Problem& problem,
                            const SolverConfig& config);

/// Steepest descent with exact line search on
/// h(v) = (beta Phi^T Phi + mu I) v - beta Phi^T y - mu (b3 + H x),
/// warm-started from state.v3.
Vector update_v3_newton(const SolverState& state, const Problem& problem,
                        const SolverConfig& config);

/// Dispatches on config.v3_strategy (kAuto: closed form iff Phi has orthonormal rows).
Vector update_v3(const SolverState& state, const Problem& problem, const SolverConfig& config);

/// b_i += C_i x - v_i, using the state's current x and v_i.
void update_multipliers(SolverState& state, const Problem& problem);

/// One full sweep x -> v1 -> v2 -> v3 -> b. Returns the relative change of x.
double iterate(SolverState& state, const Problem& problem, const SolverConfig& config);

/// Value of the three-term objective at x.
double objective(const Problem& problem, std::span<const double> x);

struct SolveResult {
  Image x;
  std::vector<TraceEntry> trace;
  bool converged = false;
  int iterations = 0;
};

/// Raised when an iterate becomes non-finite. Carries the last finite image.
class DivergedError : public NumericalError {
 public:
  DivergedError(const std::string& what, Image last_finite, std::vector<TraceEntry> trace)
      : NumericalError(what), last_finite_(std::move(last_finite)), trace_(std::move(trace)) {}
  const Image& last_finite() const { return last_finite_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  Image last_finite_;
  std::vector<TraceEntry> trace_;
};

/// Runs the splitting until ||x_k - x_{k-1}|| / ||x_{k-1}|| < tol or
/// max_iters. Reaching max_iters is reported through converged = false.
SolveResult solve(const Problem& problem, const SolverConfig& config,
                  const std::optional<Image>& x0 = std::nullopt,
                  const std::optional<Image>& ground_truth = std::nullopt);

/// Relative change ||a - b|| / ||b||; falls back to ||a - b|| when b = 0.
double relative_change(std::span<const double> a, std::span<const double> b);

}  // namespace cdsdmm

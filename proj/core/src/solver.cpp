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

#include "cdsdmm/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cdsdmm/metrics.hpp"
#include "cdsdmm/prox.hpp"

namespace cdsdmm {
namespace {

Vector phi_t_y_of(const SolverState& state, const Problem& problem) {
  if (state.phi_t_y.size() == problem.n()) return state.phi_t_y;
  return problem.phi.measure_adjoint(problem.y);
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  axpy_into(a, -1.0, b, out);
  return out;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  axpy_into(a, 1.0, b, out);
  return out;
}

Vector v3_orthogonal_from(const Vector& r, const Problem& problem, const SolverConfig& config) {
  if (!problem.phi.rows_orthonormal()) {
    throw StrategyError("closed-form v3 update requires a measurement operator with orthonormal rows");
  }
  Vector resid = problem.phi.measure(r);
  for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = problem.y[i] - resid[i];
  const Vector back = problem.phi.measure_adjoint(resid);
  const double w = config.beta / (config.beta + problem.mu);
  Vector v(r.size());
  axpy_into(r, w, back, v);
  return v;
}

Vector v3_newton_from(const Vector& r, const Vector& warm, const Vector* warm_gram,
                      const Vector& phi_t_y, const Problem& problem, const SolverConfig& config,
                      Vector* gram_out) {
  const double beta = config.beta;
  const double mu = problem.mu;
  const std::size_t n = r.size();

  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = beta * phi_t_y[i] + mu * r[i];
  const double rhs_norm = norm2(rhs);
  const double stop = config.newton_inner_tol * (rhs_norm > 0.0 ? rhs_norm : 1.0);

  Vector v = warm;
  // gv tracks Phi^T Phi v through the iteration.
  Vector gv = warm_gram && warm_gram->size() == n ? *warm_gram : problem.phi.gram(v);
  Vector h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = beta * gv[i] + mu * v[i] - rhs[i];

  Vector phi_h;
  for (int it = 0; it < config.newton_max_inner; ++it) {
    const double hh = dot(h, h);
    if (!std::isfinite(hh)) {
      throw NumericalError("v3 Newton step: non-finite residual at inner iteration " +
                           std::to_string(it));
    }
    if (std::sqrt(hh) <= stop) break;
    Vector gh = problem.phi.gram(h, &phi_h);
    const double curvature = beta * dot(phi_h, phi_h) + mu * hh;
    const double step = hh / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] -= step * h[i];
      gv[i] -= step * gh[i];
      h[i] -= step * (beta * gh[i] + mu * h[i]);
    }
  }
  if (gram_out) *gram_out = std::move(gv);
  return v;
}

Vector v3_dispatch(const Vector& r, const SolverState& state, const Vector& phi_t_y,
                   const Problem& problem, const SolverConfig& config, Vector* gram_out = nullptr) {
  bool newton = config.v3_strategy == V3Strategy::kNewton;
  if (config.v3_strategy == V3Strategy::kAuto) newton = !problem.phi.rows_orthonormal();
  if (!newton) {
    if (gram_out) gram_out->clear();
    return v3_orthogonal_from(r, problem, config);
  }
  return v3_newton_from(r, state.v3, &state.gram_v3, phi_t_y, problem, config, gram_out);
}

bool state_finite(const SolverState& s) {
  return all_finite(s.x) && all_finite(s.v1) && all_finite(s.v2) && all_finite(s.v3) &&
         all_finite(s.b1) && all_finite(s.b2) && all_finite(s.b3);
}

}  // namespace

void validate(const Problem& problem) {
  const std::size_t n = problem.n();
  if (problem.psi.rows() != problem.rows() || problem.psi.cols() != problem.cols()) {
    throw DimensionError("sparsifying transform grid does not match the convolution grid");
  }
  if (problem.phi.n() != n) {
    throw DimensionError("measurement operator acts on R^" + std::to_string(problem.phi.n()) +
                         " but the image has " + std::to_string(n) + " pixels");
  }
  if (problem.y.size() != problem.phi.m()) {
    throw DimensionError("measurement vector has " + std::to_string(problem.y.size()) +
                         " entries, operator produces " + std::to_string(problem.phi.m()));
  }
  if (!(problem.alpha >= 0.0) || !std::isfinite(problem.alpha)) {
    throw ParameterError("alpha must be finite and >= 0");
  }
  if (!(problem.mu > 0.0) || !std::isfinite(problem.mu)) {
    throw ParameterError("mu must be finite and > 0");
  }
  validate(ProxParams{problem.alpha, problem.p});
}

void validate(const SolverConfig& config) {
  if (!(config.beta > 0.0) || !std::isfinite(config.beta)) throw ParameterError("beta must be > 0");
  if (!(config.tol > 0.0)) throw ParameterError("tol must be > 0");
  if (config.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (!(config.newton_inner_tol > 0.0)) throw ParameterError("newton_inner_tol must be > 0");
  if (config.newton_max_inner < 1) throw ParameterError("newton_max_inner must be >= 1");
}

std::string to_string(V3Strategy s) {
  switch (s) {
    case V3Strategy::kAuto:
      return "auto";
    case V3Strategy::kOrthogonal:
      return "orthogonal";
    case V3Strategy::kNewton:
      return "newton";
  }
  return "unknown";
}

V3Strategy parse_v3_strategy(std::string_view s) {
  if (s == "auto") return V3Strategy::kAuto;
  if (s == "orthogonal" || s == "smw") return V3Strategy::kOrthogonal;
  if (s == "newton") return V3Strategy::kNewton;
  throw ParameterError("unknown v3 strategy '" + std::string(s) + "'");
}

double relative_change(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    diff += d * d;
  }
  diff = std::sqrt(diff);
  const double base = norm2(b);
  return base > 0.0 ? diff / base : diff;
}

SolverState initial_state(const Problem& problem, const Vector& x0) {
  validate(problem);
  if (x0.size() != problem.n()) throw DimensionError("initial image size mismatch");
  SolverState s;
  s.phi_t_y = problem.phi.measure_adjoint(problem.y);
  s.x = x0;
  const Vector hx = problem.h.apply(s.x);
  s.v1 = s.x;
  s.v2 = problem.psi.analyze(hx);
  s.v3 = hx;
  s.b1.assign(problem.n(), 0.0);
  s.b2.assign(problem.n(), 0.0);
  s.b3.assign(problem.n(), 0.0);
  return s;
}

SolverState initial_state(const Problem& problem) {
  validate(problem);
  const Vector x0 = problem.h.apply_adjoint(problem.phi.measure_adjoint(problem.y));
  return initial_state(problem, x0);
}

Vector update_x(const SolverState& state, const Problem& problem) {
  const ConvolutionOperator& h = problem.h;
  const Vector d1 = subtract(state.v1, state.b1);
  Vector z = problem.psi.synthesize(subtract(state.v2, state.b2));
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += state.v3[i] - state.b3[i];

  const Spectrum f1 = h.forward(d1);
  Spectrum fz = h.forward(z);
  const auto eig = h.eigenvalues();
  for (std::size_t k = 0; k < fz.size(); ++k) {
    fz[k] = (f1[k] + std::conj(eig[k]) * fz[k]) / (1.0 + 2.0 * std::norm(eig[k]));
  }
  return h.inverse(fz);
}

Vector update_v1(const SolverState& state, const Problem& problem, const SolverConfig& config) {
  Vector v = add(state.b1, state.x);
  prox_lp_inplace(v, ProxParams{problem.alpha * config.beta, problem.p});
  return v;
}

Vector update_v2(const SolverState& state, const Problem& problem, const SolverConfig& config) {
  Vector v = problem.psi.analyze(problem.h.apply(state.x));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += state.b2[i];
  prox_l1_inplace(v, config.beta);
  return v;
}

Vector update_v3_orthogonal(const SolverState& state, const Problem& problem,
                            const SolverConfig& config) {
  return v3_orthogonal_from(add(state.b3, problem.h.apply(state.x)), problem, config);
}

Vector update_v3_newton(const SolverState& state, const Problem& problem,
                        const SolverConfig& config) {
  return v3_newton_from(add(state.b3, problem.h.apply(state.x)), state.v3, &state.gram_v3,
                        phi_t_y_of(state, problem), problem, config, nullptr);
}

Vector update_v3(const SolverState& state, const Problem& problem, const SolverConfig& config) {
  return v3_dispatch(add(state.b3, problem.h.apply(state.x)), state, phi_t_y_of(state, problem),
                     problem, config);
}

void update_multipliers(SolverState& state, const Problem& problem) {
  const Vector hx = problem.h.apply(state.x);
  const Vector psi_hx = problem.psi.analyze(hx);
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    state.b1[i] += state.x[i] - state.v1[i];
    state.b2[i] += psi_hx[i] - state.v2[i];
    state.b3[i] += hx[i] - state.v3[i];
  }
}

double iterate(SolverState& state, const Problem& problem, const SolverConfig& config) {
  if (state.phi_t_y.size() != problem.n()) state.phi_t_y = problem.phi.measure_adjoint(problem.y);
  Vector x_new = update_x(state, problem);
  const double change = relative_change(x_new, state.x);
  state.x = std::move(x_new);

  // H x and Psi^-1 H x are shared by the v2, v3 and multiplier updates.
  const Vector hx = problem.h.apply(state.x);
  const Vector psi_hx = problem.psi.analyze(hx);

  state.v1 = update_v1(state, problem, config);

  Vector v2 = add(state.b2, psi_hx);
  prox_l1_inplace(v2, config.beta);
  state.v2 = std::move(v2);

  state.v3 = v3_dispatch(add(state.b3, hx), state, state.phi_t_y, problem, config, &state.gram_v3);

  for (std::size_t i = 0; i < state.x.size(); ++i) {
    state.b1[i] += state.x[i] - state.v1[i];
    state.b2[i] += psi_hx[i] - state.v2[i];
    state.b3[i] += hx[i] - state.v3[i];
  }
  ++state.iter;
  return change;
}

double objective(const Problem& problem, std::span<const double> x) {
  if (x.size() != problem.n()) throw DimensionError("objective: image size mismatch");
  const Vector hx = problem.h.apply(x);
  const double sparsity = norm1(problem.psi.analyze(hx));
  double prior = 0.0;
  if (problem.alpha != 0.0) {
    for (double v : x) prior += std::pow(std::abs(v), problem.p);
    prior *= problem.alpha;
  }
  const Vector phx = problem.phi.measure(hx);
  double fit = 0.0;
  for (std::size_t i = 0; i < phx.size(); ++i) {
    const double d = problem.y[i] - phx[i];
    fit += d * d;
  }
  return sparsity + prior + fit / (2.0 * problem.mu);
}

SolveResult solve(const Problem& problem, const SolverConfig& config,
                  const std::optional<Image>& x0, const std::optional<Image>& ground_truth) {
  validate(problem);
  validate(config);
  if (ground_truth && (ground_truth->rows() != problem.rows() || ground_truth->cols() != problem.cols())) {
    throw DimensionError("ground truth size does not match the problem grid");
  }
  SolverState state = x0 ? initial_state(problem, x0->data()) : initial_state(problem);
  if (!state_finite(state)) throw NumericalError("initial state is not finite");

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  SolveResult result;
  Vector last_x = state.x;
  for (int k = 1; k <= config.max_iters; ++k) {
    const double change = iterate(state, problem, config);
    if (!state_finite(state) || !std::isfinite(change)) {
      throw DivergedError("solver diverged at iteration " + std::to_string(k),
                          Image(problem.rows(), problem.cols(), last_x), state.trace);
    }
    TraceEntry entry;
    entry.iter = k;
    entry.rel_change = change;
    entry.objective = config.record_objective ? objective(problem, state.x)
                                              : std::numeric_limits<double>::quiet_NaN();
    if (ground_truth && max_abs(state.x) > 0.0) entry.nmse = nmse(ground_truth->span(), state.x);
    entry.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    state.trace.push_back(entry);
    last_x = state.x;
    // With v = C x0 and b = 0 the first x-update reproduces x0 exactly, so the
    // change test only means something from the second iteration on.
    const bool testable = k > 1 || std::isinf(config.tol);
    if (testable && change < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.iterations = state.iter;
  result.x = Image(problem.rows(), problem.cols(), std::move(state.x));
  result.trace = std::move(state.trace);
  return result;
}

}  // namespace cdsdmm

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

#include <benchmark/benchmark.h>

#include "cdsdmm/phantom.hpp"
#include "cdsdmm/rng.hpp"
#include "cdsdmm/solver.hpp"

namespace cdsdmm {
namespace {

Problem phantom_problem(std::size_t side, MeasurementKind kind) {
  PhantomSpec spec;
  spec.rows = side;
  spec.cols = side;
  spec.regions = default_regions(side, side);
  const PhantomData d = generate_phantom(spec, synthesize_psf(PsfSpec{}));
  const std::size_t n = side * side;
  const std::size_t m = n / 2;
  Problem p{build_convolution(d.psf, side, side), default_transform(side, side),
            kind == MeasurementKind::kSrm ? build_srm(1, n, m) : build_gaussian(1, n, m), {}, 0.1, 0.01, 1.0};
  p.y = add_noise_snr(p.phi.measure(d.rf.span()), 40.0, 2);
  return p;
}

void BM_Iteration(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto kind = static_cast<MeasurementKind>(state.range(1));
  const Problem problem = phantom_problem(side, kind);
  SolverConfig config;
  config.beta = 0.3;
  config.newton_max_inner = 1;
  SolverState s = initial_state(problem);
  for (auto _ : state) benchmark::DoNotOptimize(iterate(s, problem, config));
}
BENCHMARK(BM_Iteration)
    ->Args({64, static_cast<int>(MeasurementKind::kSrm)})
    ->Args({128, static_cast<int>(MeasurementKind::kSrm)})
    ->Args({256, static_cast<int>(MeasurementKind::kSrm)})
    ->Args({64, static_cast<int>(MeasurementKind::kGaussian)})
    ->Unit(benchmark::kMillisecond);

void BM_SolveDefaultPhantom(benchmark::State& state) {
  const Problem problem = phantom_problem(128, MeasurementKind::kSrm);
  SolverConfig config;
  config.beta = 0.3;
  config.record_objective = false;
  for (auto _ : state) {
    const SolveResult r = solve(problem, config);
    state.counters["iterations"] = r.iterations;
  }
}
BENCHMARK(BM_SolveDefaultPhantom)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
}  // namespace cdsdmm

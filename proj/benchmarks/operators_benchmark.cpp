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

#include <random>

#include "cdsdmm/convolution.hpp"
#include "cdsdmm/measurement.hpp"
#include "cdsdmm/phantom.hpp"
#include "cdsdmm/prox.hpp"
#include "cdsdmm/wavelet.hpp"

namespace cdsdmm {
namespace {

Vector random_input(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Vector v(n);
  for (double& x : v) x = d(rng);
  return v;
}

void BM_Convolution(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const ConvolutionOperator h = build_convolution(synthesize_psf(PsfSpec{}), side, side);
  const Vector x = random_input(side * side, 1);
  for (auto _ : state) benchmark::DoNotOptimize(h.apply(x));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}
BENCHMARK(BM_Convolution)->RangeMultiplier(2)->Range(64, 512);

void BM_WaveletAnalyze(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const SparsifyingTransform psi(WaveletFamily::kDaubechies4, 3, side, side);
  const Vector x = random_input(side * side, 2);
  for (auto _ : state) benchmark::DoNotOptimize(psi.analyze(x));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}
BENCHMARK(BM_WaveletAnalyze)->RangeMultiplier(2)->Range(64, 512);

void BM_SrmGram(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const std::size_t n = side * side;
  const MeasurementOperator phi = build_srm(3, n, n / 2, SrmOptions{static_cast<SrmBase>(state.range(1)), true});
  const Vector x = random_input(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(phi.gram(x));
}
BENCHMARK(BM_SrmGram)->ArgsProduct({{64, 128, 256}, {0, 1}});

void BM_GaussianGram(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const std::size_t n = side * side;
  const MeasurementOperator phi = build_gaussian(4, n, n / 2);
  const Vector x = random_input(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(phi.gram(x));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(n * (n / 2) * sizeof(float)));
}
BENCHMARK(BM_GaussianGram)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ProxLp(benchmark::State& state) {
  const ProxParams params{0.7, static_cast<double>(state.range(0)) / 10.0};
  const Vector x = random_input(1 << 14, 5);
  for (auto _ : state) benchmark::DoNotOptimize(prox_lp_vector(x, params));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}
BENCHMARK(BM_ProxLp)->Arg(10)->Arg(12)->Arg(15)->Arg(18)->Arg(20);

}  // namespace
}  // namespace cdsdmm

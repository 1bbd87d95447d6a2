// Copyright 2026 The Tempocast Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "tempocast/features.hpp"
#include "tempocast/fft.hpp"
#include "tempocast/synthetic.hpp"

namespace {

tempocast::Matrix random_window(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  tempocast::Matrix m(24, 8);
  for (double& v : m.data()) v = u(rng);
  return m;
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const tempocast::FftPlan plan(n);
  std::vector<tempocast::Complex> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {std::sin(0.3 * double(i)), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(plan.forward(x));
}
BENCHMARK(BM_Fft)->Arg(24)->Arg(32)->Arg(256)->Arg(360);

void BM_SpectralFeatures(benchmark::State& state) {
  const auto w = random_window(1);
  for (auto _ : state) benchmark::DoNotOptimize(tempocast::spectral_features(w));
}
BENCHMARK(BM_SpectralFeatures);

void BM_MultiScaleRankPool(benchmark::State& state) {
  const auto w = random_window(2);
  for (auto _ : state) benchmark::DoNotOptimize(tempocast::multi_scale_rank_pool(w));
}
BENCHMARK(BM_MultiScaleRankPool);

void BM_AssembleMatrix(benchmark::State& state) {
  tempocast::SyntheticSpec spec;
  spec.length = 1000;
  const auto frame = std::make_shared<const tempocast::TimeSeriesFrame>(
      tempocast::gen_synthetic(spec, 1));
  const auto ds = tempocast::make_windows(frame, static_cast<std::size_t>(state.range(0)));
  const auto scalers = tempocast::fit_feature_scalers(ds);
  for (auto _ : state)
    benchmark::DoNotOptimize(tempocast::assemble_matrix(ds, {true, true}, scalers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.size()));
}
BENCHMARK(BM_AssembleMatrix)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

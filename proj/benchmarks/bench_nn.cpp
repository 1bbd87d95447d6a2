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

#include "tempocast/nn/lstm.hpp"
#include "tempocast/nn/mixer.hpp"
#include "tempocast/nn/mlp.hpp"

namespace {

using tempocast::Matrix;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = u(rng);
  return m;
}

void run_gradient(benchmark::State& state, tempocast::nn::Network& net) {
  net.initialize(1);
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(batch, net.input_dim(), 2);
  const auto y = random_matrix(batch, net.output_dim(), 3);
  std::vector<double> grad(net.parameter_count());
  for (auto _ : state) benchmark::DoNotOptimize(net.loss_gradient(x, y, grad));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}

// Full-sized MLP on the widest input (lookback 16 with both descriptors).
void BM_MlpGradient(benchmark::State& state) {
  tempocast::nn::Mlp net({184, {100, 200, 50}, 6});
  run_gradient(state, net);
}
BENCHMARK(BM_MlpGradient)->Arg(64);

void BM_LstmGradient(benchmark::State& state) {
  tempocast::nn::Lstm net({16, 8, 56, 4, 6});
  run_gradient(state, net);
}
BENCHMARK(BM_LstmGradient)->Arg(64);

void BM_MixerGradient(benchmark::State& state) {
  tempocast::nn::Mixer net({4, 16, 8, 56, 64, 128, 6});
  run_gradient(state, net);
}
BENCHMARK(BM_MixerGradient)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MlpForward(benchmark::State& state) {
  tempocast::nn::Mlp net({184, {100, 200, 50}, 6});
  net.initialize(1);
  const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 184, 2);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(400);

}  // namespace

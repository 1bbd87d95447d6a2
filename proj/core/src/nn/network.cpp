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

#include "tempocast/nn/network.hpp"

#include <cmath>
#include <string>

#include "tempocast/nn/lstm.hpp"
#include "tempocast/nn/mixer.hpp"
#include "tempocast/nn/mlp.hpp"

namespace tempocast::nn {

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::kMlp:
      return "MLP";
    case Architecture::kLstm:
      return "LSTM";
    case Architecture::kMixer:
      return "MIXER";
  }
  return "?";
}

void Network::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  initialize_impl(rng);
}

std::vector<double> Network::forward_one(std::span<const double> x) const {
  Matrix in(1, x.size(), std::vector<double>(x.begin(), x.end()));
  const Matrix out = forward(in);
  return {out.data().begin(), out.data().end()};
}

void Network::check_batch(const Matrix& inputs, const Matrix* targets) const {
  if (inputs.rows() == 0) throw ShapeError("empty batch");
  if (inputs.cols() != input_dim())
    throw ShapeError(std::string(to_string(architecture())) + ": expected input width " +
                     std::to_string(input_dim()) + ", got " + std::to_string(inputs.cols()));
  if (targets && (targets->rows() != inputs.rows() || targets->cols() != output_dim()))
    throw ShapeError(std::string(to_string(architecture())) + ": target shape " +
                     std::to_string(targets->rows()) + "x" + std::to_string(targets->cols()) +
                     " does not match batch " + std::to_string(inputs.rows()) + "x" +
                     std::to_string(output_dim()));
}

void Network::fill_uniform(std::span<double> values, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& v : values) v = dist(rng);
}

std::unique_ptr<Network> make_network(Architecture arch, std::span<const std::uint64_t> shape) {
  switch (arch) {
    case Architecture::kMlp:
      return std::make_unique<Mlp>(Mlp::config_from_shape(shape));
    case Architecture::kLstm:
      return std::make_unique<Lstm>(Lstm::config_from_shape(shape));
    case Architecture::kMixer:
      return std::make_unique<Mixer>(Mixer::config_from_shape(shape));
  }
  throw FormatError("unknown architecture code");
}

}  // namespace tempocast::nn

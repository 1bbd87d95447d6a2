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

#pragma once

#include <vector>

#include "tempocast/nn/network.hpp"
#include "tempocast/nn/ops.hpp"

namespace tempocast::nn {

struct MlpConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden = {100, 200, 50};
  std::size_t output_dim = 6;
  Activation hidden_activation = Activation::kTanh;
  Activation output_activation = Activation::kSigmoid;
};

/// Read-only view of one fully connected layer inside an Mlp.
struct DenseLayer {
  std::span<const double> weights;  // out x in, row-major
  std::span<const double> bias;     // out
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::kIdentity;
};

/// Fully connected network: tanh hidden layers, sigmoid output.
class Mlp final : public Network {
 public:
  /// Zero parameters; call initialize() or write parameters() directly.
  explicit Mlp(MlpConfig config);

  Architecture architecture() const noexcept override { return Architecture::kMlp; }
  std::size_t input_dim() const noexcept override { return config_.input_dim; }
  std::size_t output_dim() const noexcept override { return config_.output_dim; }
  std::vector<std::uint64_t> shape_table() const override;
  static MlpConfig config_from_shape(std::span<const std::uint64_t> shape);

  Matrix forward(const Matrix& inputs) const override;
  double loss_gradient(const Matrix& inputs, const Matrix& targets,
                       std::span<double> grad) const override;
  std::unique_ptr<Network> clone() const override { return std::make_unique<Mlp>(*this); }

  const MlpConfig& config() const noexcept { return config_; }
  std::size_t layer_count() const noexcept { return dims_.size() - 1; }
  DenseLayer layer(std::size_t i) const;

 protected:
  void initialize_impl(std::mt19937_64& rng) override;

 private:
  Activation activation_of(std::size_t layer) const noexcept {
    return layer + 1 == layer_count() ? config_.output_activation : config_.hidden_activation;
  }
  // Pre-activations and activations for every layer (index 0 = input).
  void run(const Matrix& inputs, std::vector<Matrix>& pre, std::vector<Matrix>& act) const;

  MlpConfig config_;
  std::vector<std::size_t> dims_;     // input, hidden..., output
  std::vector<std::size_t> offsets_;  // start of each layer's W in params_
};

}  // namespace tempocast::nn

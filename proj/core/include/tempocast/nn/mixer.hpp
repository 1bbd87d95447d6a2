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

/// Tokens are time steps; each token carries the step's raw values plus the
/// per-sample static features, so channels = step_features + static_features.
struct MixerConfig {
  std::size_t blocks = 4;
  std::size_t tokens = 4;
  std::size_t step_features = 8;
  std::size_t static_features = 0;
  std::size_t token_hidden = 64;
  std::size_t channel_hidden = 128;
  std::size_t output_dim = 6;

  std::size_t channels() const noexcept { return step_features + static_features; }
  std::size_t input_dim() const noexcept { return tokens * step_features + static_features; }
};

inline constexpr double kLayerNormEpsilon = 1e-5;

/// Parameter views of one mixer block.
struct MixerBlock {
  std::span<const double> norm1_gain, norm1_bias;      // channels
  std::span<const double> token_w1, token_b1;          // token_hidden x tokens, token_hidden
  std::span<const double> token_w2, token_b2;          // tokens x token_hidden, tokens
  std::span<const double> norm2_gain, norm2_bias;      // channels
  std::span<const double> channel_w1, channel_b1;      // channel_hidden x channels, channel_hidden
  std::span<const double> channel_w2, channel_b2;      // channels x channel_hidden, channels
};

/// MLP-Mixer over a tokens x channels matrix. Each block applies
///   X <- X + TokenMLP(LayerNorm(X)^T)^T     (mixes across time steps)
///   X <- X + ChannelMLP(LayerNorm(X))       (mixes across channels)
/// with GELU MLPs; the output is a sigmoid head over the token mean.
class Mixer final : public Network {
 public:
  explicit Mixer(MixerConfig config);

  Architecture architecture() const noexcept override { return Architecture::kMixer; }
  std::size_t input_dim() const noexcept override { return config_.input_dim(); }
  std::size_t output_dim() const noexcept override { return config_.output_dim; }
  std::vector<std::uint64_t> shape_table() const override;
  static MixerConfig config_from_shape(std::span<const std::uint64_t> shape);

  Matrix forward(const Matrix& inputs) const override;
  double loss_gradient(const Matrix& inputs, const Matrix& targets,
                       std::span<double> grad) const override;
  std::unique_ptr<Network> clone() const override { return std::make_unique<Mixer>(*this); }

  const MixerConfig& config() const noexcept { return config_; }
  MixerBlock block(std::size_t i) const;
  std::span<const double> head_weights() const;  // output_dim x channels
  std::span<const double> head_bias() const;

  /// tokens x channels view of a flat input row.
  Matrix tokens_of(std::span<const double> row) const;

  std::size_t block_offset(std::size_t i) const noexcept { return i * block_size(); }
  std::size_t block_size() const noexcept;
  std::size_t head_offset() const noexcept { return config_.blocks * block_size(); }

 protected:
  void initialize_impl(std::mt19937_64& rng) override;

 private:
  MixerConfig config_;
};

}  // namespace tempocast::nn

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

/// Squashing applied to the cell state before the output gate.
enum class CellActivation : std::uint8_t { kTanh = 0, kSoftsign = 1 };

struct LstmConfig {
  std::size_t lookback = 1;
  std::size_t step_features = 8;
  std::size_t static_features = 0;
  std::size_t units = 4;
  std::size_t output_dim = 6;
  CellActivation cell_activation = CellActivation::kTanh;

  std::size_t step_input() const noexcept { return step_features + static_features; }
  std::size_t input_dim() const noexcept { return lookback * step_features + static_features; }
};

/// Read-only view of the cell parameters. Gate matrices are
/// units x (units + step_input) over the concatenation [h_prev, x_t].
struct LstmCell {
  std::span<const double> w_forget, w_input, w_candidate, w_output;
  std::span<const double> b_forget, b_input, b_candidate, b_output;
  std::span<const double> w_head;  // output_dim x units
  std::span<const double> b_head;  // output_dim
  std::size_t units = 0;
  std::size_t step_input = 0;
  std::size_t output_dim = 0;
  CellActivation cell_activation = CellActivation::kTanh;
};

struct LstmStepResult {
  std::vector<double> h;
  std::vector<double> c;
  std::vector<double> y;  // sigmoid(W_head h + b_head)
};

/// One time step:
///   f = sigmoid(Wf [h, x] + bf)   i = sigmoid(Wi [h, x] + bi)
///   g = tanh(Wc [h, x] + bc)      o = sigmoid(Wo [h, x] + bo)
///   c' = f * c + i * g            h' = o * act(c')
LstmStepResult lstm_step(const LstmCell& cell, std::span<const double> x,
                         std::span<const double> h_prev, std::span<const double> c_prev);

/// Single-layer LSTM unrolled over the lookback from a zero state; the final
/// hidden state feeds a dense sigmoid head.
class Lstm final : public Network {
 public:
  explicit Lstm(LstmConfig config);

  Architecture architecture() const noexcept override { return Architecture::kLstm; }
  std::size_t input_dim() const noexcept override { return config_.input_dim(); }
  std::size_t output_dim() const noexcept override { return config_.output_dim; }
  std::vector<std::uint64_t> shape_table() const override;
  static LstmConfig config_from_shape(std::span<const std::uint64_t> shape);

  Matrix forward(const Matrix& inputs) const override;
  double loss_gradient(const Matrix& inputs, const Matrix& targets,
                       std::span<double> grad) const override;
  std::unique_ptr<Network> clone() const override { return std::make_unique<Lstm>(*this); }

  const LstmConfig& config() const noexcept { return config_; }
  LstmCell cell() const;

  /// Step t of a flat input row: raw step values followed by the static tail.
  std::vector<double> step_input(std::span<const double> row, std::size_t t) const;

  // Offsets into parameters(): stacked gate weights (f, i, c, o), stacked
  // gate biases, head weights, head bias.
  std::size_t gate_weights_offset() const noexcept { return 0; }
  std::size_t gate_bias_offset() const noexcept;
  std::size_t head_weights_offset() const noexcept;
  std::size_t head_bias_offset() const noexcept;

 protected:
  void initialize_impl(std::mt19937_64& rng) override;

 private:
  LstmConfig config_;
};

}  // namespace tempocast::nn

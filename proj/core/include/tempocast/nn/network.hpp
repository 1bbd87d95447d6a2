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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "tempocast/matrix.hpp"

namespace tempocast::nn {

enum class Architecture : std::uint8_t { kMlp = 0, kLstm = 1, kMixer = 2 };

std::string_view to_string(Architecture a);

/// A regressor whose parameters live in one flat vector, so optimizers,
/// finite-difference checks and serialization treat every architecture alike.
///
/// Every network maps a flat input row to `output_dim()` values in (0, 1)
/// through a sigmoid head. Sequence networks read the row as `lookback`
/// steps of `step_features` raw values followed by `static_features`
/// per-sample values that are appended to every step.
class Network {
 public:
  virtual ~Network() = default;

  virtual Architecture architecture() const noexcept = 0;
  virtual std::size_t input_dim() const noexcept = 0;
  virtual std::size_t output_dim() const noexcept = 0;

  /// Integers that, with the parameter vector, rebuild the network.
  virtual std::vector<std::uint64_t> shape_table() const = 0;

  /// One output row per input row.
  virtual Matrix forward(const Matrix& inputs) const = 0;

  /// Mean over the batch of the per-sample MSE (averaged over outputs).
  /// Overwrites `grad` with the exact gradient w.r.t. parameters().
  virtual double loss_gradient(const Matrix& inputs, const Matrix& targets,
                               std::span<double> grad) const = 0;

  virtual std::unique_ptr<Network> clone() const = 0;

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  /// Seeded uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) init of weights and
  /// biases; normalization gains start at 1 and offsets at 0.
  void initialize(std::uint64_t seed);

  std::vector<double> forward_one(std::span<const double> x) const;

 protected:
  Network() = default;
  Network(const Network&) = default;
  Network& operator=(const Network&) = default;

  virtual void initialize_impl(std::mt19937_64& rng) = 0;
  void check_batch(const Matrix& inputs, const Matrix* targets) const;

  static void fill_uniform(std::span<double> values, std::size_t fan_in,
                           std::mt19937_64& rng);

  std::vector<double> params_;
};

/// Rebuilds a zero-parameter network of the given architecture and shape.
std::unique_ptr<Network> make_network(Architecture arch,
                                      std::span<const std::uint64_t> shape);

}  // namespace tempocast::nn

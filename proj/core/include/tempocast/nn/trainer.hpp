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
#include <limits>
#include <string_view>
#include <vector>

#include "tempocast/matrix.hpp"
#include "tempocast/nn/adam.hpp"
#include "tempocast/nn/network.hpp"

namespace tempocast::nn {

enum class PatienceUnit : std::uint8_t { kEpochs = 0, kSteps = 1 };

std::string_view to_string(PatienceUnit u);
PatienceUnit parse_patience_unit(std::string_view s);

struct TrainConfig {
  AdamConfig adam;
  std::size_t max_epochs = 500;
  std::size_t patience = 50;
  PatienceUnit patience_unit = PatienceUnit::kEpochs;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;

  /// Patience 50, at most 500 epochs.
  static TrainConfig desk();
  /// Patience 1500, at most 5000 epochs.
  static TrainConfig full();

  bool operator==(const TrainConfig&) const = default;
};

void validate(const TrainConfig& config);

/// Tracks the best validation loss. In step mode the counter advances by the
/// number of optimizer steps taken since the previous observation.
class EarlyStopping {
 public:
  EarlyStopping(std::size_t patience, PatienceUnit unit = PatienceUnit::kEpochs);

  /// Records one evaluation; returns true when it is a new best.
  bool observe(std::size_t epoch, double val_loss, std::size_t steps_since_last = 1);
  bool should_stop() const noexcept { return since_best_ >= patience_; }

  std::size_t best_epoch() const noexcept { return best_epoch_; }
  double best_loss() const noexcept { return best_loss_; }

 private:
  std::size_t patience_;
  PatienceUnit unit_;
  std::size_t best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t since_best_ = 0;
};

struct TrainHistory {
  std::vector<double> train_loss;  // mean minibatch loss per epoch
  std::vector<double> val_loss;
  std::size_t best_epoch = 0;      // 1-based
  double best_val_loss = 0.0;
  std::size_t steps = 0;
  bool stopped_early = false;

  std::size_t epochs() const noexcept { return val_loss.size(); }
};

/// Minibatch Adam on mean MSE with seeded shuffling. The network keeps its
/// current parameters as the starting point and ends holding the parameters
/// of the best validation epoch. Throws TrainingError on a non-finite loss.
TrainHistory train_network(Network& net, const Matrix& x_train, const Matrix& y_train,
                           const Matrix& x_val, const Matrix& y_val, const TrainConfig& config);

}  // namespace tempocast::nn

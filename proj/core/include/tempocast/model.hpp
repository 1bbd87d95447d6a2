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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempocast/ensemble.hpp"
#include "tempocast/features.hpp"
#include "tempocast/nn/lstm.hpp"
#include "tempocast/nn/network.hpp"
#include "tempocast/nn/trainer.hpp"
#include "tempocast/preprocess.hpp"
#include "tempocast/variant.hpp"

namespace tempocast {

/// Regressor sizes shared by every cell of a run.
struct ModelHyper {
  std::vector<std::size_t> mlp_hidden = {100, 200, 50};
  std::size_t lstm_units = 4;
  nn::CellActivation lstm_cell_activation = nn::CellActivation::kTanh;
  std::size_t mixer_blocks = 4;
  std::size_t mixer_token_hidden = 64;
  std::size_t mixer_channel_hidden = 128;

  bool operator==(const ModelHyper&) const = default;
};

/// Untrained network for one branch; the input width follows the feature set.
std::unique_ptr<nn::Network> make_branch_network(nn::Architecture arch, FeatureSet features,
                                                 std::size_t lookback, std::size_t horizons,
                                                 const ModelHyper& hyper);

struct TrainedBranch {
  FeatureSet features;
  std::shared_ptr<const nn::Network> network;
  std::size_t best_epoch = 0;
};

/// Immutable after training; safe to share across threads for prediction.
struct TrainedModel {
  static constexpr std::uint16_t kFormatVersion = 1;

  std::string variant;
  std::size_t lookback = 0;
  std::size_t retro = kDefaultRetro;
  std::size_t horizons = kDefaultHorizons;
  FeatureScalers scalers;
  nn::TrainConfig train_config;
  std::vector<TrainedBranch> branches;  // one, or (FFT, RP) when fused
  std::optional<FusionWeights> fusion;
};

/// Scaled [0, 1] targets from m/s, using the WS10mi min-max column.
Matrix scale_targets(const FeatureScalers& scalers, const WindowedDataset& ds);

/// Trains a single-branch variant. The split's train block fits the scalers
/// and the weights; its val block drives early stopping.
TrainedModel train_model(const Variant& variant, const DatasetSplit& split,
                         const ModelHyper& hyper, const nn::TrainConfig& config);

/// Builds a fused variant from trained FFT and RP branches, fitting one
/// regression per horizon on the branches' clamped m/s predictions over `fit`.
TrainedModel fuse_models(const Variant& variant, const TrainedModel& fft_model,
                         const TrainedModel& rp_model, const WindowedDataset& fit);

/// n x horizons forecast in m/s, clamped at 0.
Matrix predict(const TrainedModel& model, const WindowedDataset& ds);
/// Forecast of a single branch, in m/s and clamped.
Matrix predict_branch(const TrainedModel& model, std::size_t branch, const WindowedDataset& ds);

/// Truth matrix (n x horizons, m/s) of a dataset.
Matrix targets_of(const WindowedDataset& ds);

/// Per-cell seed from the run seed, the variant name and the lookback.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view variant,
                          std::size_t lookback);

std::string save_model(const TrainedModel& model);
TrainedModel load_model(std::string_view bytes);
void save_model_file(const TrainedModel& model, const std::string& path);
TrainedModel load_model_file(const std::string& path);

}  // namespace tempocast

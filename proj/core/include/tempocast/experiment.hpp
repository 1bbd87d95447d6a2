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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempocast/ingest.hpp"
#include "tempocast/metrics.hpp"
#include "tempocast/model.hpp"
#include "tempocast/nn/trainer.hpp"
#include "tempocast/preprocess.hpp"
#include "tempocast/synthetic.hpp"

namespace tempocast {

/// Everything a grid run depends on. Serializes to flat `key = value` text
/// (see keys()); parsing that text reproduces the config exactly.
struct ExperimentConfig {
  std::string data_path;  // empty: synthetic data
  SyntheticSpec synthetic;
  GapPolicy gap_policy = GapPolicy::kForwardFill;
  std::vector<std::string> variants;
  std::vector<std::size_t> lookbacks = {4, 8, 12, 16};
  std::size_t horizons = kDefaultHorizons;
  std::size_t retro = kDefaultRetro;
  SplitFractions split;
  std::string profile = "desk";
  nn::TrainConfig train = nn::TrainConfig::desk();
  ModelHyper hyper;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;  // 0: one per hardware thread

  ExperimentConfig();

  static const std::vector<std::string>& keys();
  /// Throws ParameterError for unknown keys or malformed values. Setting
  /// `profile` resets the training schedule to that preset.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// `key = value` lines; `#` starts a comment.
  static ExperimentConfig parse(std::string_view text);
  void apply(std::string_view text);
  std::string to_text() const;

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Loads the configured CSV (gap-filled per policy) or generates synthetic
/// data from the run seed.
TimeSeriesFrame load_frame(const ExperimentConfig& config);

/// Fit-block mean squared errors behind one fused horizon.
struct FusionDiagnostic {
  std::string variant;
  std::size_t lookback = 0;
  std::size_t horizon = 0;
  double fused_mse = 0.0;
  double fft_mse = 0.0;
  double rp_mse = 0.0;
  double mean_mse = 0.0;
};

struct CellFailure {
  std::string variant;
  std::size_t lookback = 0;
  std::string message;
};

struct GridResult {
  ResultsTable table;
  /// Test-block forecasts per (variant, lookback).
  std::map<CellKey, CellPredictions> predictions;
  std::map<CellKey, std::shared_ptr<const TrainedModel>> models;
  std::vector<FusionDiagnostic> fusion;
  std::vector<CellFailure> failures;
  /// PERSISTENCE and MEAN rows on the same test blocks.
  ResultsTable baselines;
};

/// Trains and evaluates every (variant, lookback) cell. Fused variants reuse
/// the FFT and RP branch models of the same lookback. Cells whose training
/// fails are marked failed; the rest of the grid still runs.
GridResult run_grid(const ExperimentConfig& config, const TimeSeriesFrame& frame);
GridResult run_grid(const ExperimentConfig& config);

/// Every horizon forecast equals WS10mi at the origin hour.
Matrix persistence_baseline(const WindowedDataset& ds);
/// Every forecast equals the mean training target.
Matrix constant_mean_baseline(const WindowedDataset& train, std::size_t rows);

}  // namespace tempocast

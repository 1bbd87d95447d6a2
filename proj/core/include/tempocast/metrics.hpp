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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempocast/matrix.hpp"

namespace tempocast {

double mae(std::span<const double> pred, std::span<const double> truth);
double rmse(std::span<const double> pred, std::span<const double> truth);
/// Empty when either series has zero variance.
std::optional<double> pearson_r(std::span<const double> pred, std::span<const double> truth);

/// Percent reduction of an error metric: 100 * (baseline - model) / baseline.
double improvement(double baseline, double model);
/// Percent increase of a correlation: 100 * (model - baseline) / baseline.
double improvement_r(double baseline, double model);

struct MetricsCell {
  std::string variant;
  std::size_t lookback = 0;
  std::size_t horizon = 0;  // 1-based hours ahead
  double mae = 0.0;
  double rmse = 0.0;
  std::optional<double> r;
  bool failed = false;

  bool operator==(const MetricsCell&) const = default;
};

struct CellKey {
  std::string variant;
  std::size_t lookback = 0;

  auto operator<=>(const CellKey&) const = default;
};

/// Predictions and truth for one (variant, lookback), n samples x H horizons.
struct CellPredictions {
  Matrix pred;
  Matrix truth;
};

struct ResultsTable {
  std::vector<MetricsCell> cells;

  const MetricsCell* find(std::string_view variant, std::size_t lookback,
                          std::size_t horizon) const;
  bool has_failures() const;
  std::vector<std::string> variants() const;   // first-seen order
  std::vector<std::size_t> lookbacks() const;  // ascending
  std::size_t horizons() const;

  bool operator==(const ResultsTable&) const = default;
};

/// Metrics for one cell, one entry per horizon column.
std::vector<MetricsCell> evaluate_cell(const std::string& variant, std::size_t lookback,
                                       const Matrix& pred, const Matrix& truth);

/// One cell per (variant, lookback, horizon), in variant-major order. A
/// requested pair without predictions raises ParameterError naming it.
ResultsTable metrics_grid(const std::map<CellKey, CellPredictions>& predictions,
                          const std::vector<std::string>& variants,
                          const std::vector<std::size_t>& lookbacks);

}  // namespace tempocast

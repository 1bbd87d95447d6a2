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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "tempocast/metrics.hpp"

namespace tempocast {

enum class Metric { kMae, kRmse, kR };

/// Wide table: one row per (variant, step), then MAE, RMSE and R columns for
/// each lookback. Undefined R is written as `undefined`, failed cells as
/// `failed`. Values use the shortest exact decimal form.
std::string format_table_csv(const ResultsTable& table);

/// Percent improvement over MLP at the same lookback and step, rounded to
/// 0.1; one row per (variant, lookback) with columns h1..hH. Throws
/// ParameterError when an MLP cell is missing.
std::string format_improvement_csv(const ResultsTable& table, Metric metric);

/// Long format, one line per cell; round-trips exactly through parse.
std::string format_results_csv(const ResultsTable& table);
ResultsTable parse_results_csv(std::string_view text);

/// One line per (variant, lookback, sample, horizon) with pred and truth.
std::string format_predictions_csv(const std::map<CellKey, CellPredictions>& predictions);
std::map<CellKey, CellPredictions> parse_predictions_csv(std::string_view text);

/// Writes table.csv, improvement_{mae,rmse,r}.csv (when requested) and
/// run_manifest into out_dir, creating it if needed.
void emit_report(const ResultsTable& results, const std::filesystem::path& out_dir,
                 std::string_view manifest, bool improvements = true);

}  // namespace tempocast

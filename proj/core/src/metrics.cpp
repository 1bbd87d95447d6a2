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

#include "tempocast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tempocast/error.hpp"

namespace tempocast {
namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size())
    throw ShapeError("metrics: prediction length " + std::to_string(pred.size()) +
                     " differs from truth length " + std::to_string(truth.size()));
  if (pred.empty()) throw ShapeError("metrics: empty series");
}

}  // namespace

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

std::optional<double> pearson_r(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  const double n = static_cast<double>(pred.size());
  double mp = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    mp += pred[i];
    mt += truth[i];
  }
  mp /= n;
  mt /= n;
  double spp = 0.0, stt = 0.0, spt = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dp = pred[i] - mp, dt = truth[i] - mt;
    spp += dp * dp;
    stt += dt * dt;
    spt += dp * dt;
  }
  if (spp == 0.0 || stt == 0.0) return std::nullopt;
  return std::clamp(spt / std::sqrt(spp * stt), -1.0, 1.0);
}

double improvement(double baseline, double model) {
  if (!(baseline > 0.0)) throw ParameterError("improvement: baseline must be positive");
  return 100.0 * (baseline - model) / baseline;
}

double improvement_r(double baseline, double model) {
  if (!(baseline > 0.0)) throw ParameterError("improvement: baseline must be positive");
  return 100.0 * (model - baseline) / baseline;
}

const MetricsCell* ResultsTable::find(std::string_view variant, std::size_t lookback,
                                      std::size_t horizon) const {
  for (const auto& c : cells)
    if (c.variant == variant && c.lookback == lookback && c.horizon == horizon) return &c;
  return nullptr;
}

bool ResultsTable::has_failures() const {
  return std::any_of(cells.begin(), cells.end(), [](const MetricsCell& c) { return c.failed; });
}

std::vector<std::string> ResultsTable::variants() const {
  std::vector<std::string> out;
  for (const auto& c : cells)
    if (std::find(out.begin(), out.end(), c.variant) == out.end()) out.push_back(c.variant);
  return out;
}

std::vector<std::size_t> ResultsTable::lookbacks() const {
  std::set<std::size_t> s;
  for (const auto& c : cells) s.insert(c.lookback);
  return {s.begin(), s.end()};
}

std::size_t ResultsTable::horizons() const {
  std::size_t h = 0;
  for (const auto& c : cells) h = std::max(h, c.horizon);
  return h;
}

std::vector<MetricsCell> evaluate_cell(const std::string& variant, std::size_t lookback,
                                       const Matrix& pred, const Matrix& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw ShapeError("metrics: prediction and truth shapes differ for " + variant + " lookback " +
                     std::to_string(lookback));
  std::vector<MetricsCell> out;
  for (std::size_t h = 0; h < pred.cols(); ++h) {
    const auto p = pred.column(h), t = truth.column(h);
    MetricsCell c;
    c.variant = variant;
    c.lookback = lookback;
    c.horizon = h + 1;
    c.mae = mae(p, t);
    c.rmse = rmse(p, t);
    c.r = pearson_r(p, t);
    out.push_back(std::move(c));
  }
  return out;
}

ResultsTable metrics_grid(const std::map<CellKey, CellPredictions>& predictions,
                          const std::vector<std::string>& variants,
                          const std::vector<std::size_t>& lookbacks) {
  ResultsTable table;
  for (const auto& v : variants) {
    for (std::size_t lb : lookbacks) {
      const auto it = predictions.find(CellKey{v, lb});
      if (it == predictions.end())
        throw ParameterError("metrics grid: missing cell " + v + " lookback " +
                             std::to_string(lb));
      auto cells = evaluate_cell(v, lb, it->second.pred, it->second.truth);
      table.cells.insert(table.cells.end(), cells.begin(), cells.end());
    }
  }
  return table;
}

}  // namespace tempocast

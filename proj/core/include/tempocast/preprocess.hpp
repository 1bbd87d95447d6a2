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
#include <vector>

#include "tempocast/ingest.hpp"
#include "tempocast/matrix.hpp"

namespace tempocast {

inline constexpr std::size_t kDefaultHorizons = 6;
inline constexpr std::size_t kDefaultRetro = 24;

enum class NormalizerKind : std::uint8_t { kZScore = 0, kMinMax = 1 };

/// Per-column affine scaling. For kZScore `lo` holds the mean and `hi` the
/// population standard deviation; for kMinMax they hold the column min/max.
/// Degenerate columns (zero spread) are flagged: they map to 0 (z-score) or
/// 0.5 (min-max) and invert to `lo`.
struct Normalizer {
  NormalizerKind kind = NormalizerKind::kMinMax;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::uint8_t> flagged;

  std::size_t columns() const noexcept { return lo.size(); }
  double apply_value(std::size_t col, double x) const;
  double invert_value(std::size_t col, double z) const;

  bool operator==(const Normalizer&) const = default;
};

Normalizer fit_normalizer(const Matrix& rows, NormalizerKind kind);
Matrix apply(const Normalizer& norm, const Matrix& rows);
Matrix invert(const Normalizer& norm, const Matrix& rows);

struct WindowSample {
  /// `retro` rows ending at (and including) the origin row, raw units.
  Matrix retro;
  /// WS10mi in m/s at origin + 1 .. origin + H hours.
  std::vector<double> target;
  HourStamp origin;
  std::size_t origin_row = 0;
};

struct WindowedDataset {
  std::size_t lookback = 0;
  std::size_t retro = kDefaultRetro;
  std::size_t horizons = kDefaultHorizons;
  std::vector<WindowSample> samples;
  /// Frame the windows were cut from; kept for fitting normalizers on the
  /// rows a split is allowed to see.
  std::shared_ptr<const TimeSeriesFrame> source;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  /// Last `lookback` rows of sample i's retrospective window.
  Matrix input_window(std::size_t i) const;
  /// Samples [first, first + count), sharing the same source.
  WindowedDataset subset(std::size_t first, std::size_t count) const;
  /// Source rows [0, last origin + horizons]: everything this dataset's
  /// inputs and targets can touch.
  Matrix visible_rows() const;
};

/// Cuts every complete (retro window, H-step target) pair from an hourly,
/// gap-free frame. Sample count = frame length - retro - horizons + 1.
WindowedDataset make_windows(std::shared_ptr<const TimeSeriesFrame> frame,
                             std::size_t lookback,
                             std::size_t horizons = kDefaultHorizons,
                             std::size_t retro = kDefaultRetro);
WindowedDataset make_windows(const TimeSeriesFrame& frame, std::size_t lookback,
                             std::size_t horizons = kDefaultHorizons,
                             std::size_t retro = kDefaultRetro);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  bool operator==(const SplitFractions&) const = default;
};

struct DatasetSplit {
  WindowedDataset train;
  WindowedDataset val;
  WindowedDataset test;
};

/// Contiguous train -> val -> test blocks. A sample whose targets reach past
/// the first origin of the following block is dropped from the earlier block,
/// so no target row is shared across blocks and no later target sits inside
/// an earlier window.
DatasetSplit split_chronological(const WindowedDataset& ds,
                                 SplitFractions fractions = {});

}  // namespace tempocast

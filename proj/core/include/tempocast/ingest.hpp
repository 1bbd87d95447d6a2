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

// Hourly meteorological records: CSV parsing, validation, gap filling and
// descriptive statistics.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempocast/matrix.hpp"

namespace tempocast {

inline constexpr std::size_t kNumChannels = 8;

/// Column order used everywhere in memory. CSV files may order them freely.
enum class Channel : std::size_t {
  kPrs = 0,     // station pressure, hPa
  kTem = 1,     // air temperature, degC
  kRhu = 2,     // relative humidity, %
  kPre1h = 3,   // 1-hour precipitation, mm
  kWd2mi = 4,   // 2-minute mean wind direction, deg
  kWs2mi = 5,   // 2-minute mean wind speed, m/s
  kWd10mi = 6,  // 10-minute mean wind direction, deg
  kWs10mi = 7,  // 10-minute mean wind speed, m/s (forecast target)
};

inline constexpr std::size_t index_of(Channel c) noexcept {
  return static_cast<std::size_t>(c);
}

inline constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "PRS", "TEM", "RHU", "PRE1h", "WD2mi", "WS2mi", "WD10mi", "WS10mi"};

inline constexpr std::string_view kTimestampColumn = "timestamp";

/// An instant on the hourly grid, counted in hours since 1970-01-01T00:00 UTC.
struct HourStamp {
  std::int64_t hours = 0;

  auto operator<=>(const HourStamp&) const = default;
  HourStamp operator+(std::int64_t h) const noexcept { return {hours + h}; }
  std::int64_t operator-(HourStamp o) const noexcept { return hours - o.hours; }

  /// Parses `YYYY-MM-DDTHH:00` (a trailing `:00` seconds field is accepted).
  static std::optional<HourStamp> parse(std::string_view text);
  std::string to_string() const;
};

/// Hourly 8-channel series. `values` is rows x kNumChannels in Channel order.
/// Missing cells (empty in the CSV) are NaN until impute_gaps fills them.
struct TimeSeriesFrame {
  std::vector<HourStamp> timestamps;
  Matrix values{0, kNumChannels};
  /// Hours inserted by gap filling.
  std::size_t filled_hours = 0;
  /// Individual empty cells carried forward by gap filling.
  std::size_t filled_cells = 0;

  std::size_t size() const noexcept { return timestamps.size(); }
  bool empty() const noexcept { return timestamps.empty(); }
  std::vector<double> column(Channel c) const { return values.column(index_of(c)); }
  bool has_missing() const;

  bool operator==(const TimeSeriesFrame& other) const;
};

/// Parses CSV text with a header naming `timestamp` and the eight channels in
/// any order. Row order is preserved and every value is range-checked.
TimeSeriesFrame parse_records(std::string_view csv_text);

/// Writes the canonical CSV form (timestamp first, Channel order, shortest
/// round-trip number formatting). Missing cells are written empty.
std::string serialize_records(const TimeSeriesFrame& frame);

/// Throws ValidationError if a finite value breaks its physical bound.
void validate_value(Channel c, double value, std::size_t row);

enum class GapPolicy { kForwardFill, kReject };

/// Returns an hourly-regular frame with no missing cells. Forward fill copies
/// the previous row into every missing hour and carries the previous value
/// into every empty cell.
TimeSeriesFrame impute_gaps(const TimeSeriesFrame& frame,
                            GapPolicy policy = GapPolicy::kForwardFill);

struct ColumnStats {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // population convention (divide by N)
  double min = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

struct StatsTable {
  std::array<ColumnStats, kNumChannels> columns{};
};

/// Column statistics of a single series; quartiles interpolate linearly
/// between order statistics at position q * (n - 1).
ColumnStats describe(std::span<const double> values);

StatsTable summarize(const TimeSeriesFrame& frame);

/// Table layout: one row per statistic (COUNT, MEAN, STD, MIN, 25%, 50%, 75%,
/// MAX), one column per channel.
std::string format_stats_csv(const StatsTable& table);

}  // namespace tempocast

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

#include "tempocast/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tempocast/log.hpp"
#include "tempocast/text.hpp"

namespace tempocast {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<int> parse_digits(std::string_view s) {
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<Channel> channel_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumChannels; ++i)
    if (kChannelNames[i] == name) return static_cast<Channel>(i);
  return std::nullopt;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::optional<HourStamp> HourStamp::parse(std::string_view text) {
  text = text::trim(text);
  // YYYY-MM-DDTHH:00 or YYYY-MM-DDTHH:00:00
  if (text.size() != 16 && text.size() != 19) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':')
    return std::nullopt;
  const auto y = parse_digits(text.substr(0, 4));
  const auto mo = parse_digits(text.substr(5, 2));
  const auto d = parse_digits(text.substr(8, 2));
  const auto h = parse_digits(text.substr(11, 2));
  const auto mi = parse_digits(text.substr(14, 2));
  if (!y || !mo || !d || !h || !mi || *h > 23 || *mi != 0) return std::nullopt;
  if (text.size() == 19 && (text[16] != ':' || text.substr(17, 2) != "00"))
    return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                        std::chrono::month{static_cast<unsigned>(*mo)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return HourStamp{static_cast<std::int64_t>(days) * 24 + *h};
}

std::string HourStamp::to_string() const {
  const std::int64_t day = hours >= 0 ? hours / 24 : -((-hours + 23) / 24);
  const std::int64_t hour = hours - day * 24;
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{day}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:00",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hour));
  return buf;
}

bool TimeSeriesFrame::has_missing() const {
  return std::any_of(values.data().begin(), values.data().end(),
                     [](double v) { return std::isnan(v); });
}

bool TimeSeriesFrame::operator==(const TimeSeriesFrame& other) const {
  if (timestamps != other.timestamps || values.rows() != other.values.rows() ||
      values.cols() != other.values.cols())
    return false;
  // NaN marks a missing cell; two missing cells compare equal.
  const auto a = values.data();
  const auto b = other.values.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) && std::isnan(b[i])) continue;
    if (a[i] != b[i]) return false;
  }
  return true;
}

void validate_value(Channel c, double v, std::size_t row) {
  const std::string name(kChannelNames[index_of(c)]);
  switch (c) {
    case Channel::kPrs:
      if (v < 850.0 || v > 1100.0) throw ValidationError(name, row, v, "PRS in [850, 1100] hPa");
      break;
    case Channel::kTem:
      break;
    case Channel::kRhu:
      if (v < 0.0 || v > 100.0) throw ValidationError(name, row, v, "RHU in [0, 100] %");
      break;
    case Channel::kPre1h:
      if (v < 0.0) throw ValidationError(name, row, v, "PRE1h >= 0 mm");
      break;
    case Channel::kWd2mi:
    case Channel::kWd10mi:
      if (v < 0.0 || v > 360.0) throw ValidationError(name, row, v, name + " in [0, 360] deg");
      break;
    case Channel::kWs2mi:
    case Channel::kWs10mi:
      if (v < 0.0) throw ValidationError(name, row, v, name + " >= 0 m/s");
      break;
  }
}

TimeSeriesFrame parse_records(std::string_view csv_text) {
  if (csv_text.starts_with("\xEF\xBB\xBF")) csv_text.remove_prefix(3);
  const auto all_lines = text::lines(csv_text);
  if (all_lines.empty()) throw SchemaError("missing header row");

  const auto header = text::split(all_lines.front(), ',');
  std::optional<std::size_t> ts_col;
  std::array<std::optional<std::size_t>, kNumChannels> ch_col{};
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = text::trim(header[i]);
    if (name == kTimestampColumn) {
      if (ts_col) throw SchemaError("duplicate column 'timestamp'");
      ts_col = i;
    } else if (auto c = channel_from_name(name)) {
      auto& slot = ch_col[index_of(*c)];
      if (slot) throw SchemaError("duplicate column '" + std::string(name) + "'");
      slot = i;
    }
  }
  if (!ts_col) throw SchemaError("missing column 'timestamp'");
  for (std::size_t c = 0; c < kNumChannels; ++c)
    if (!ch_col[c])
      throw SchemaError("missing column '" + std::string(kChannelNames[c]) + "'");

  TimeSeriesFrame frame;
  std::vector<double> data;
  for (std::size_t li = 1; li < all_lines.size(); ++li) {
    const auto line = all_lines[li];
    if (text::trim(line).empty()) continue;
    const std::size_t row = li;
    const auto cells = text::split(line, ',');
    if (cells.size() != header.size())
      throw ParseError(row, "expected " + std::to_string(header.size()) +
                                " fields, found " + std::to_string(cells.size()));
    const auto ts = HourStamp::parse(cells[*ts_col]);
    if (!ts)
      throw ParseError(row, "bad timestamp '" + std::string(text::trim(cells[*ts_col])) +
                                "' (expected YYYY-MM-DDTHH:00)");
    frame.timestamps.push_back(*ts);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      const auto cell = text::trim(cells[*ch_col[c]]);
      if (cell.empty()) {
        data.push_back(kNaN);
        continue;
      }
      const auto v = text::parse_double(cell);
      if (!v || !std::isfinite(*v))
        throw ParseError(row, "non-numeric " + std::string(kChannelNames[c]) +
                                  " value '" + std::string(cell) + "'");
      validate_value(static_cast<Channel>(c), *v, row);
      data.push_back(*v);
    }
  }
  if (frame.timestamps.empty()) throw EmptyDataError("no data rows after header");
  frame.values = Matrix(frame.timestamps.size(), kNumChannels, std::move(data));
  return frame;
}

std::string serialize_records(const TimeSeriesFrame& frame) {
  std::string out(kTimestampColumn);
  for (auto name : kChannelNames) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t r = 0; r < frame.size(); ++r) {
    out += frame.timestamps[r].to_string();
    for (double v : frame.values.row(r)) {
      out += ',';
      if (!std::isnan(v)) out += text::format_double(v);
    }
    out += '\n';
  }
  return out;
}

TimeSeriesFrame impute_gaps(const TimeSeriesFrame& frame, GapPolicy policy) {
  if (frame.empty()) throw EmptyDataError("cannot gap-fill an empty frame");
  for (std::size_t r = 1; r < frame.size(); ++r) {
    if (frame.timestamps[r] <= frame.timestamps[r - 1])
      throw DataError("timestamps not strictly increasing at row " +
                      std::to_string(r + 1) + " (" +
                      frame.timestamps[r].to_string() + ")");
  }

  std::vector<std::int64_t> missing;
  for (std::size_t r = 1; r < frame.size(); ++r)
    for (auto h = frame.timestamps[r - 1].hours + 1; h < frame.timestamps[r].hours; ++h)
      missing.push_back(h);

  for (double v : frame.values.row(0)) {
    if (std::isnan(v))
      throw GapError("gap at series start " + frame.timestamps[0].to_string() +
                         ": first row has empty cells and nothing to fill from",
                     {frame.timestamps[0].hours});
  }

  if (policy == GapPolicy::kReject) {
    std::vector<std::int64_t> bad = missing;
    for (std::size_t r = 0; r < frame.size(); ++r)
      for (double v : frame.values.row(r))
        if (std::isnan(v)) {
          bad.push_back(frame.timestamps[r].hours);
          break;
        }
    std::sort(bad.begin(), bad.end());
    if (!bad.empty()) {
      std::string msg = "gap policy 'reject': " + std::to_string(bad.size()) +
                        " missing hour(s):";
      for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 10); ++i)
        msg += " " + HourStamp{bad[i]}.to_string();
      if (bad.size() > 10) msg += " ...";
      throw GapError(msg, std::move(bad));
    }
    return frame;
  }

  const auto span = static_cast<std::size_t>(frame.timestamps.back() - frame.timestamps.front()) + 1;
  TimeSeriesFrame out;
  out.timestamps.reserve(span);
  out.values = Matrix(span, kNumChannels);
  out.filled_hours = frame.filled_hours + missing.size();
  out.filled_cells = frame.filled_cells;

  std::size_t w = 0;
  for (std::size_t r = 0; r < frame.size(); ++r) {
    if (r > 0) {
      for (auto h = frame.timestamps[r - 1].hours + 1; h < frame.timestamps[r].hours; ++h) {
        out.timestamps.push_back(HourStamp{h});
        std::copy_n(out.values.row(w - 1).begin(), kNumChannels, out.values.row(w).begin());
        ++w;
      }
    }
    out.timestamps.push_back(frame.timestamps[r]);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      const double v = frame.values(r, c);
      if (std::isnan(v)) {
        out.values(w, c) = out.values(w - 1, c);
        ++out.filled_cells;
      } else {
        out.values(w, c) = v;
      }
    }
    ++w;
  }
  if (out.filled_hours + out.filled_cells > 0) {
    log::info("gap fill: " + std::to_string(missing.size()) + " hour(s), " +
              std::to_string(out.filled_cells - frame.filled_cells) + " cell(s) forward-filled");
  }
  return out;
}

ColumnStats describe(std::span<const double> values) {
  if (values.empty()) throw EmptyDataError("cannot describe an empty column");
  ColumnStats s;
  s.count = values.size();
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q50 = quantile_sorted(sorted, 0.50);
  s.q75 = quantile_sorted(sorted, 0.75);
  return s;
}

StatsTable summarize(const TimeSeriesFrame& frame) {
  if (frame.empty()) throw EmptyDataError("cannot summarize an empty frame");
  if (frame.has_missing())
    throw DataError("frame has empty cells; run gap filling before summarizing");
  StatsTable t;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const auto col = frame.values.column(c);
    t.columns[c] = describe(col);
  }
  return t;
}

std::string format_stats_csv(const StatsTable& table) {
  std::ostringstream os;
  os << "stat";
  for (auto name : kChannelNames) os << ',' << name;
  os << '\n';
  const auto emit = [&](const char* label, auto field) {
    os << label;
    for (const auto& c : table.columns) os << ',' << field(c);
    os << '\n';
  };
  emit("COUNT", [](const ColumnStats& c) { return std::to_string(c.count); });
  emit("MEAN", [](const ColumnStats& c) { return text::format_double(c.mean); });
  emit("STD", [](const ColumnStats& c) { return text::format_double(c.std); });
  emit("MIN", [](const ColumnStats& c) { return text::format_double(c.min); });
  emit("25%", [](const ColumnStats& c) { return text::format_double(c.q25); });
  emit("50%", [](const ColumnStats& c) { return text::format_double(c.q50); });
  emit("75%", [](const ColumnStats& c) { return text::format_double(c.q75); });
  emit("MAX", [](const ColumnStats& c) { return text::format_double(c.max); });
  return os.str();
}

}  // namespace tempocast

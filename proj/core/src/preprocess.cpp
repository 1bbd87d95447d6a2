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

#include "tempocast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tempocast/log.hpp"

namespace tempocast {

double Normalizer::apply_value(std::size_t col, double x) const {
  if (flagged[col]) return kind == NormalizerKind::kZScore ? 0.0 : 0.5;
  if (kind == NormalizerKind::kZScore) return (x - lo[col]) / hi[col];
  return (x - lo[col]) / (hi[col] - lo[col]);
}

double Normalizer::invert_value(std::size_t col, double z) const {
  if (flagged[col]) return lo[col];
  if (kind == NormalizerKind::kZScore) return z * hi[col] + lo[col];
  return z * (hi[col] - lo[col]) + lo[col];
}

Normalizer fit_normalizer(const Matrix& rows, NormalizerKind kind) {
  if (rows.rows() < 2)
    throw ParameterError("normalizer needs at least 2 rows, got " +
                         std::to_string(rows.rows()));
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      if (!std::isfinite(rows(r, c)))
        throw NumericError("non-finite value in normalizer column " + std::to_string(c));
  Normalizer n;
  n.kind = kind;
  n.lo.resize(rows.cols());
  n.hi.resize(rows.cols());
  n.flagged.assign(rows.cols(), 0);
  const double count = static_cast<double>(rows.rows());
  for (std::size_t c = 0; c < rows.cols(); ++c) {
    if (kind == NormalizerKind::kZScore) {
      double sum = 0.0;
      for (std::size_t r = 0; r < rows.rows(); ++r) sum += rows(r, c);
      const double mean = sum / count;
      double ss = 0.0;
      for (std::size_t r = 0; r < rows.rows(); ++r)
        ss += (rows(r, c) - mean) * (rows(r, c) - mean);
      n.lo[c] = mean;
      n.hi[c] = std::sqrt(ss / count);
      n.flagged[c] = n.hi[c] > 0.0 ? 0 : 1;
    } else {
      double lo = rows(0, c);
      double hi = rows(0, c);
      for (std::size_t r = 1; r < rows.rows(); ++r) {
        lo = std::min(lo, rows(r, c));
        hi = std::max(hi, rows(r, c));
      }
      n.lo[c] = lo;
      n.hi[c] = hi;
      n.flagged[c] = hi > lo ? 0 : 1;
    }
    if (n.flagged[c]) {
      log::warning("normalizer: column " + std::to_string(c) +
                   " is constant; it will map to " +
                   (kind == NormalizerKind::kZScore ? "0" : "0.5"));
    }
  }
  return n;
}

namespace {

void check_columns(const Normalizer& norm, const Matrix& rows) {
  if (rows.cols() != norm.columns())
    throw ShapeError("normalizer fitted on " + std::to_string(norm.columns()) +
                     " columns, got " + std::to_string(rows.cols()));
}

}  // namespace

Matrix apply(const Normalizer& norm, const Matrix& rows) {
  check_columns(norm, rows);
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      out(r, c) = norm.apply_value(c, rows(r, c));
  return out;
}

Matrix invert(const Normalizer& norm, const Matrix& rows) {
  check_columns(norm, rows);
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      out(r, c) = norm.invert_value(c, rows(r, c));
  return out;
}

Matrix WindowedDataset::input_window(std::size_t i) const {
  const Matrix& r = samples.at(i).retro;
  return r.slice_rows(r.rows() - lookback, lookback);
}

WindowedDataset WindowedDataset::subset(std::size_t first, std::size_t count) const {
  if (first + count > samples.size()) throw ShapeError("dataset subset out of range");
  WindowedDataset out;
  out.lookback = lookback;
  out.retro = retro;
  out.horizons = horizons;
  out.source = source;
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(first),
                     samples.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

Matrix WindowedDataset::visible_rows() const {
  if (empty() || !source) throw EmptyDataError("dataset has no samples");
  const std::size_t last = samples.back().origin_row + horizons;
  return source->values.slice_rows(0, last + 1);
}

WindowedDataset make_windows(std::shared_ptr<const TimeSeriesFrame> frame,
                             std::size_t lookback, std::size_t horizons,
                             std::size_t retro) {
  if (!frame) throw ParameterError("null frame");
  if (lookback == 0 || lookback > retro)
    throw ParameterError("lookback " + std::to_string(lookback) +
                         " must be in [1, retro=" + std::to_string(retro) + "]");
  if (horizons == 0) throw ParameterError("horizons must be positive");
  const std::size_t n = frame->size();
  if (n < retro + horizons)
    throw EmptyDataError("frame has " + std::to_string(n) +
                         " rows; windowing needs at least " +
                         std::to_string(retro + horizons));
  if (frame->has_missing()) throw DataError("frame has empty cells; gap-fill first");
  for (std::size_t r = 1; r < n; ++r)
    if (frame->timestamps[r] - frame->timestamps[r - 1] != 1)
      throw DataError("frame is not hourly-regular at row " + std::to_string(r + 1) +
                      "; gap-fill first");

  WindowedDataset ds;
  ds.lookback = lookback;
  ds.retro = retro;
  ds.horizons = horizons;
  ds.source = frame;
  const std::size_t ws = index_of(Channel::kWs10mi);
  ds.samples.reserve(n - retro - horizons + 1);
  for (std::size_t origin = retro - 1; origin + horizons < n; ++origin) {
    WindowSample s;
    s.retro = frame->values.slice_rows(origin + 1 - retro, retro);
    s.target.resize(horizons);
    for (std::size_t h = 1; h <= horizons; ++h) s.target[h - 1] = frame->values(origin + h, ws);
    s.origin = frame->timestamps[origin];
    s.origin_row = origin;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

WindowedDataset make_windows(const TimeSeriesFrame& frame, std::size_t lookback,
                             std::size_t horizons, std::size_t retro) {
  return make_windows(std::make_shared<const TimeSeriesFrame>(frame), lookback,
                      horizons, retro);
}

DatasetSplit split_chronological(const WindowedDataset& ds, SplitFractions f) {
  if (!(f.train > 0.0) || !(f.val > 0.0) || !(f.test > 0.0))
    throw ParameterError("split fractions must all be positive");
  if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9)
    throw ParameterError("split fractions must sum to 1");
  const std::size_t n = ds.size();
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * f.train));
  const auto n_train_val =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * (f.train + f.val)));
  if (n_train == 0 || n_train_val <= n_train || n_train_val >= n)
    throw EmptyDataError("split of " + std::to_string(n) + " samples leaves an empty block");

  // Keep samples in [first, end) whose targets stay at or before `boundary`.
  const auto keep = [&](std::size_t first, std::size_t end, std::size_t boundary_row) {
    std::size_t last = first;
    for (std::size_t i = first; i < end; ++i)
      if (ds.samples[i].origin_row + ds.horizons <= boundary_row) last = i + 1;
    return ds.subset(first, last - first);
  };

  DatasetSplit out;
  out.train = keep(0, n_train, ds.samples[n_train].origin_row);
  out.val = keep(n_train, n_train_val, ds.samples[n_train_val].origin_row);
  out.test = ds.subset(n_train_val, n - n_train_val);
  if (out.train.empty() || out.val.empty() || out.test.empty())
    throw EmptyDataError("split of " + std::to_string(n) + " samples: train=" +
                         std::to_string(out.train.size()) + " val=" +
                         std::to_string(out.val.size()) + " test=" +
                         std::to_string(out.test.size()) +
                         " after dropping boundary samples");
  return out;
}

}  // namespace tempocast

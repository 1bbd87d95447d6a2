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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "tempocast/error.hpp"
#include "tempocast/preprocess.hpp"
#include "test_support.hpp"

namespace tempocast {
namespace {

TEST(Normalizer, ZScoreHandOracle) {
  const Matrix rows{{1.0}, {2.0}, {3.0}};
  const auto n = fit_normalizer(rows, NormalizerKind::kZScore);
  EXPECT_DOUBLE_EQ(n.lo[0], 2.0);
  EXPECT_NEAR(n.hi[0], std::sqrt(2.0 / 3.0), 1e-15);
  const auto z = apply(n, rows);
  EXPECT_NEAR(z(0, 0), -1.224744871391589, 1e-12);
  EXPECT_EQ(z(1, 0), 0.0);
  EXPECT_NEAR(z(2, 0), 1.224744871391589, 1e-12);
}

TEST(Normalizer, MinMaxEndpoints) {
  const Matrix rows{{0.0}, {10.0}};
  const auto n = fit_normalizer(rows, NormalizerKind::kMinMax);
  const auto z = apply(n, rows);
  EXPECT_EQ(z(0, 0), 0.0);
  EXPECT_EQ(z(1, 0), 1.0);
}

TEST(Normalizer, ConstantColumnsFlagged) {
  const Matrix rows{{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}};
  const auto zs = fit_normalizer(rows, NormalizerKind::kZScore);
  EXPECT_EQ(zs.flagged[0], 1);
  EXPECT_EQ(zs.flagged[1], 0);
  const auto a = apply(zs, rows);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(a(r, 0), 0.0);
  const auto mm = fit_normalizer(rows, NormalizerKind::kMinMax);
  const auto b = apply(mm, rows);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(b(r, 0), 0.5);
  EXPECT_EQ(invert(mm, b)(1, 0), 5.0);
}

TEST(Normalizer, Errors) {
  EXPECT_THROW(fit_normalizer(Matrix{{1.0, 2.0}}, NormalizerKind::kZScore), ParameterError);
  const auto n = fit_normalizer(Matrix{{1.0}, {2.0}}, NormalizerKind::kMinMax);
  EXPECT_THROW(apply(n, Matrix(2, 2)), ShapeError);
  EXPECT_THROW(invert(n, Matrix(2, 3)), ShapeError);
  EXPECT_THROW(fit_normalizer(Matrix{{1.0}, {std::nan("")}}, NormalizerKind::kMinMax),
               NumericError);
}

TEST(Normalizer, RoundTripAndFixedPoints) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = testing::random_matrix(rng, 2 + rng() % 20, 1 + rng() % 8, -50.0, 50.0);
    for (auto kind : {NormalizerKind::kZScore, NormalizerKind::kMinMax}) {
      const auto n = fit_normalizer(rows, kind);
      const auto back = invert(n, apply(n, rows));
      for (std::size_t i = 0; i < rows.size(); ++i)
        EXPECT_NEAR(back.data()[i], rows.data()[i], 1e-12);
      // lo is the minimum (min-max) or the mean (z-score); both map to 0.
      for (std::size_t c = 0; c < rows.cols(); ++c) EXPECT_EQ(n.apply_value(c, n.lo[c]), 0.0);
    }
  }
}

TEST(MakeWindows, ShortestFrameHasOneSample) {
  const auto f = testing::make_frame(30, [](std::size_t t) { return double(t); });
  const auto ds = make_windows(f, 4);
  ASSERT_EQ(ds.size(), 1u);
  const auto& s = ds.samples[0];
  // Rows 25..30 (1-based) are 0-based 24..29.
  for (std::size_t h = 0; h < 6; ++h) EXPECT_EQ(s.target[h], double(24 + h));
  EXPECT_EQ(s.origin_row, 23u);
  EXPECT_EQ(s.retro.rows(), 24u);
  EXPECT_EQ(s.retro(23, 7), 23.0);
  EXPECT_EQ(ds.input_window(0).rows(), 4u);
  EXPECT_EQ(ds.input_window(0)(0, 7), 20.0);
}

TEST(MakeWindows, BoundaryAndErrors) {
  const auto f29 = testing::make_frame(29, [](std::size_t t) { return double(t); });
  EXPECT_THROW(make_windows(f29, 4), EmptyDataError);
  const auto f31 = testing::make_frame(31, [](std::size_t t) { return double(t); });
  const auto ds = make_windows(f31, 16);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.samples[1].origin - ds.samples[0].origin, 1);
  EXPECT_THROW(make_windows(f31, 25), ParameterError);
  EXPECT_THROW(make_windows(f31, 0), ParameterError);

  auto gappy = f31;
  gappy.timestamps[10] = gappy.timestamps[10] + 100;
  for (std::size_t r = 11; r < gappy.size(); ++r) gappy.timestamps[r] = gappy.timestamps[r] + 100;
  EXPECT_THROW(make_windows(gappy, 4), DataError);
}

// Enumerates valid origins directly and compares.
TEST(MakeWindows, CountAndContentProperty) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 30 + rng() % 70;
    const std::size_t lookbacks[] = {4, 8, 12, 16};
    const std::size_t lookback = lookbacks[rng() % 4];
    const auto f = testing::make_frame(n, [](std::size_t t) { return 0.25 * double(t); });
    const auto ds = make_windows(f, lookback);
    std::size_t expected = 0;
    for (std::size_t origin = 0; origin < n; ++origin)
      if (origin + 1 >= 24 && origin + 6 <= n - 1) ++expected;
    ASSERT_EQ(ds.size(), expected);
    EXPECT_EQ(ds.size(), n - 24 - 6 + 1);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto& s = ds.samples[i];
      EXPECT_EQ(s.origin_row, 23 + i);
      EXPECT_EQ(s.origin, f.timestamps[s.origin_row]);
      for (std::size_t h = 1; h <= 6; ++h)
        EXPECT_EQ(s.target[h - 1], f.values(s.origin_row + h, 7));
      for (std::size_t r = 0; r < 24; ++r)
        EXPECT_EQ(s.retro(r, 0), f.values(s.origin_row + 1 - 24 + r, 0));
    }
  }
}

TEST(Split, DefaultFractionsOrdering) {
  const auto f = testing::make_frame(129, [](std::size_t t) { return double(t % 9); });
  const auto ds = make_windows(f, 4);
  ASSERT_EQ(ds.size(), 100u);
  const auto s = split_chronological(ds);
  EXPECT_LE(s.train.size(), 80u);
  EXPECT_GE(s.train.size(), 74u);
  EXPECT_GE(s.val.size(), 4u);
  EXPECT_LE(s.val.size(), 10u);
  EXPECT_EQ(s.test.size(), 10u);
  EXPECT_LT(s.train.samples.back().origin, s.val.samples.front().origin);
  EXPECT_LT(s.val.samples.back().origin, s.test.samples.front().origin);
}

TEST(Split, Errors) {
  const auto f = testing::make_frame(129, [](std::size_t t) { return double(t % 9); });
  const auto ds = make_windows(f, 4);
  EXPECT_THROW(split_chronological(ds, {0.5, 0.5, 0.0}), ParameterError);
  EXPECT_THROW(split_chronological(ds, {0.5, 0.2, 0.2}), ParameterError);
  EXPECT_THROW(split_chronological(ds, {-0.2, 0.6, 0.6}), ParameterError);
}

TEST(Split, TwentySamplesBoundaryOracle) {
  const auto f = testing::make_frame(49, [](std::size_t t) { return double(t % 5); });
  const auto ds = make_windows(f, 4);
  ASSERT_EQ(ds.size(), 20u);
  // Train takes 16 samples and val 2; after dropping samples whose targets
  // reach the next block, val keeps none, so the split is an explicit error.
  std::size_t val_kept = 0;
  for (std::size_t i = 16; i < 18; ++i)
    if (ds.samples[i].origin_row + 6 <= ds.samples[18].origin_row) ++val_kept;
  EXPECT_EQ(val_kept, 0u);
  EXPECT_THROW(split_chronological(ds), EmptyDataError);
}

// No target row of an earlier block reaches the first origin of a later block.
TEST(Split, NoLeakageProperty) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 150 + rng() % 400;
    const auto f = testing::make_frame(n, [](std::size_t t) { return double(t % 11); });
    const auto ds = make_windows(f, 4 + 4 * (rng() % 4));
    const auto s = split_chronological(ds);
    const auto last_target = [](const WindowedDataset& d) {
      return d.samples.back().origin + static_cast<std::int64_t>(d.horizons);
    };
    EXPECT_LE(last_target(s.train), s.val.samples.front().origin);
    EXPECT_LE(last_target(s.val), s.test.samples.front().origin);
    // Blocks are contiguous chronological slices of the source dataset.
    for (const auto* block : {&s.train, &s.val, &s.test})
      for (std::size_t i = 1; i < block->size(); ++i)
        EXPECT_EQ(block->samples[i].origin - block->samples[i - 1].origin, 1);
    // visible_rows of train stops at its last target.
    EXPECT_EQ(s.train.visible_rows().rows(), s.train.samples.back().origin_row + 6 + 1);
  }
}

}  // namespace
}  // namespace tempocast

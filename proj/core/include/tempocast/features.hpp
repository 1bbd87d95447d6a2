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

// Temporal descriptors of the 24-hour retrospective window.
//
// Local dynamics: rank pooling. Each channel's (optionally cumulative-mean
// smoothed) trajectory is summarized by the least-squares slope of value
// against time index, i.e. the direction of the line that orders the window
// in time. Five nested sub-windows ending at the origin give 8 x 5 values.
//
// Global dynamics: the dominant non-DC bin of each channel's 24-point DFT,
// reported as (magnitude, phase), giving 8 x 2 values.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tempocast/fft.hpp"
#include "tempocast/ingest.hpp"
#include "tempocast/matrix.hpp"
#include "tempocast/preprocess.hpp"

namespace tempocast {

inline constexpr std::array<std::size_t, 5> kRankPoolScales = {4, 8, 12, 16, 24};
inline constexpr std::size_t kRankPoolDim = kNumChannels * kRankPoolScales.size();  // 40
inline constexpr std::size_t kSpectralDim = kNumChannels * 2;                      // 16

/// values[scale_index * 8 + channel], z-score units per hour.
struct RankPoolDescriptor {
  std::array<double, kRankPoolDim> values{};
};

/// values[2 * channel] = magnitude, values[2 * channel + 1] = phase in (-pi, pi].
struct SpectralDescriptor {
  std::array<double, kSpectralDim> values{};
};

/// Per-column OLS slope of the window against t = 1..T. With smoothing, row t
/// is first replaced by the mean of rows 1..t.
std::vector<double> rank_pool(const Matrix& window, bool smoothing = true);

/// rank_pool over the last s rows for each s in kRankPoolScales. Expects a
/// z-scored 24 x 8 window.
RankPoolDescriptor multi_scale_rank_pool(const Matrix& retro, bool smoothing = true);

struct DominantBin {
  std::size_t bin = 1;
  double magnitude = 0.0;
  double phase = 0.0;
};

/// Largest-magnitude bin among 1..N/2 (DC excluded, ties to the lowest bin).
/// Magnitudes below rounding level relative to `signal_scale` count as zero,
/// and a zero-magnitude bin has phase 0.
DominantBin dominant_bin(std::span<const Complex> spectrum, double signal_scale);

/// Expects a min-max scaled 24 x 8 window.
SpectralDescriptor spectral_features(const Matrix& retro);

/// Which descriptors follow the raw input window in a model input vector.
struct FeatureSet {
  bool spectral = false;
  bool rank_pool = false;

  std::size_t extra_dim() const noexcept {
    return (spectral ? kSpectralDim : 0) + (rank_pool ? kRankPoolDim : 0);
  }
  std::size_t dimension(std::size_t lookback) const noexcept {
    return kNumChannels * lookback + extra_dim();
  }
  /// RAW, FFT, RP or FFT+RP.
  std::string name() const;
  static FeatureSet parse(std::string_view name);

  bool operator==(const FeatureSet&) const = default;
};

/// Scalers fitted on training rows: min-max feeds the raw window and the
/// spectral branch, z-score feeds rank pooling.
struct FeatureScalers {
  Normalizer minmax;
  Normalizer zscore;

  bool operator==(const FeatureScalers&) const = default;
};

FeatureScalers fit_feature_scalers(const WindowedDataset& train);

/// [min-max input window, row-major L x 8] ++ [spectral 16]? ++ [rank pool 40]?
std::vector<double> assemble_inputs(const WindowSample& sample, std::size_t lookback,
                                    FeatureSet features, const FeatureScalers& scalers);

/// assemble_inputs for every sample, one row each.
Matrix assemble_matrix(const WindowedDataset& ds, FeatureSet features,
                       const FeatureScalers& scalers);

}  // namespace tempocast

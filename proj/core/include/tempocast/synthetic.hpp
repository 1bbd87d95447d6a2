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

#include "tempocast/ingest.hpp"

namespace tempocast {

/// Seeded stand-in for an hourly station record. WS10mi is
///   max(0, base + amplitude * sin(2 pi t / period) + slope * t + e_t),
///   e_t = phi * e_{t-1} + N(0, noise_std^2),
/// and the other channels are smooth correlated processes in physical range.
struct SyntheticSpec {
  std::size_t length = 4000;
  double base = 3.0;
  double amplitude = 1.5;
  double period = 24.0;
  double slope = 0.0;
  double phi = 0.8;
  double noise_std = 0.6;
  std::uint64_t mixing_seed = 7;
  HourStamp start{0};

  bool operator==(const SyntheticSpec&) const = default;
};

void validate(const SyntheticSpec& spec);

/// Deterministic for a given (spec, seed).
TimeSeriesFrame gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace tempocast

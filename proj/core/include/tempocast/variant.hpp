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

#include <string>
#include <string_view>
#include <vector>

#include "tempocast/features.hpp"
#include "tempocast/nn/network.hpp"

namespace tempocast {

/// A named grid row: feature pipeline, regressor, and whether the forecast
/// is the linear fusion of the FFT and RP branches.
struct Variant {
  FeatureSet features;
  nn::Architecture architecture = nn::Architecture::kMlp;
  bool fused = false;

  /// e.g. "FFT-RP-LSTM", "LR-FFT-RP-MLP".
  std::string name() const;
  /// Throws ParameterError for unknown names.
  static Variant parse(std::string_view name);

  /// Branch variants a fused variant is built from (FFT-X, RP-X).
  Variant fft_branch() const;
  Variant rp_branch() const;

  bool operator==(const Variant&) const = default;
};

/// All fifteen variants, grouped by feature family.
std::vector<Variant> all_variants();
/// The ten variants without the mixer regressor.
std::vector<Variant> default_variants();

}  // namespace tempocast

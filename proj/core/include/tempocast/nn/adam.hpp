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

#include <cstdint>
#include <span>
#include <vector>

namespace tempocast::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

/// First and second moment estimates plus the number of steps taken.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place. Throws NumericError
/// on a non-finite gradient, leaving params and state untouched.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const AdamConfig& config);

void validate(const AdamConfig& config);

}  // namespace tempocast::nn

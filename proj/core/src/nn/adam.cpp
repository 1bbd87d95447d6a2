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

#include "tempocast/nn/adam.hpp"

#include <cmath>
#include <string>

#include "tempocast/error.hpp"

namespace tempocast::nn {

void validate(const AdamConfig& c) {
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate))
    throw ParameterError("adam: learning rate must be positive");
  if (!(c.beta1 > 0.0 && c.beta1 < 1.0) || !(c.beta2 > 0.0 && c.beta2 < 1.0))
    throw ParameterError("adam: betas must lie in (0, 1)");
  if (!(c.epsilon > 0.0)) throw ParameterError("adam: epsilon must be positive");
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const AdamConfig& config) {
  const std::size_t n = params.size();
  if (grads.size() != n) throw ShapeError("adam: gradient length differs from parameters");
  if (state.m.size() != n || state.v.size() != n)
    throw ShapeError("adam: optimizer state has " + std::to_string(state.m.size()) +
                     " entries for " + std::to_string(n) + " parameters");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(grads[i]))
      throw NumericError("adam: non-finite gradient at index " + std::to_string(i));

  ++state.step;
  const double b1 = config.beta1, b2 = config.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

}  // namespace tempocast::nn

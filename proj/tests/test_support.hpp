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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tempocast/ingest.hpp"
#include "tempocast/matrix.hpp"
#include "tempocast/nn/network.hpp"

namespace tempocast::testing {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = u(rng);
  return m;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

/// Hourly frame starting at hour 0. `ws(t)` gives WS10mi; other channels get
/// in-range values that vary smoothly with t.
inline TimeSeriesFrame make_frame(std::size_t n, const std::function<double(std::size_t)>& ws) {
  TimeSeriesFrame f;
  f.timestamps.resize(n);
  f.values = Matrix(n, kNumChannels);
  for (std::size_t t = 0; t < n; ++t) {
    const double x = static_cast<double>(t);
    f.timestamps[t] = HourStamp{static_cast<std::int64_t>(t)};
    auto row = f.values.row(t);
    row[0] = 1000.0 + 3.0 * std::sin(x / 50.0);
    row[1] = 10.0 + 5.0 * std::sin(x / 4.0);
    row[2] = 50.0 + 20.0 * std::cos(x / 7.0);
    row[3] = (t % 17 == 0) ? 0.4 : 0.0;
    row[4] = std::fmod(37.0 * x, 360.0);
    row[5] = 0.8 * ws(t);
    row[6] = std::fmod(41.0 * x, 360.0);
    row[7] = ws(t);
  }
  return f;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

struct GradientCheck {
  double worst_relative = 0.0;
  double worst_absolute_tiny = 0.0;  // |a - n| where both are below 1e-8
  std::size_t parameters = 0;
};

/// Central differences of the mean MSE against the analytic gradient.
inline GradientCheck check_gradient(nn::Network& net, const Matrix& x, const Matrix& y,
                                    double step = 1e-5) {
  std::vector<double> grad(net.parameter_count());
  net.loss_gradient(x, y, grad);
  std::vector<double> scratch(net.parameter_count());
  GradientCheck out;
  out.parameters = grad.size();
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + step;
    const double up = net.loss_gradient(x, y, scratch);
    params[i] = saved - step;
    const double down = net.loss_gradient(x, y, scratch);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double scale = std::max(std::abs(numeric), std::abs(grad[i]));
    if (scale >= 1e-8)
      out.worst_relative = std::max(out.worst_relative, std::abs(numeric - grad[i]) / scale);
    else
      out.worst_absolute_tiny = std::max(out.worst_absolute_tiny, std::abs(numeric - grad[i]));
  }
  return out;
}

}  // namespace tempocast::testing

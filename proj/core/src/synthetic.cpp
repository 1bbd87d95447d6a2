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

#include "tempocast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tempocast/error.hpp"

namespace tempocast {
namespace {

double wrap_degrees(double d) {
  d = std::fmod(d, 360.0);
  return d < 0.0 ? d + 360.0 : d;
}

// AR(1) process with its own innovation scale.
struct Ar1 {
  double phi;
  double std;
  double state = 0.0;

  double next(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    state = phi * state + std * n(rng);
    return state;
  }
};

}  // namespace

void validate(const SyntheticSpec& s) {
  if (s.length < 200) throw ParameterError("synthetic length must be at least 200 hours");
  if (!(s.phi > -1.0 && s.phi < 1.0)) throw ParameterError("synthetic phi must lie in (-1, 1)");
  if (!(s.noise_std >= 0.0)) throw ParameterError("synthetic noise_std must be non-negative");
  if (!(s.period > 0.0)) throw ParameterError("synthetic period must be positive");
  for (double v : {s.base, s.amplitude, s.slope, s.phi, s.noise_std, s.period})
    if (!std::isfinite(v)) throw ParameterError("synthetic spec has a non-finite value");
}

TimeSeriesFrame gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  std::mt19937_64 mix(spec.mixing_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ws2_ratio = 0.75 + 0.15 * u(mix);
  const double prs_coupling = 0.5 + 1.0 * u(mix);
  const double rhu_coupling = 2.0 + 1.5 * u(mix);
  const double tem_phase = 4.0 + 4.0 * u(mix);
  const double wd_drift = 5.0 + 10.0 * u(mix);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  Ar1 wind{spec.phi, spec.noise_std};
  Ar1 tem{0.95, 0.3};
  Ar1 prs{0.99, 0.25};
  Ar1 rhu{0.9, 2.0};
  Ar1 rain{0.9, 0.6};

  TimeSeriesFrame f;
  f.timestamps.resize(spec.length);
  f.values = Matrix(spec.length, kNumChannels);
  double wd = 360.0 * u(mix);
  const double w = 2.0 * std::numbers::pi / spec.period;
  for (std::size_t i = 0; i < spec.length; ++i) {
    const double t = static_cast<double>(i);
    f.timestamps[i] = spec.start + static_cast<std::int64_t>(i);
    const double ws10 =
        std::max(0.0, spec.base + spec.amplitude * std::sin(w * t) + spec.slope * t + wind.next(rng));
    const double ws2 = std::max(0.0, ws2_ratio * ws10 + 0.15 * n01(rng));
    const double temp = 15.0 + 6.0 * std::sin(w * (t - tem_phase)) + tem.next(rng);
    const double pres = std::clamp(1010.0 + prs.next(rng) - prs_coupling * (ws10 - spec.base),
                                   850.0, 1100.0);
    const double hum = std::clamp(70.0 - rhu_coupling * (temp - 15.0) + rhu.next(rng), 0.0, 100.0);
    const double pre = std::max(0.0, rain.next(rng) - 1.0);
    wd = wrap_degrees(wd + wd_drift * n01(rng) / 3.0);
    const double wd2 = wrap_degrees(wd + 5.0 * n01(rng));

    auto row = f.values.row(i);
    row[index_of(Channel::kPrs)] = pres;
    row[index_of(Channel::kTem)] = temp;
    row[index_of(Channel::kRhu)] = hum;
    row[index_of(Channel::kPre1h)] = pre;
    row[index_of(Channel::kWd2mi)] = wd2;
    row[index_of(Channel::kWs2mi)] = ws2;
    row[index_of(Channel::kWd10mi)] = wd;
    row[index_of(Channel::kWs10mi)] = ws10;
  }
  return f;
}

}  // namespace tempocast

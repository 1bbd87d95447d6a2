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

#include "tempocast/features.hpp"

#include <cmath>
#include <numbers>

namespace tempocast {
namespace {

void require_retro_shape(const Matrix& retro, const char* what) {
  if (retro.rows() != kDefaultRetro || retro.cols() != kNumChannels)
    throw ShapeError(std::string(what) + " expects a 24 x 8 window, got " +
                     std::to_string(retro.rows()) + " x " + std::to_string(retro.cols()));
}

}  // namespace

std::vector<double> rank_pool(const Matrix& window, bool smoothing) {
  const std::size_t t_len = window.rows();
  if (t_len < 2)
    throw ShapeError("rank pooling needs at least 2 time steps, got " + std::to_string(t_len));
  for (double v : window.data())
    if (!std::isfinite(v)) throw NumericError("rank pooling: non-finite input");

  // Centered time index t - (T+1)/2 is exact in binary, and pairs t with
  // T+1-t at equal magnitude and opposite sign. Summing over pairs makes
  // time reversal negate the result bit for bit.
  const double t_mean = 0.5 * static_cast<double>(t_len + 1);
  double s_tt = 0.0;
  for (std::size_t t = 1; t <= t_len; ++t) {
    const double d = static_cast<double>(t) - t_mean;
    s_tt += d * d;
  }

  std::vector<double> out(window.cols());
  std::vector<double> series(t_len);
  for (std::size_t c = 0; c < window.cols(); ++c) {
    if (smoothing) {
      // Incremental mean keeps a constant column exactly constant.
      double mean = 0.0;
      for (std::size_t t = 0; t < t_len; ++t) {
        mean += (window(t, c) - mean) / static_cast<double>(t + 1);
        series[t] = mean;
      }
    } else {
      for (std::size_t t = 0; t < t_len; ++t) series[t] = window(t, c);
    }
    double s_tv = 0.0;
    for (std::size_t t = 1; t <= t_len / 2; ++t) {
      const double d = static_cast<double>(t) - t_mean;
      s_tv += d * (series[t - 1] - series[t_len - t]);
    }
    out[c] = s_tv / s_tt;
  }
  return out;
}

RankPoolDescriptor multi_scale_rank_pool(const Matrix& retro, bool smoothing) {
  require_retro_shape(retro, "multi-scale rank pooling");
  RankPoolDescriptor d;
  for (std::size_t si = 0; si < kRankPoolScales.size(); ++si) {
    const std::size_t s = kRankPoolScales[si];
    const auto slopes = rank_pool(retro.slice_rows(retro.rows() - s, s), smoothing);
    for (std::size_t c = 0; c < kNumChannels; ++c) d.values[si * kNumChannels + c] = slopes[c];
  }
  return d;
}

DominantBin dominant_bin(std::span<const Complex> spectrum, double signal_scale) {
  const std::size_t n = spectrum.size();
  if (n < 2) throw ShapeError("dominant bin needs at least 2 spectral bins");
  const double zero_tol = 1e-12 * std::max(1.0, signal_scale);
  const std::size_t last = n / 2;
  double best = 0.0;
  for (std::size_t k = 1; k <= last; ++k) best = std::max(best, std::abs(spectrum[k]));
  DominantBin out;
  if (best <= zero_tol) return out;  // bin 1, magnitude 0, phase 0
  for (std::size_t k = 1; k <= last; ++k) {
    const double mag = std::abs(spectrum[k]);
    if (mag >= best * (1.0 - 1e-12)) {
      out.bin = k;
      out.magnitude = mag;
      out.phase = std::arg(spectrum[k]);
      if (out.phase <= -std::numbers::pi) out.phase = std::numbers::pi;
      break;
    }
  }
  return out;
}

SpectralDescriptor spectral_features(const Matrix& retro) {
  require_retro_shape(retro, "spectral features");
  const FftPlan plan(retro.rows());
  SpectralDescriptor d;
  std::vector<Complex> x(retro.rows());
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    double scale = 0.0;
    for (std::size_t t = 0; t < retro.rows(); ++t) {
      x[t] = {retro(t, c), 0.0};
      scale += std::abs(retro(t, c));
    }
    const auto spectrum = plan.forward(x);
    const auto dom = dominant_bin(spectrum, scale);
    d.values[2 * c] = dom.magnitude;
    d.values[2 * c + 1] = dom.phase;
  }
  return d;
}

std::string FeatureSet::name() const {
  if (spectral && rank_pool) return "FFT+RP";
  if (spectral) return "FFT";
  if (rank_pool) return "RP";
  return "RAW";
}

FeatureSet FeatureSet::parse(std::string_view name) {
  if (name == "RAW") return {false, false};
  if (name == "FFT") return {true, false};
  if (name == "RP") return {false, true};
  if (name == "FFT+RP") return {true, true};
  throw ParameterError("unknown feature set '" + std::string(name) + "'");
}

FeatureScalers fit_feature_scalers(const WindowedDataset& train) {
  const Matrix rows = train.visible_rows();
  return {fit_normalizer(rows, NormalizerKind::kMinMax),
          fit_normalizer(rows, NormalizerKind::kZScore)};
}

std::vector<double> assemble_inputs(const WindowSample& sample, std::size_t lookback,
                                    FeatureSet features, const FeatureScalers& scalers) {
  const Matrix& retro = sample.retro;
  require_retro_shape(retro, "assemble_inputs");
  if (lookback == 0 || lookback > retro.rows())
    throw ShapeError("lookback " + std::to_string(lookback) + " does not fit the window");
  if (scalers.minmax.columns() != kNumChannels || scalers.zscore.columns() != kNumChannels)
    throw ShapeError("feature scalers must cover 8 channels");

  std::vector<double> out;
  out.reserve(features.dimension(lookback));
  const std::size_t first = retro.rows() - lookback;
  for (std::size_t t = first; t < retro.rows(); ++t)
    for (std::size_t c = 0; c < kNumChannels; ++c)
      out.push_back(scalers.minmax.apply_value(c, retro(t, c)));
  if (features.spectral) {
    const auto spec = spectral_features(apply(scalers.minmax, retro));
    out.insert(out.end(), spec.values.begin(), spec.values.end());
  }
  if (features.rank_pool) {
    const auto rp = multi_scale_rank_pool(apply(scalers.zscore, retro));
    out.insert(out.end(), rp.values.begin(), rp.values.end());
  }
  return out;
}

Matrix assemble_matrix(const WindowedDataset& ds, FeatureSet features,
                       const FeatureScalers& scalers) {
  const std::size_t dim = features.dimension(ds.lookback);
  Matrix out(ds.size(), dim);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto v = assemble_inputs(ds.samples[i], ds.lookback, features, scalers);
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace tempocast

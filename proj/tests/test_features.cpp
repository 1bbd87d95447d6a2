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
#include <numbers>
#include <random>

#include "tempocast/error.hpp"
#include "tempocast/features.hpp"
#include "tempocast/fft.hpp"
#include "test_support.hpp"

namespace tempocast {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> direct_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

TEST(Fft, MatchesDirectDft) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n : {1u, 2u, 3u, 5u, 7u, 8u, 12u, 16u, 24u, 30u, 32u, 49u, 64u}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Complex> x(n);
      for (auto& z : x) z = {g(rng), g(rng)};
      const auto a = fft(x);
      const auto b = direct_dft(x);
      const double scale = std::max(1.0, max_abs(b));
      for (std::size_t k = 0; k < n; ++k) EXPECT_LE(std::abs(a[k] - b[k]), 1e-12 * scale) << n;
    }
  }
}

TEST(Fft, ImpulseAndConstant) {
  std::vector<Complex> delta(8, 0.0);
  delta[0] = 1.0;
  for (const auto& z : fft(delta)) {
    EXPECT_NEAR(z.real(), 1.0, 1e-15);
    EXPECT_NEAR(z.imag(), 0.0, 1e-15);
  }
  const std::vector<double> c(24, 1.75);
  const auto s = fft_real(c);
  EXPECT_NEAR(s[0].real(), 24 * 1.75, 1e-9);
  for (std::size_t k = 1; k < 24; ++k) EXPECT_LE(std::abs(s[k]), 1e-9);
}

TEST(Fft, ParsevalAndInverse) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t n : {8u, 16u, 24u, 32u}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Complex> x(n);
      for (auto& z : x) z = {u(rng), u(rng)};
      const auto big = fft(x);
      double e_time = 0.0;
      double e_freq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        e_time += std::norm(x[i]);
        e_freq += std::norm(big[i]);
      }
      EXPECT_NEAR(e_freq / static_cast<double>(n), e_time, 1e-12 * e_time);
      const auto back = ifft(big);
      for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(back[i] - x[i]), 1e-12 * max_abs(x));
    }
  }
}

TEST(Fft, Errors) {
  EXPECT_THROW(FftPlan(0), ParameterError);
  std::vector<Complex> x(4, 0.0);
  x[2] = {std::nan(""), 0.0};
  EXPECT_THROW(fft(x), NumericError);
  const FftPlan plan(8);
  EXPECT_THROW(plan.forward(x), ShapeError);
}

// Independent oracle: cumulative means as plain sums, then the 2x2 normal
// equations for y = a + b t solved by Cramer's rule.
std::vector<double> rank_pool_oracle(const Matrix& w, bool smoothing) {
  const std::size_t n = w.rows();
  std::vector<double> out(w.cols());
  for (std::size_t c = 0; c < w.cols(); ++c) {
    std::vector<double> y(n);
    double running = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      running += w(t, c);
      y[t] = smoothing ? running / static_cast<double>(t + 1) : w(t, c);
    }
    double s1 = 0, st = 0, stt = 0, sy = 0, sty = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const double tt = static_cast<double>(t + 1);
      s1 += 1;
      st += tt;
      stt += tt * tt;
      sy += y[t];
      sty += tt * y[t];
    }
    out[c] = (s1 * sty - st * sy) / (s1 * stt - st * st);
  }
  return out;
}

TEST(RankPool, ConstantWindowIsZero) {
  const Matrix w(24, 8, 3.25);
  for (bool smooth : {true, false})
    for (double v : rank_pool(w, smooth)) EXPECT_EQ(v, 0.0);
  for (double v : multi_scale_rank_pool(w).values) EXPECT_EQ(v, 0.0);
}

TEST(RankPool, ExactLineWithoutSmoothing) {
  for (double a : {0.75, -2.0, 1.0 / 3.0, 7.1}) {
    Matrix w(24, 2);
    for (std::size_t t = 0; t < 24; ++t) w(t, 0) = a * static_cast<double>(t + 1);
    const auto s = rank_pool(w, false);
    EXPECT_NEAR(s[0], a, 1e-14 * std::abs(a));
    EXPECT_EQ(s[1], 0.0);
  }
  Matrix w(24, 1);
  for (std::size_t t = 0; t < 24; ++t) w(t, 0) = 0.75 * static_cast<double>(t + 1);
  EXPECT_EQ(rank_pool(w, false)[0], 0.75);
}

TEST(RankPool, SmoothedLineMatchesOracle) {
  Matrix w(24, 1);
  for (std::size_t t = 0; t < 24; ++t) w(t, 0) = 1.5 * static_cast<double>(t + 1);
  // Cumulative mean of a*t is a*(t+1)/2, a line of slope a/2.
  EXPECT_NEAR(rank_pool(w, true)[0], 0.75, 1e-12);
  EXPECT_NEAR(rank_pool(w, true)[0], rank_pool_oracle(w, true)[0], 1e-12);
}

TEST(RankPool, RandomWindowsMatchOracle) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = testing::random_matrix(rng, 24, 8, -3.0, 3.0);
    const auto d = multi_scale_rank_pool(w);
    for (std::size_t si = 0; si < kRankPoolScales.size(); ++si) {
      const std::size_t s = kRankPoolScales[si];
      const auto expect = rank_pool_oracle(w.slice_rows(24 - s, s), true);
      for (std::size_t c = 0; c < 8; ++c)
        EXPECT_NEAR(d.values[si * 8 + c], expect[c], 1e-9 * std::max(1.0, std::abs(expect[c])));
    }
  }
}

TEST(RankPool, ScalesAreIndependent) {
  std::mt19937_64 rng(53);
  const auto w = testing::random_matrix(rng, 24, 8);
  const auto d = multi_scale_rank_pool(w, false);
  for (std::size_t si = 0; si < kRankPoolScales.size(); ++si) {
    const std::size_t s = kRankPoolScales[si];
    const auto direct = rank_pool(w.slice_rows(24 - s, s), false);
    for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(d.values[si * 8 + c], direct[c]);
  }
}

TEST(RankPool, ChannelZeroRampPositions) {
  Matrix w(24, 8);
  for (std::size_t t = 0; t < 24; ++t) w(t, 0) = static_cast<double>(t);
  const auto d = multi_scale_rank_pool(w, false);
  for (std::size_t si = 0; si < 5; ++si)
    for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(d.values[si * 8 + c], c == 0 ? 1.0 : 0.0);
}

// Smoothing off: reversal negates, shifts cancel, scaling scales.
TEST(RankPool, InvariantsProperty) {
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<int> grid(-64, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    Matrix w(n, 3);
    // Values on a 1/8 grid keep sums exact, so the shift identity is exact.
    for (double& v : w.data()) v = grid(rng) / 8.0;
    const auto base = rank_pool(w, false);

    Matrix rev(n, 3);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t c = 0; c < 3; ++c) rev(t, c) = w(n - 1 - t, c);
    const auto r = rank_pool(rev, false);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(r[c], -base[c]);

    Matrix shifted = w;
    const double shift = grid(rng);
    for (std::size_t t = 0; t < n; ++t) shifted(t, 1) += shift;
    EXPECT_EQ(rank_pool(shifted, false), base);

    Matrix scaled = w;
    for (std::size_t t = 0; t < n; ++t) scaled(t, 2) *= 4.0;
    const auto sc = rank_pool(scaled, false);
    EXPECT_EQ(sc[2], 4.0 * base[2]);
    EXPECT_EQ(sc[0], base[0]);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = testing::random_matrix(rng, 24, 2, -5.0, 5.0);
    const auto base = rank_pool(w, false);
    const double a = 0.1 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double b = std::uniform_real_distribution<double>(-10, 10)(rng);
    Matrix t = w;
    for (std::size_t r = 0; r < 24; ++r) t(r, 0) = a * w(r, 0) + b;
    EXPECT_NEAR(rank_pool(t, false)[0], a * base[0], 1e-12 * (1 + std::abs(a * base[0])));
  }
}

TEST(RankPool, Errors) {
  EXPECT_THROW(rank_pool(Matrix(1, 8)), ShapeError);
  Matrix w(24, 8);
  w(3, 3) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(rank_pool(w), NumericError);
  EXPECT_THROW(multi_scale_rank_pool(Matrix(23, 8)), ShapeError);
  EXPECT_THROW(multi_scale_rank_pool(Matrix(24, 7)), ShapeError);
}

TEST(Spectral, CosineAtBinThree) {
  Matrix w(24, 8, 0.5);
  for (std::size_t t = 0; t < 24; ++t) w(t, 0) = 2.0 * std::cos(2.0 * kPi * 3.0 * double(t) / 24.0);
  const auto d = spectral_features(w);
  EXPECT_NEAR(d.values[0], 24.0, 1e-9);
  EXPECT_NEAR(d.values[1], 0.0, 1e-9);
  // Constant channels: magnitude 0, phase 0.
  for (std::size_t c = 1; c < 8; ++c) {
    EXPECT_EQ(d.values[2 * c], 0.0);
    EXPECT_EQ(d.values[2 * c + 1], 0.0);
  }
  const auto spectrum = fft_real(w.column(0));
  EXPECT_EQ(dominant_bin(spectrum, 48.0).bin, 3u);
}

TEST(Spectral, SineAtBinFive) {
  Matrix w(24, 8);
  for (std::size_t t = 0; t < 24; ++t) w(t, 4) = std::sin(2.0 * kPi * 5.0 * double(t) / 24.0);
  const auto d = spectral_features(w);
  EXPECT_NEAR(d.values[8], 12.0, 1e-9);
  EXPECT_NEAR(d.values[9], -kPi / 2.0, 1e-9);
  EXPECT_EQ(dominant_bin(fft_real(w.column(4)), 24.0).bin, 5u);
}

TEST(Spectral, TiesGoToLowestBin) {
  std::vector<double> x(24);
  for (std::size_t t = 0; t < 24; ++t)
    x[t] = std::cos(2.0 * kPi * 2.0 * double(t) / 24.0) + std::cos(2.0 * kPi * 7.0 * double(t) / 24.0);
  EXPECT_EQ(dominant_bin(fft_real(x), 48.0).bin, 2u);
}

TEST(Spectral, InvariantToAddedConstantProperty) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = testing::random_matrix(rng, 24, 8, 0.0, 1.0);
    Matrix s = w;
    const double shift = u(rng);
    for (std::size_t t = 0; t < 24; ++t) s(t, trial % 8) += shift;
    const auto a = spectral_features(w);
    const auto b = spectral_features(s);
    for (std::size_t c = 0; c < 8; ++c) {
      const auto bin_a = dominant_bin(fft_real(w.column(c)), 24.0).bin;
      const auto bin_b = dominant_bin(fft_real(s.column(c)), 24.0).bin;
      EXPECT_EQ(bin_a, bin_b);
      EXPECT_NEAR(a.values[2 * c], b.values[2 * c], 1e-9);
    }
    for (double v : b.values) EXPECT_TRUE(std::isfinite(v));
    for (std::size_t c = 0; c < 8; ++c) {
      EXPECT_GE(b.values[2 * c], 0.0);
      EXPECT_GT(b.values[2 * c + 1], -kPi);
      EXPECT_LE(b.values[2 * c + 1], kPi);
    }
  }
}

TEST(Spectral, Errors) {
  EXPECT_THROW(spectral_features(Matrix(16, 8)), ShapeError);
  EXPECT_THROW(dominant_bin(std::vector<Complex>(1), 1.0), ShapeError);
}

class Assembly : public ::testing::Test {
 protected:
  void SetUp() override {
    frame_ = std::make_shared<const TimeSeriesFrame>(
        testing::make_frame(200, [](std::size_t t) { return 3.0 + std::sin(0.3 * double(t)); }));
  }
  std::shared_ptr<const TimeSeriesFrame> frame_;
};

TEST_F(Assembly, Dimensions) {
  const auto ds = make_windows(frame_, 4);
  const auto sc = fit_feature_scalers(ds);
  EXPECT_EQ(assemble_inputs(ds.samples[0], 4, {false, false}, sc).size(), 32u);
  EXPECT_EQ(assemble_inputs(ds.samples[0], 4, {true, false}, sc).size(), 48u);
  EXPECT_EQ(assemble_inputs(ds.samples[0], 4, {false, true}, sc).size(), 72u);
  const auto ds16 = make_windows(frame_, 16);
  EXPECT_EQ(assemble_inputs(ds16.samples[0], 16, {true, true}, sc).size(), 184u);
  const auto m = assemble_matrix(ds16, {true, true}, sc);
  EXPECT_EQ(m.rows(), ds16.size());
  EXPECT_EQ(m.cols(), 184u);
}

TEST_F(Assembly, LayoutAgainstComponents) {
  const auto ds = make_windows(frame_, 8);
  const auto sc = fit_feature_scalers(ds);
  const auto& s = ds.samples[5];
  const auto v = assemble_inputs(s, 8, {true, true}, sc);
  for (std::size_t t = 0; t < 8; ++t)
    for (std::size_t c = 0; c < 8; ++c)
      EXPECT_EQ(v[t * 8 + c], sc.minmax.apply_value(c, s.retro(16 + t, c)));
  const auto spec = spectral_features(apply(sc.minmax, s.retro));
  for (std::size_t i = 0; i < kSpectralDim; ++i) EXPECT_EQ(v[64 + i], spec.values[i]);
  const auto rp = multi_scale_rank_pool(apply(sc.zscore, s.retro));
  for (std::size_t i = 0; i < kRankPoolDim; ++i) EXPECT_EQ(v[80 + i], rp.values[i]);
}

// Perturbing a retro row outside the input window moves only descriptor slots.
TEST_F(Assembly, PositionalSensitivity) {
  const auto ds = make_windows(frame_, 4);
  const auto sc = fit_feature_scalers(ds);
  WindowSample s = ds.samples[10];
  const auto before = assemble_inputs(s, 4, {true, true}, sc);
  s.retro(2, 0) += 2.0;
  const auto after = assemble_inputs(s, 4, {true, true}, sc);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(before[i], after[i]);
  EXPECT_NE(before[32], after[32]);  // PRS magnitude
  EXPECT_NE(before[48 + 32], after[48 + 32]);  // PRS slope at the 24 h scale
  for (std::size_t i = 48; i < 48 + 32; ++i) EXPECT_EQ(before[i], after[i]);  // shorter scales
}

TEST_F(Assembly, Errors) {
  const auto ds = make_windows(frame_, 4);
  const auto sc = fit_feature_scalers(ds);
  EXPECT_THROW(assemble_inputs(ds.samples[0], 0, {}, sc), ShapeError);
  EXPECT_THROW(assemble_inputs(ds.samples[0], 25, {}, sc), ShapeError);
  EXPECT_THROW(assemble_inputs(ds.samples[0], 4, {}, FeatureScalers{}), ShapeError);
  EXPECT_THROW(FeatureSet::parse("WAVELET"), ParameterError);
  for (const char* n : {"RAW", "FFT", "RP", "FFT+RP"}) EXPECT_EQ(FeatureSet::parse(n).name(), n);
}

}  // namespace
}  // namespace tempocast

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

#include "tempocast/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tempocast/error.hpp"

namespace tempocast {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericError(std::string("fusion: non-finite value in ") + what);
}

}  // namespace

std::vector<double> least_squares_min_norm(const Matrix& a, std::span<const double> b) {
  const std::size_t n = a.rows(), k = a.cols();
  if (b.size() != n) throw ShapeError("least squares: right-hand side length differs from rows");
  if (n == 0 || k == 0) throw ShapeError("least squares: empty system");

  Matrix w = a;
  Matrix v(k, k);
  for (std::size_t i = 0; i < k; ++i) v(i, i) = 1.0;

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          alpha += w(r, p) * w(r, p);
          beta += w(r, q) * w(r, q);
          gamma += w(r, p) * w(r, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < n; ++r) {
          const double wp = w(r, p), wq = w(r, q);
          w(r, p) = c * wp - s * wq;
          w(r, q) = s * wp + c * wq;
        }
        for (std::size_t r = 0; r < k; ++r) {
          const double vp = v(r, p), vq = v(r, q);
          v(r, p) = c * vp - s * vq;
          v(r, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += w(r, j) * w(r, j);
    sigma[j] = std::sqrt(ss);
  }
  const double sigma_max = *std::max_element(sigma.begin(), sigma.end());
  const double tol = static_cast<double>(std::max(n, k)) * kEps * sigma_max;

  // x = V diag(1/sigma) U^T b, with U^T b = W^T b / sigma.
  std::vector<double> x(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    if (!(sigma[j] > tol)) continue;
    double wb = 0.0;
    for (std::size_t r = 0; r < n; ++r) wb += w(r, j) * b[r];
    const double coef = wb / (sigma[j] * sigma[j]);
    for (std::size_t i = 0; i < k; ++i) x[i] += v(i, j) * coef;
  }
  return x;
}

FusionTerm fit_fusion(std::span<const double> p_fft, std::span<const double> p_rp,
                      std::span<const double> y) {
  const std::size_t n = y.size();
  if (p_fft.size() != n || p_rp.size() != n)
    throw ShapeError("fusion: branch predictions and targets differ in length");
  if (n < 3) throw ParameterError("fusion: need at least 3 samples, got " + std::to_string(n));
  require_finite(p_fft, "FFT branch");
  require_finite(p_rp, "RP branch");
  require_finite(y, "targets");

  Matrix a(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, 0) = p_fft[i];
    a(i, 1) = p_rp[i];
    a(i, 2) = 1.0;
  }
  const auto x = least_squares_min_norm(a, y);
  return {x[0], x[1], x[2]};
}

FusionWeights fit_fusion(const Matrix& p_fft, const Matrix& p_rp, const Matrix& y) {
  if (p_fft.rows() != y.rows() || p_rp.rows() != y.rows() || p_fft.cols() != y.cols() ||
      p_rp.cols() != y.cols())
    throw ShapeError("fusion: prediction and target matrices differ in shape");
  FusionWeights out;
  for (std::size_t h = 0; h < y.cols(); ++h) {
    const auto f = p_fft.column(h), r = p_rp.column(h), t = y.column(h);
    out.horizons.push_back(fit_fusion(f, r, t));
  }
  return out;
}

std::vector<double> fuse(const FusionTerm& term, std::span<const double> p_fft,
                         std::span<const double> p_rp) {
  if (p_fft.size() != p_rp.size()) throw ShapeError("fuse: branch lengths differ");
  std::vector<double> out(p_fft.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::max(0.0, term.w_fft * p_fft[i] + term.w_rp * p_rp[i] + term.intercept);
  return out;
}

Matrix fuse(const FusionWeights& weights, const Matrix& p_fft, const Matrix& p_rp) {
  if (p_fft.rows() != p_rp.rows() || p_fft.cols() != p_rp.cols() ||
      p_fft.cols() != weights.horizons.size())
    throw ShapeError("fuse: branch matrices do not match the fusion weights");
  Matrix out(p_fft.rows(), p_fft.cols());
  for (std::size_t h = 0; h < p_fft.cols(); ++h) {
    const auto col = fuse(weights.horizons[h], p_fft.column(h), p_rp.column(h));
    for (std::size_t i = 0; i < col.size(); ++i) out(i, h) = col[i];
  }
  return out;
}

}  // namespace tempocast

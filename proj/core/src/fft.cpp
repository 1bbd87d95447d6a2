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

#include "tempocast/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tempocast/error.hpp"

namespace tempocast {
namespace {

void check_finite(std::span<const Complex> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()))
      throw NumericError("fft: non-finite input at index " + std::to_string(i));
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(n > 0 && (n & (n - 1)) == 0) {
  if (n == 0) throw ParameterError("fft length must be at least 1");
  roots_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    roots_[j] = {std::cos(angle), std::sin(angle)};
  }
  for (std::size_t m = n, p = 2; m > 1;) {
    if (p * p > m) {
      factors_.push_back(m);
      break;
    }
    if (m % p == 0) {
      factors_.push_back(p);
      m /= p;
    } else {
      ++p;
    }
  }
}

void FftPlan::radix2(std::vector<Complex>& a) const {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * roots_[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// Decimation in time over factor p = factors_[factor_index]: the p strided
// subsequences are transformed recursively, then combined with
//   X[k + m*q] = sum_r W_n^{r*k} W_p^{r*q} Sub_r[k],  n = p*m.
// A prime length (last factor) reduces to the direct DFT.
void FftPlan::mixed(const Complex* in, std::size_t stride, std::size_t n,
                    Complex* out, std::size_t factor_index) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[factor_index];
  const std::size_t m = n / p;
  const std::size_t root_step = n_ / n;  // W_n^j = roots_[j * root_step]
  if (m == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < n; ++t)
        acc += in[t * stride] * roots_[((k * t) % n) * root_step];
      out[k] = acc;
    }
    return;
  }
  std::vector<Complex> sub(n);
  for (std::size_t r = 0; r < p; ++r)
    mixed(in + r * stride, stride * p, m, sub.data() + r * m, factor_index + 1);
  for (std::size_t q = 0; q < p; ++q) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t idx = k + m * q;
      Complex acc{0.0, 0.0};
      for (std::size_t r = 0; r < p; ++r)
        acc += sub[r * m + k] * roots_[((r * idx) % n) * root_step];
      out[idx] = acc;
    }
  }
}

std::vector<Complex> FftPlan::forward(std::span<const Complex> x) const {
  if (x.size() != n_)
    throw ShapeError("fft plan of length " + std::to_string(n_) + " given " +
                     std::to_string(x.size()) + " samples");
  check_finite(x);
  if (pow2_) {
    std::vector<Complex> a(x.begin(), x.end());
    radix2(a);
    return a;
  }
  std::vector<Complex> out(n_);
  mixed(x.data(), 1, n_, out.data(), 0);
  return out;
}

std::vector<Complex> FftPlan::inverse(std::span<const Complex> x) const {
  std::vector<Complex> conj_in(x.begin(), x.end());
  for (auto& v : conj_in) v = std::conj(v);
  auto out = forward(conj_in);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v = std::conj(v) * scale;
  return out;
}

std::vector<Complex> fft(std::span<const Complex> x) { return FftPlan(x.size()).forward(x); }

std::vector<Complex> ifft(std::span<const Complex> x) { return FftPlan(x.size()).inverse(x); }

std::vector<Complex> fft_real(std::span<const double> x) {
  std::vector<Complex> c(x.begin(), x.end());
  return fft(c);
}

}  // namespace tempocast

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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tempocast {

using Complex = std::complex<double>;

/// Precomputed transform of a fixed length. Powers of two run an iterative
/// radix-2 Cooley-Tukey; other lengths recurse over their prime factors
/// (mixed radix) and fall back to a direct DFT on prime sizes.
///
///   X[k] = sum_t x[t] * exp(-2*pi*i*k*t/N)
///
/// A plan is immutable after construction and may be shared across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  std::vector<Complex> forward(std::span<const Complex> x) const;
  /// Unnormalized forward followed by division by N, so inverse(forward(x)) = x.
  std::vector<Complex> inverse(std::span<const Complex> x) const;

 private:
  void radix2(std::vector<Complex>& a) const;
  void mixed(const Complex* in, std::size_t stride, std::size_t n, Complex* out,
             std::size_t factor_index) const;

  std::size_t n_;
  bool pow2_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> roots_;  // roots_[j] = exp(-2*pi*i*j/N)
};

/// One-shot transforms; throw NumericError on non-finite input.
std::vector<Complex> fft(std::span<const Complex> x);
std::vector<Complex> ifft(std::span<const Complex> x);
std::vector<Complex> fft_real(std::span<const double> x);

}  // namespace tempocast

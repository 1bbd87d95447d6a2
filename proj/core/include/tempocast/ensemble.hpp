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

#include <cstddef>
#include <span>
#include <vector>

#include "tempocast/matrix.hpp"

namespace tempocast {

/// Fused forecast for one horizon: w_fft * p_fft + w_rp * p_rp + intercept.
struct FusionTerm {
  double w_fft = 0.0;
  double w_rp = 0.0;
  double intercept = 0.0;

  bool operator==(const FusionTerm&) const = default;
};

struct FusionWeights {
  std::vector<FusionTerm> horizons;

  bool operator==(const FusionWeights&) const = default;
};

/// Minimum-norm least squares x for the n x k system a x ~ b, computed from a
/// one-sided Jacobi SVD. Singular values below max(n, k) * eps * sigma_max
/// are treated as zero.
std::vector<double> least_squares_min_norm(const Matrix& a, std::span<const double> b);

/// Needs n >= 3 finite samples.
FusionTerm fit_fusion(std::span<const double> p_fft, std::span<const double> p_rp,
                      std::span<const double> y);

/// Columns are horizons; each is fitted independently.
FusionWeights fit_fusion(const Matrix& p_fft, const Matrix& p_rp, const Matrix& y);

/// Clamped at 0 from below.
std::vector<double> fuse(const FusionTerm& term, std::span<const double> p_fft,
                         std::span<const double> p_rp);
Matrix fuse(const FusionWeights& weights, const Matrix& p_fft, const Matrix& p_rp);

}  // namespace tempocast

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

// Activations and the handful of dense kernels the networks are built from.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "tempocast/matrix.hpp"

namespace tempocast::nn {

enum class Activation : std::uint8_t { kIdentity = 0, kTanh = 1, kSigmoid = 2, kGelu = 3 };

std::string_view to_string(Activation a);

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double softsign(double z) { return z / (1.0 + std::abs(z)); }
inline double softsign_derivative(double z) {
  const double d = 1.0 + std::abs(z);
  return 1.0 / (d * d);
}

// Exact (erf) GELU.
inline double gelu(double z) { return 0.5 * z * (1.0 + std::erf(z * 0.70710678118654752440)); }
inline double gelu_derivative(double z) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return 0.5 * (1.0 + std::erf(z * 0.70710678118654752440)) +
         z * kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::kIdentity:
      return z;
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kSigmoid:
      return sigmoid(z);
    case Activation::kGelu:
      return gelu(z);
  }
  return z;
}

/// d activate(z) / dz given both the pre-activation z and the output y.
inline double activate_derivative(Activation a, double z, double y) {
  switch (a) {
    case Activation::kIdentity:
      return 1.0;
    case Activation::kTanh:
      return 1.0 - y * y;
    case Activation::kSigmoid:
      return y * (1.0 - y);
    case Activation::kGelu:
      return gelu_derivative(z);
  }
  return 1.0;
}

// C += A * B with A: m x k, B: k x n.
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& c);
// C += A^T * B with A: k x m, B: k x n.
void matmul_at_acc(const Matrix& a, const Matrix& b, Matrix& c);
// C += A * B^T with A: m x k, B: n x k.
void matmul_bt_acc(const Matrix& a, const Matrix& b, Matrix& c);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_at(const Matrix& a, const Matrix& b);
Matrix matmul_bt(const Matrix& a, const Matrix& b);

/// Mean over all entries of (pred - target)^2.
double mean_squared_error(const Matrix& pred, const Matrix& target);

}  // namespace tempocast::nn

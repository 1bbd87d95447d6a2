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

#include "tempocast/nn/ops.hpp"

#include <string>

namespace tempocast::nn {
namespace {

void shape_fail(const char* op, const Matrix& a, const Matrix& b, const Matrix& c) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + std::to_string(a.rows()) +
                   "x" + std::to_string(a.cols()) + ", " + std::to_string(b.rows()) + "x" +
                   std::to_string(b.cols()) + " -> " + std::to_string(c.rows()) + "x" +
                   std::to_string(c.cols()));
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kGelu:
      return "gelu";
  }
  return "?";
}

// Inner loops are contiguous axpy updates so they vectorize without
// reassociating any reduction.
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k || c.rows() != m || c.cols() != n) shape_fail("matmul", a, b, c);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = pc + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      const double* brow = pb + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_at_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  if (b.rows() != k || c.rows() != m || c.cols() != n) shape_fail("matmul_at", a, b, c);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  for (std::size_t p = 0; p < k; ++p) {
    const double* brow = pb + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = pa[p * m + i];
      double* crow = pc + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_bt_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols() != b.cols() || c.rows() != a.rows() || c.cols() != b.rows())
    shape_fail("matmul_bt", a, b, c);
  matmul_acc(a, b.transposed(), c);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  matmul_acc(a, b, c);
  return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
  Matrix c(a.cols(), b.cols());
  matmul_at_acc(a, b, c);
  return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.rows());
  matmul_bt_acc(a, b, c);
  return c;
}

double mean_squared_error(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw ShapeError("mse: prediction and target shapes differ");
  if (pred.empty()) throw ShapeError("mse of empty matrices");
  double acc = 0.0;
  const auto p = pred.data();
  const auto t = target.data();
  for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - t[i]) * (p[i] - t[i]);
  return acc / static_cast<double>(p.size());
}

}  // namespace tempocast::nn

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

#include "tempocast/nn/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tempocast::nn {
namespace {

double squash(CellActivation a, double c) {
  return a == CellActivation::kTanh ? std::tanh(c) : softsign(c);
}

double squash_derivative(CellActivation a, double c, double squashed) {
  return a == CellActivation::kTanh ? 1.0 - squashed * squashed : softsign_derivative(c);
}

// Per-step values kept for backpropagation through time.
struct StepCache {
  std::vector<double> v;  // [h_prev, x_t]
  std::vector<double> f, i, g, o;
  std::vector<double> c_prev, c, squashed_c;
};

}  // namespace

Lstm::Lstm(LstmConfig config) : config_(config) {
  if (config_.lookback == 0 || config_.units == 0 || config_.output_dim == 0 ||
      config_.step_input() == 0)
    throw ParameterError("lstm: all dimensions must be positive");
  const std::size_t u = config_.units, in = config_.step_input();
  params_.assign(4 * u * (u + in) + 4 * u + config_.output_dim * u + config_.output_dim, 0.0);
}

std::size_t Lstm::gate_bias_offset() const noexcept {
  return 4 * config_.units * (config_.units + config_.step_input());
}
std::size_t Lstm::head_weights_offset() const noexcept {
  return gate_bias_offset() + 4 * config_.units;
}
std::size_t Lstm::head_bias_offset() const noexcept {
  return head_weights_offset() + config_.output_dim * config_.units;
}

std::vector<std::uint64_t> Lstm::shape_table() const {
  return {config_.lookback, config_.step_features, config_.static_features, config_.units,
          config_.output_dim, static_cast<std::uint64_t>(config_.cell_activation)};
}

LstmConfig Lstm::config_from_shape(std::span<const std::uint64_t> s) {
  if (s.size() != 6 || s[5] > 1) throw FormatError("lstm: malformed shape table");
  LstmConfig c;
  c.lookback = s[0];
  c.step_features = s[1];
  c.static_features = s[2];
  c.units = s[3];
  c.output_dim = s[4];
  c.cell_activation = static_cast<CellActivation>(s[5]);
  return c;
}

LstmCell Lstm::cell() const {
  const std::size_t u = config_.units, cols = u + config_.step_input();
  const std::span<const double> p = params_;
  const std::size_t gb = gate_bias_offset();
  LstmCell c;
  c.w_forget = p.subspan(0 * u * cols, u * cols);
  c.w_input = p.subspan(1 * u * cols, u * cols);
  c.w_candidate = p.subspan(2 * u * cols, u * cols);
  c.w_output = p.subspan(3 * u * cols, u * cols);
  c.b_forget = p.subspan(gb + 0 * u, u);
  c.b_input = p.subspan(gb + 1 * u, u);
  c.b_candidate = p.subspan(gb + 2 * u, u);
  c.b_output = p.subspan(gb + 3 * u, u);
  c.w_head = p.subspan(head_weights_offset(), config_.output_dim * u);
  c.b_head = p.subspan(head_bias_offset(), config_.output_dim);
  c.units = u;
  c.step_input = config_.step_input();
  c.output_dim = config_.output_dim;
  c.cell_activation = config_.cell_activation;
  return c;
}

void Lstm::initialize_impl(std::mt19937_64& rng) {
  const std::size_t u = config_.units;
  std::span<double> p = params_;
  fill_uniform(p.subspan(0, head_weights_offset()), u + config_.step_input(), rng);
  fill_uniform(p.subspan(head_weights_offset()), u, rng);
}

std::vector<double> Lstm::step_input(std::span<const double> row, std::size_t t) const {
  const std::size_t sf = config_.step_features;
  std::vector<double> x(config_.step_input());
  std::copy_n(row.begin() + static_cast<std::ptrdiff_t>(t * sf), sf, x.begin());
  std::copy_n(row.begin() + static_cast<std::ptrdiff_t>(config_.lookback * sf),
              config_.static_features, x.begin() + static_cast<std::ptrdiff_t>(sf));
  return x;
}

LstmStepResult lstm_step(const LstmCell& cell, std::span<const double> x,
                         std::span<const double> h_prev, std::span<const double> c_prev) {
  const std::size_t u = cell.units, cols = u + cell.step_input;
  if (x.size() != cell.step_input || h_prev.size() != u || c_prev.size() != u)
    throw ShapeError("lstm_step: expected x of " + std::to_string(cell.step_input) +
                     " and state of " + std::to_string(u));
  std::vector<double> v(cols);
  std::copy(h_prev.begin(), h_prev.end(), v.begin());
  std::copy(x.begin(), x.end(), v.begin() + static_cast<std::ptrdiff_t>(u));
  const auto gate = [&](std::span<const double> w, std::span<const double> b, std::size_t k) {
    double z = b[k];
    for (std::size_t j = 0; j < cols; ++j) z += w[k * cols + j] * v[j];
    return z;
  };
  LstmStepResult r;
  r.h.resize(u);
  r.c.resize(u);
  for (std::size_t k = 0; k < u; ++k) {
    const double f = sigmoid(gate(cell.w_forget, cell.b_forget, k));
    const double i = sigmoid(gate(cell.w_input, cell.b_input, k));
    const double g = std::tanh(gate(cell.w_candidate, cell.b_candidate, k));
    const double o = sigmoid(gate(cell.w_output, cell.b_output, k));
    r.c[k] = f * c_prev[k] + i * g;
    r.h[k] = o * squash(cell.cell_activation, r.c[k]);
  }
  r.y.resize(cell.output_dim);
  for (std::size_t k = 0; k < cell.output_dim; ++k) {
    double z = cell.b_head[k];
    for (std::size_t j = 0; j < u; ++j) z += cell.w_head[k * u + j] * r.h[j];
    r.y[k] = sigmoid(z);
  }
  return r;
}

Matrix Lstm::forward(const Matrix& inputs) const {
  check_batch(inputs, nullptr);
  const LstmCell c = cell();
  Matrix out(inputs.rows(), config_.output_dim);
  const std::vector<double> zeros(config_.units, 0.0);
  for (std::size_t b = 0; b < inputs.rows(); ++b) {
    std::vector<double> h = zeros, cs = zeros, y;
    for (std::size_t t = 0; t < config_.lookback; ++t) {
      auto r = lstm_step(c, step_input(inputs.row(b), t), h, cs);
      h = std::move(r.h);
      cs = std::move(r.c);
      y = std::move(r.y);
    }
    std::copy(y.begin(), y.end(), out.row(b).begin());
  }
  return out;
}

double Lstm::loss_gradient(const Matrix& inputs, const Matrix& targets,
                           std::span<double> grad) const {
  check_batch(inputs, &targets);
  if (grad.size() != params_.size()) throw ShapeError("lstm: gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);

  const std::size_t u = config_.units, cols = u + config_.step_input();
  const std::size_t steps = config_.lookback, od = config_.output_dim;
  const std::size_t batch = inputs.rows();
  const double* w = params_.data();
  const double* bias = params_.data() + gate_bias_offset();
  const double* w_head = params_.data() + head_weights_offset();
  const double* b_head = params_.data() + head_bias_offset();
  double* gw = grad.data();
  double* gb = grad.data() + gate_bias_offset();
  double* gw_head = grad.data() + head_weights_offset();
  double* gb_head = grad.data() + head_bias_offset();
  const double scale = 2.0 / static_cast<double>(batch * od);

  std::vector<StepCache> cache(steps);
  std::vector<double> z(4 * u), dz(4 * u), dh(u), dc(u), dv(cols), y(od), dy(od);
  double loss = 0.0;

  for (std::size_t b = 0; b < batch; ++b) {
    const auto row = inputs.row(b);
    std::vector<double> h(u, 0.0), c(u, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
      StepCache& s = cache[t];
      s.v.resize(cols);
      std::copy(h.begin(), h.end(), s.v.begin());
      const auto x = step_input(row, t);
      std::copy(x.begin(), x.end(), s.v.begin() + static_cast<std::ptrdiff_t>(u));
      for (std::size_t k = 0; k < 4 * u; ++k) {
        double acc = bias[k];
        const double* wr = w + k * cols;
        for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * s.v[j];
        z[k] = acc;
      }
      s.f.resize(u);
      s.i.resize(u);
      s.g.resize(u);
      s.o.resize(u);
      s.c_prev = c;
      s.c.resize(u);
      s.squashed_c.resize(u);
      for (std::size_t k = 0; k < u; ++k) {
        s.f[k] = sigmoid(z[k]);
        s.i[k] = sigmoid(z[u + k]);
        s.g[k] = std::tanh(z[2 * u + k]);
        s.o[k] = sigmoid(z[3 * u + k]);
        s.c[k] = s.f[k] * c[k] + s.i[k] * s.g[k];
        s.squashed_c[k] = squash(config_.cell_activation, s.c[k]);
        h[k] = s.o[k] * s.squashed_c[k];
      }
      c = s.c;
    }

    for (std::size_t k = 0; k < od; ++k) {
      double acc = b_head[k];
      for (std::size_t j = 0; j < u; ++j) acc += w_head[k * u + j] * h[j];
      y[k] = sigmoid(acc);
      const double r = y[k] - targets(b, k);
      loss += r * r;
      dy[k] = scale * r * y[k] * (1.0 - y[k]);  // through the sigmoid head
    }
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t k = 0; k < od; ++k) {
      gb_head[k] += dy[k];
      for (std::size_t j = 0; j < u; ++j) {
        gw_head[k * u + j] += dy[k] * h[j];
        dh[j] += w_head[k * u + j] * dy[k];
      }
    }
    std::fill(dc.begin(), dc.end(), 0.0);

    for (std::size_t t = steps; t-- > 0;) {
      const StepCache& s = cache[t];
      for (std::size_t k = 0; k < u; ++k) {
        const double d_o = dh[k] * s.squashed_c[k];
        dc[k] += dh[k] * s.o[k] *
                 squash_derivative(config_.cell_activation, s.c[k], s.squashed_c[k]);
        const double d_f = dc[k] * s.c_prev[k];
        const double d_i = dc[k] * s.g[k];
        const double d_g = dc[k] * s.i[k];
        dz[k] = d_f * s.f[k] * (1.0 - s.f[k]);
        dz[u + k] = d_i * s.i[k] * (1.0 - s.i[k]);
        dz[2 * u + k] = d_g * (1.0 - s.g[k] * s.g[k]);
        dz[3 * u + k] = d_o * s.o[k] * (1.0 - s.o[k]);
        dc[k] *= s.f[k];  // carried to c_{t-1}
      }
      std::fill(dv.begin(), dv.end(), 0.0);
      for (std::size_t k = 0; k < 4 * u; ++k) {
        const double d = dz[k];
        gb[k] += d;
        double* gwr = gw + k * cols;
        const double* wr = w + k * cols;
        for (std::size_t j = 0; j < cols; ++j) {
          gwr[j] += d * s.v[j];
          dv[j] += wr[j] * d;
        }
      }
      std::copy_n(dv.begin(), u, dh.begin());
    }
  }
  return loss / static_cast<double>(batch * od);
}

}  // namespace tempocast::nn

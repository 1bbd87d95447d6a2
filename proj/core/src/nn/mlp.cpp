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

#include "tempocast/nn/mlp.hpp"

#include <algorithm>
#include <string>

namespace tempocast::nn {

Mlp::Mlp(MlpConfig config) : config_(std::move(config)) {
  if (config_.input_dim == 0 || config_.output_dim == 0)
    throw ParameterError("mlp: input and output widths must be positive");
  dims_.push_back(config_.input_dim);
  for (auto h : config_.hidden) {
    if (h == 0) throw ParameterError("mlp: hidden widths must be positive");
    dims_.push_back(h);
  }
  dims_.push_back(config_.output_dim);
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    offsets_.push_back(total);
    total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

std::vector<std::uint64_t> Mlp::shape_table() const {
  std::vector<std::uint64_t> s;
  s.push_back(config_.input_dim);
  s.push_back(config_.hidden.size());
  for (auto h : config_.hidden) s.push_back(h);
  s.push_back(config_.output_dim);
  s.push_back(static_cast<std::uint64_t>(config_.hidden_activation));
  s.push_back(static_cast<std::uint64_t>(config_.output_activation));
  return s;
}

MlpConfig Mlp::config_from_shape(std::span<const std::uint64_t> s) {
  if (s.size() < 2 || s.size() != s[1] + 5) throw FormatError("mlp: malformed shape table");
  MlpConfig c;
  c.input_dim = s[0];
  c.hidden.assign(s.begin() + 2, s.begin() + 2 + static_cast<std::ptrdiff_t>(s[1]));
  c.output_dim = s[2 + s[1]];
  const auto ha = s[3 + s[1]];
  const auto oa = s[4 + s[1]];
  if (ha > 3 || oa > 3) throw FormatError("mlp: unknown activation code");
  c.hidden_activation = static_cast<Activation>(ha);
  c.output_activation = static_cast<Activation>(oa);
  return c;
}

DenseLayer Mlp::layer(std::size_t i) const {
  if (i >= layer_count()) throw ParameterError("mlp: layer index out of range");
  const std::size_t in = dims_[i], out = dims_[i + 1];
  const std::span<const double> all = params_;
  return {all.subspan(offsets_[i], in * out), all.subspan(offsets_[i] + in * out, out), in,
          out, activation_of(i)};
}

void Mlp::initialize_impl(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = dims_[l], out = dims_[l + 1];
    fill_uniform(std::span<double>(params_).subspan(offsets_[l], in * out + out), in, rng);
  }
}

void Mlp::run(const Matrix& inputs, std::vector<Matrix>& pre, std::vector<Matrix>& act) const {
  const std::size_t batch = inputs.rows();
  pre.assign(layer_count() + 1, Matrix{});
  act.assign(layer_count() + 1, Matrix{});
  act[0] = inputs;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const DenseLayer layer_view = layer(l);
    const Matrix weights(layer_view.out, layer_view.in,
                         std::vector<double>(layer_view.weights.begin(), layer_view.weights.end()));
    Matrix z(batch, layer_view.out);
    for (std::size_t b = 0; b < batch; ++b)
      std::copy(layer_view.bias.begin(), layer_view.bias.end(), z.row(b).begin());
    matmul_bt_acc(act[l], weights, z);
    Matrix a(batch, layer_view.out);
    const auto zd = z.data();
    auto ad = a.data();
    for (std::size_t i = 0; i < zd.size(); ++i) ad[i] = activate(layer_view.activation, zd[i]);
    pre[l + 1] = std::move(z);
    act[l + 1] = std::move(a);
  }
}

Matrix Mlp::forward(const Matrix& inputs) const {
  check_batch(inputs, nullptr);
  std::vector<Matrix> pre, act;
  run(inputs, pre, act);
  return std::move(act.back());
}

double Mlp::loss_gradient(const Matrix& inputs, const Matrix& targets,
                          std::span<double> grad) const {
  check_batch(inputs, &targets);
  if (grad.size() != params_.size()) throw ShapeError("mlp: gradient buffer size mismatch");
  std::vector<Matrix> pre, act;
  run(inputs, pre, act);

  const std::size_t batch = inputs.rows();
  const Matrix& out = act.back();
  const double scale = 2.0 / static_cast<double>(batch * config_.output_dim);
  double loss = 0.0;
  Matrix delta(batch, config_.output_dim);  // d loss / d activation
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = out.data()[i] - targets.data()[i];
    loss += r * r;
    delta.data()[i] = scale * r;
  }
  loss /= static_cast<double>(batch * config_.output_dim);

  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t l = layer_count(); l-- > 0;) {
    const std::size_t in = dims_[l], outw = dims_[l + 1];
    const Activation a = activation_of(l);
    // delta <- d loss / d pre-activation
    auto dd = delta.data();
    const auto zd = pre[l + 1].data();
    const auto yd = act[l + 1].data();
    for (std::size_t i = 0; i < dd.size(); ++i) dd[i] *= activate_derivative(a, zd[i], yd[i]);

    Matrix grad_w(outw, in);
    matmul_at_acc(delta, act[l], grad_w);
    std::copy(grad_w.data().begin(), grad_w.data().end(), grad.begin() + static_cast<std::ptrdiff_t>(offsets_[l]));
    double* grad_b = grad.data() + offsets_[l] + in * outw;
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t o = 0; o < outw; ++o) grad_b[o] += delta(b, o);

    if (l > 0) {
      const DenseLayer lv = layer(l);
      const Matrix weights(outw, in, std::vector<double>(lv.weights.begin(), lv.weights.end()));
      Matrix next(batch, in);
      matmul_acc(delta, weights, next);
      delta = std::move(next);
    }
  }
  return loss;
}

}  // namespace tempocast::nn

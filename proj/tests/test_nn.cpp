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
#include <random>

#include "tempocast/error.hpp"
#include "tempocast/nn/adam.hpp"
#include "tempocast/nn/lstm.hpp"
#include "tempocast/nn/mixer.hpp"
#include "tempocast/nn/mlp.hpp"
#include "tempocast/nn/trainer.hpp"
#include "test_support.hpp"

namespace tempocast::nn {
namespace {

double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double gelu_ref(double z) { return 0.5 * z * (1.0 + std::erf(z / std::sqrt(2.0))); }

void randomize(Network& net, std::mt19937_64& rng, double scale = 0.6) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& p : net.parameters()) p = u(rng);
}

// Naive triple loop straight off the flat parameter layout.
Matrix mlp_oracle(const Mlp& net, const Matrix& x) {
  std::vector<std::size_t> dims = {net.config().input_dim};
  for (auto h : net.config().hidden) dims.push_back(h);
  dims.push_back(net.config().output_dim);
  const auto p = net.parameters();
  Matrix out(x.rows(), dims.back());
  for (std::size_t b = 0; b < x.rows(); ++b) {
    std::vector<double> a(x.row(b).begin(), x.row(b).end());
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      const std::size_t in = dims[l], outw = dims[l + 1];
      std::vector<double> next(outw);
      for (std::size_t o = 0; o < outw; ++o) {
        double z = p[off + in * outw + o];
        for (std::size_t i = 0; i < in; ++i) z += p[off + o * in + i] * a[i];
        next[o] = l + 2 == dims.size() ? sig(z) : std::tanh(z);
      }
      off += in * outw + outw;
      a = next;
    }
    for (std::size_t o = 0; o < a.size(); ++o) out(b, o) = a[o];
  }
  return out;
}

// The gate equations written out, indexing the documented layout.
Matrix lstm_oracle(const Lstm& net, const Matrix& x) {
  const auto& cfg = net.config();
  const std::size_t u = cfg.units, in = cfg.step_input(), cols = u + in, od = cfg.output_dim;
  const auto p = net.parameters();
  const std::size_t gb = 4 * u * cols, hw = gb + 4 * u, hb = hw + od * u;
  Matrix out(x.rows(), od);
  for (std::size_t b = 0; b < x.rows(); ++b) {
    std::vector<double> h(u, 0.0), c(u, 0.0);
    for (std::size_t t = 0; t < cfg.lookback; ++t) {
      std::vector<double> v(h);
      for (std::size_t k = 0; k < cfg.step_features; ++k) v.push_back(x(b, t * cfg.step_features + k));
      for (std::size_t k = 0; k < cfg.static_features; ++k)
        v.push_back(x(b, cfg.lookback * cfg.step_features + k));
      const auto gate = [&](std::size_t g, std::size_t j) {
        double z = p[gb + g * u + j];
        for (std::size_t k = 0; k < cols; ++k) z += p[g * u * cols + j * cols + k] * v[k];
        return z;
      };
      std::vector<double> hn(u), cn(u);
      for (std::size_t j = 0; j < u; ++j) {
        const double f = sig(gate(0, j));
        const double i = sig(gate(1, j));
        const double g = std::tanh(gate(2, j));
        const double o = sig(gate(3, j));
        cn[j] = f * c[j] + i * g;
        const double act = cfg.cell_activation == CellActivation::kTanh
                               ? std::tanh(cn[j])
                               : cn[j] / (1.0 + std::abs(cn[j]));
        hn[j] = o * act;
      }
      h = hn;
      c = cn;
    }
    for (std::size_t k = 0; k < od; ++k) {
      double z = p[hb + k];
      for (std::size_t j = 0; j < u; ++j) z += p[hw + k * u + j] * h[j];
      out(b, k) = sig(z);
    }
  }
  return out;
}

Matrix layer_norm_ref(const Matrix& x, std::span<const double> g, std::span<const double> b) {
  Matrix y(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) mean += x(r, c);
    mean /= double(x.cols());
    double var = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= double(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c)
      y(r, c) = g[c] * (x(r, c) - mean) / std::sqrt(var + 1e-5) + b[c];
  }
  return y;
}

// Two-layer GELU MLP on a vector: w2 * gelu(w1 v + b1) + b2.
std::vector<double> mlp2(std::span<const double> w1, std::span<const double> b1,
                         std::span<const double> w2, std::span<const double> b2,
                         const std::vector<double>& v) {
  const std::size_t hid = b1.size(), outw = b2.size(), in = v.size();
  std::vector<double> h(hid), o(outw);
  for (std::size_t j = 0; j < hid; ++j) {
    double z = b1[j];
    for (std::size_t k = 0; k < in; ++k) z += w1[j * in + k] * v[k];
    h[j] = gelu_ref(z);
  }
  for (std::size_t j = 0; j < outw; ++j) {
    double z = b2[j];
    for (std::size_t k = 0; k < hid; ++k) z += w2[j * hid + k] * h[k];
    o[j] = z;
  }
  return o;
}

Matrix mixer_oracle(const Mixer& net, const Matrix& x) {
  const auto& cfg = net.config();
  const std::size_t tk = cfg.tokens, ch = cfg.channels(), od = cfg.output_dim;
  Matrix out(x.rows(), od);
  for (std::size_t b = 0; b < x.rows(); ++b) {
    Matrix s(tk, ch);
    for (std::size_t t = 0; t < tk; ++t) {
      for (std::size_t c = 0; c < cfg.step_features; ++c) s(t, c) = x(b, t * cfg.step_features + c);
      for (std::size_t c = 0; c < cfg.static_features; ++c)
        s(t, cfg.step_features + c) = x(b, tk * cfg.step_features + c);
    }
    for (std::size_t l = 0; l < cfg.blocks; ++l) {
      const auto blk = net.block(l);
      const Matrix u = layer_norm_ref(s, blk.norm1_gain, blk.norm1_bias);
      for (std::size_t c = 0; c < ch; ++c) {
        const auto mixed = mlp2(blk.token_w1, blk.token_b1, blk.token_w2, blk.token_b2, u.column(c));
        for (std::size_t t = 0; t < tk; ++t) s(t, c) += mixed[t];
      }
      const Matrix v = layer_norm_ref(s, blk.norm2_gain, blk.norm2_bias);
      for (std::size_t t = 0; t < tk; ++t) {
        const std::vector<double> row(v.row(t).begin(), v.row(t).end());
        const auto mixed = mlp2(blk.channel_w1, blk.channel_b1, blk.channel_w2, blk.channel_b2, row);
        for (std::size_t c = 0; c < ch; ++c) s(t, c) += mixed[c];
      }
    }
    const auto hw = net.head_weights();
    const auto hb = net.head_bias();
    for (std::size_t k = 0; k < od; ++k) {
      double z = hb[k];
      for (std::size_t c = 0; c < ch; ++c) {
        double mean = 0.0;
        for (std::size_t t = 0; t < tk; ++t) mean += s(t, c);
        z += hw[k * ch + c] * mean / double(tk);
      }
      out(b, k) = sig(z);
    }
  }
  return out;
}

void expect_close(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], tol) << i;
}

TEST(Mlp, ForwardMatchesTripleLoop) {
  std::mt19937_64 rng(71);
  Mlp net({7, {5, 6, 3}, 4});
  randomize(net, rng);
  const auto x = testing::random_matrix(rng, 9, 7);
  expect_close(net.forward(x), mlp_oracle(net, x), 1e-13);
  const auto one = net.forward_one(x.row(2));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(one[k], net.forward(x)(2, k));
}

TEST(Lstm, ForwardMatchesGateEquations) {
  std::mt19937_64 rng(73);
  for (auto act : {CellActivation::kTanh, CellActivation::kSoftsign}) {
    Lstm net({4, 3, 2, 5, 6, act});
    randomize(net, rng);
    const auto x = testing::random_matrix(rng, 6, net.input_dim());
    expect_close(net.forward(x), lstm_oracle(net, x), 1e-13);
  }
}

TEST(Lstm, StepApi) {
  std::mt19937_64 rng(79);
  Lstm net({1, 3, 0, 2, 1});
  randomize(net, rng);
  const std::vector<double> x = {0.3, -0.2, 0.9}, h = {0, 0}, c = {0, 0};
  const auto r = lstm_step(net.cell(), x, h, c);
  EXPECT_NEAR(r.y[0], net.forward_one(x)[0], 1e-15);
  EXPECT_THROW(lstm_step(net.cell(), std::vector<double>{1.0}, h, c), ShapeError);
}

TEST(Mixer, ForwardMatchesComposition) {
  std::mt19937_64 rng(83);
  Mixer net({2, 3, 4, 2, 5, 6, 3});
  net.initialize(5);
  // Perturb the norm parameters away from their identity initialization.
  randomize(net, rng, 0.8);
  const auto x = testing::random_matrix(rng, 5, net.input_dim());
  expect_close(net.forward(x), mixer_oracle(net, x), 1e-12);
}

TEST(Networks, ZeroWeightsGiveOneHalf) {
  std::vector<std::unique_ptr<Network>> nets;
  nets.push_back(std::make_unique<Mlp>(MlpConfig{6, {4, 3}, 2}));
  nets.push_back(std::make_unique<Lstm>(LstmConfig{3, 2, 0, 4, 2}));
  nets.push_back(std::make_unique<Mixer>(MixerConfig{2, 3, 2, 0, 4, 4, 2}));
  std::mt19937_64 rng(89);
  for (auto& net : nets) {
    for (double& p : net->parameters()) p = 0.0;
    const auto y = net->forward(testing::random_matrix(rng, 4, net->input_dim()));
    for (double v : y.data()) EXPECT_EQ(v, 0.5) << to_string(net->architecture());
  }
}

TEST(Networks, InitializationDeterministicAndBounded) {
  Mlp a({10, {8}, 2});
  Mlp b({10, {8}, 2});
  a.initialize(42);
  b.initialize(42);
  EXPECT_TRUE(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
  const double bound = 1.0 / std::sqrt(10.0);
  for (std::size_t i = 0; i < 88; ++i) EXPECT_LE(std::abs(a.parameters()[i]), bound);
  b.initialize(43);
  EXPECT_FALSE(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));

  Mixer m({2, 3, 4, 0, 5, 6, 3});
  m.initialize(1);
  for (double g : m.block(1).norm2_gain) EXPECT_EQ(g, 1.0);
  for (double g : m.block(0).norm1_bias) EXPECT_EQ(g, 0.0);
}

TEST(Networks, ShapeTableRebuild) {
  std::vector<std::unique_ptr<Network>> nets;
  nets.push_back(std::make_unique<Mlp>(MlpConfig{6, {4, 3}, 2}));
  nets.push_back(std::make_unique<Lstm>(LstmConfig{3, 2, 1, 4, 2, CellActivation::kSoftsign}));
  nets.push_back(std::make_unique<Mixer>(MixerConfig{2, 3, 2, 1, 4, 4, 2}));
  std::mt19937_64 rng(97);
  for (auto& net : nets) {
    net->initialize(rng());
    auto rebuilt = make_network(net->architecture(), net->shape_table());
    ASSERT_EQ(rebuilt->parameter_count(), net->parameter_count());
    std::copy(net->parameters().begin(), net->parameters().end(), rebuilt->parameters().begin());
    const auto x = testing::random_matrix(rng, 3, net->input_dim());
    EXPECT_EQ(rebuilt->forward(x), net->forward(x));
    EXPECT_EQ(net->clone()->forward(x), net->forward(x));
  }
  const std::vector<std::uint64_t> bad = {1, 2};
  EXPECT_THROW(make_network(Architecture::kMlp, bad), FormatError);
}

TEST(Networks, ShapeErrors) {
  Mlp net({4, {3}, 2});
  EXPECT_THROW(net.forward(Matrix(2, 5)), ShapeError);
  std::vector<double> g(net.parameter_count());
  EXPECT_THROW(net.loss_gradient(Matrix(2, 4), Matrix(2, 3), g), ShapeError);
  EXPECT_THROW(net.forward(Matrix(0, 4)), ShapeError);
}

TEST(Networks, LossIsMeanSquaredError) {
  std::mt19937_64 rng(101);
  Mlp net({5, {4}, 3});
  randomize(net, rng);
  const auto x = testing::random_matrix(rng, 7, 5);
  const auto y = testing::random_matrix(rng, 7, 3, 0.0, 1.0);
  std::vector<double> g(net.parameter_count());
  const double loss = net.loss_gradient(x, y, g);
  const auto pred = net.forward(x);
  double ss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) ss += std::pow(pred.data()[i] - y.data()[i], 2);
  EXPECT_NEAR(loss, ss / 21.0, 1e-15);
}

void expect_gradient_ok(Network& net, std::mt19937_64& rng, std::size_t batch) {
  const auto x = testing::random_matrix(rng, batch, net.input_dim());
  const auto y = testing::random_matrix(rng, batch, net.output_dim(), 0.0, 1.0);
  const auto r = testing::check_gradient(net, x, y);
  EXPECT_LT(r.worst_relative, 1e-4) << to_string(net.architecture());
  EXPECT_LT(r.worst_absolute_tiny, 1e-10) << to_string(net.architecture());
}

TEST(Gradients, Mlp) {
  std::mt19937_64 rng(103);
  Mlp net({6, {5, 4}, 3});
  randomize(net, rng, 1.0);
  expect_gradient_ok(net, rng, 5);
}

TEST(Gradients, Lstm) {
  std::mt19937_64 rng(107);
  for (auto act : {CellActivation::kTanh, CellActivation::kSoftsign}) {
    Lstm net({4, 3, 2, 3, 2, act});
    randomize(net, rng, 1.0);
    expect_gradient_ok(net, rng, 4);
  }
}

TEST(Gradients, Mixer) {
  std::mt19937_64 rng(109);
  Mixer net({2, 3, 3, 2, 4, 5, 2});
  randomize(net, rng, 0.9);
  expect_gradient_ok(net, rng, 3);
}

TEST(Adam, HandSteppedOracle) {
  AdamConfig cfg{0.1, 0.9, 0.999, 1e-8};
  AdamState st(2);
  std::vector<double> p = {1.0, -2.0};
  const std::vector<double> g1 = {0.5, -4.0}, g2 = {-1.0, 2.0};
  adam_step(st, p, g1, cfg);
  // First step: m_hat = g and v_hat = g^2, so each parameter moves by lr * sign(g).
  EXPECT_NEAR(p[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(p[1], -2.0 + 0.1 * 4.0 / (4.0 + 1e-8), 1e-15);
  adam_step(st, p, g2, cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    const double m = 0.9 * (0.1 * g1[i]) + 0.1 * g2[i];
    const double v = 0.999 * (0.001 * g1[i] * g1[i]) + 0.001 * g2[i] * g2[i];
    const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
    const double first = i == 0 ? 1.0 - 0.1 * 0.5 / (0.5 + 1e-8) : -2.0 + 0.1 * 4.0 / (4.0 + 1e-8);
    EXPECT_NEAR(p[i], first - 0.1 * mh / (std::sqrt(vh) + 1e-8), 1e-14);
  }
  EXPECT_EQ(st.step, 2u);
}

TEST(Adam, RejectsNonFiniteWithoutSideEffects) {
  AdamState st(2);
  std::vector<double> p = {1.0, 2.0};
  adam_step(st, p, std::vector<double>{0.1, 0.2}, AdamConfig{});
  const auto saved_p = p;
  const auto saved_m = st.m;
  const auto saved_v = st.v;
  EXPECT_THROW(adam_step(st, p, std::vector<double>{0.1, std::nan("")}, AdamConfig{}), NumericError);
  EXPECT_EQ(p, saved_p);
  EXPECT_EQ(st.m, saved_m);
  EXPECT_EQ(st.v, saved_v);
  EXPECT_EQ(st.step, 1u);
  EXPECT_THROW(adam_step(st, p, std::vector<double>{0.1}, AdamConfig{}), ShapeError);
  EXPECT_THROW(validate(AdamConfig{0.0}), ParameterError);
  EXPECT_THROW(validate(AdamConfig{1e-3, 1.0}), ParameterError);
  EXPECT_THROW(validate(AdamConfig{1e-3, 0.9, 0.999, 0.0}), ParameterError);
}

TEST(EarlyStopping, EpochUnit) {
  EarlyStopping es(3);
  EXPECT_TRUE(es.observe(1, 1.0));
  EXPECT_TRUE(es.observe(2, 0.5));
  EXPECT_FALSE(es.observe(3, 0.5));
  EXPECT_FALSE(es.observe(4, 0.7));
  EXPECT_FALSE(es.should_stop());
  EXPECT_FALSE(es.observe(5, 0.6));
  EXPECT_TRUE(es.should_stop());
  EXPECT_EQ(es.best_epoch(), 2u);
  EXPECT_EQ(es.best_loss(), 0.5);
}

TEST(EarlyStopping, StepUnit) {
  EarlyStopping es(10, PatienceUnit::kSteps);
  es.observe(1, 1.0, 4);
  es.observe(2, 1.1, 4);
  es.observe(3, 1.2, 4);
  EXPECT_FALSE(es.should_stop());
  es.observe(4, 1.3, 4);
  EXPECT_TRUE(es.should_stop());
  EXPECT_THROW(EarlyStopping(0), ParameterError);
  EXPECT_EQ(parse_patience_unit("steps"), PatienceUnit::kSteps);
  EXPECT_THROW(parse_patience_unit("hours"), ParameterError);
}

struct Toy {
  Matrix xtr, ytr, xval, yval;
};

Toy identity_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Toy t;
  t.xtr = testing::random_matrix(rng, 200, 1, 0.1, 0.9);
  t.xval = testing::random_matrix(rng, 50, 1, 0.1, 0.9);
  t.ytr = t.xtr;
  t.yval = t.xval;
  return t;
}

TEST(Training, LearnsIdentity) {
  const auto toy = identity_problem(1);
  Mlp net({1, {8}, 1});
  net.initialize(3);
  TrainConfig cfg;
  cfg.adam.learning_rate = 0.01;
  cfg.max_epochs = 300;
  cfg.batch_size = 16;
  cfg.seed = 9;
  const auto h = train_network(net, toy.xtr, toy.ytr, toy.xval, toy.yval, cfg);
  EXPECT_LT(h.best_val_loss, 1e-3);
  EXPECT_EQ(h.val_loss[h.best_epoch - 1], h.best_val_loss);
  // The restored parameters are those of the best epoch.
  EXPECT_EQ(mean_squared_error(net.forward(toy.xval), toy.yval), h.best_val_loss);
  EXPECT_EQ(h.steps, h.epochs() * 13);
}

TEST(Training, DeterministicForSeed) {
  const auto toy = identity_problem(2);
  TrainConfig cfg;
  cfg.max_epochs = 20;
  cfg.batch_size = 32;
  cfg.seed = 5;
  Mlp a({1, {6}, 1}), b({1, {6}, 1});
  a.initialize(1);
  b.initialize(1);
  const auto ha = train_network(a, toy.xtr, toy.ytr, toy.xval, toy.yval, cfg);
  const auto hb = train_network(b, toy.xtr, toy.ytr, toy.xval, toy.yval, cfg);
  EXPECT_EQ(ha.val_loss, hb.val_loss);
  EXPECT_TRUE(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
  cfg.seed = 6;
  Mlp c({1, {6}, 1});
  c.initialize(1);
  const auto hc = train_network(c, toy.xtr, toy.ytr, toy.xval, toy.yval, cfg);
  EXPECT_NE(ha.train_loss, hc.train_loss);
}

TEST(Training, StopsEarlyAndRestoresBest) {
  const auto toy = identity_problem(3);
  // Validation targets inverted, so validation loss worsens as training improves.
  Matrix yval = toy.yval;
  for (double& v : yval.data()) v = 1.0 - v;
  Mlp net({1, {4}, 1});
  net.initialize(2);
  TrainConfig cfg;
  cfg.adam.learning_rate = 0.02;
  cfg.patience = 5;
  cfg.seed = 1;
  const auto h = train_network(net, toy.xtr, toy.ytr, toy.xval, yval, cfg);
  EXPECT_TRUE(h.stopped_early);
  EXPECT_EQ(h.epochs(), h.best_epoch + 5);
  EXPECT_EQ(mean_squared_error(net.forward(toy.xval), yval), h.best_val_loss);
}

TEST(Training, Errors) {
  auto toy = identity_problem(4);
  Mlp net({1, {4}, 1});
  net.initialize(2);
  TrainConfig cfg;
  cfg.max_epochs = 3;
  toy.xtr(5, 0) = std::nan("");
  try {
    train_network(net, toy.xtr, toy.ytr, toy.xval, toy.yval, cfg);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_EQ(e.epoch(), 1u);
  }
  cfg.batch_size = 0;
  EXPECT_THROW(train_network(net, toy.xval, toy.yval, toy.xval, toy.yval, cfg), ParameterError);
  cfg.batch_size = 4;
  EXPECT_THROW(train_network(net, Matrix(0, 1), Matrix(0, 1), toy.xval, toy.yval, cfg),
               EmptyDataError);
}

}  // namespace
}  // namespace tempocast::nn

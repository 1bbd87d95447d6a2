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

#include "tempocast/nn/mixer.hpp"

#include <algorithm>
#include <cmath>

namespace tempocast::nn {
namespace {

// Offsets of each parameter group inside one block.
struct BlockLayout {
  std::size_t n1g, n1b, tw1, tb1, tw2, tb2, n2g, n2b, cw1, cb1, cw2, cb2, size;

  explicit BlockLayout(const MixerConfig& c) {
    const std::size_t ch = c.channels(), tk = c.tokens, th = c.token_hidden, chh = c.channel_hidden;
    std::size_t at = 0;
    const auto take = [&](std::size_t n) {
      const std::size_t o = at;
      at += n;
      return o;
    };
    n1g = take(ch);
    n1b = take(ch);
    tw1 = take(th * tk);
    tb1 = take(th);
    tw2 = take(tk * th);
    tb2 = take(tk);
    n2g = take(ch);
    n2b = take(ch);
    cw1 = take(chh * ch);
    cb1 = take(chh);
    cw2 = take(ch * chh);
    cb2 = take(ch);
    size = at;
  }
};

Matrix view_matrix(const double* p, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, std::vector<double>(p, p + rows * cols));
}

struct BlockWeights {
  Matrix tw1, tw2, cw1, cw2;
};

struct NormCache {
  Matrix xhat;
  std::vector<double> rstd;
};

// Row-wise layer normalization with gain and bias.
Matrix layer_norm(const Matrix& x, const double* gain, const double* bias, NormCache& cache) {
  const std::size_t rows = x.rows(), cols = x.cols();
  Matrix y(rows, cols);
  cache.xhat = Matrix(rows, cols);
  cache.rstd.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += x(r, c);
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= static_cast<double>(cols);
    const double rstd = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    cache.rstd[r] = rstd;
    for (std::size_t c = 0; c < cols; ++c) {
      const double xh = (x(r, c) - mean) * rstd;
      cache.xhat(r, c) = xh;
      y(r, c) = gain[c] * xh + bias[c];
    }
  }
  return y;
}

// Returns d/dx; accumulates gain and bias gradients.
Matrix layer_norm_backward(const Matrix& dy, const double* gain, const NormCache& cache,
                           double* d_gain, double* d_bias) {
  const std::size_t rows = dy.rows(), cols = dy.cols();
  Matrix dx(rows, cols);
  std::vector<double> dxhat(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean_d = 0.0, mean_dx = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      d_gain[c] += dy(r, c) * cache.xhat(r, c);
      d_bias[c] += dy(r, c);
      dxhat[c] = dy(r, c) * gain[c];
      mean_d += dxhat[c];
      mean_dx += dxhat[c] * cache.xhat(r, c);
    }
    mean_d /= static_cast<double>(cols);
    mean_dx /= static_cast<double>(cols);
    for (std::size_t c = 0; c < cols; ++c)
      dx(r, c) = cache.rstd[r] * (dxhat[c] - mean_d - cache.xhat(r, c) * mean_dx);
  }
  return dx;
}

Matrix gelu_of(const Matrix& z) {
  Matrix a(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) a.data()[i] = gelu(z.data()[i]);
  return a;
}

struct BlockCache {
  NormCache norm1, norm2;
  Matrix u, h1, a1, v, h2, a2;
};

}  // namespace

Mixer::Mixer(MixerConfig config) : config_(config) {
  if (config_.blocks == 0 || config_.tokens == 0 || config_.channels() == 0 ||
      config_.token_hidden == 0 || config_.channel_hidden == 0 || config_.output_dim == 0)
    throw ParameterError("mixer: all dimensions must be positive");
  params_.assign(head_offset() + config_.output_dim * config_.channels() + config_.output_dim,
                 0.0);
  // Identity normalization until initialize() runs.
  const BlockLayout lay(config_);
  for (std::size_t b = 0; b < config_.blocks; ++b) {
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(block_offset(b) + lay.n1g),
                config_.channels(), 1.0);
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(block_offset(b) + lay.n2g),
                config_.channels(), 1.0);
  }
}

std::size_t Mixer::block_size() const noexcept { return BlockLayout(config_).size; }

std::vector<std::uint64_t> Mixer::shape_table() const {
  return {config_.blocks,       config_.tokens,         config_.step_features,
          config_.static_features, config_.token_hidden, config_.channel_hidden,
          config_.output_dim};
}

MixerConfig Mixer::config_from_shape(std::span<const std::uint64_t> s) {
  if (s.size() != 7) throw FormatError("mixer: malformed shape table");
  MixerConfig c;
  c.blocks = s[0];
  c.tokens = s[1];
  c.step_features = s[2];
  c.static_features = s[3];
  c.token_hidden = s[4];
  c.channel_hidden = s[5];
  c.output_dim = s[6];
  return c;
}

MixerBlock Mixer::block(std::size_t i) const {
  if (i >= config_.blocks) throw ParameterError("mixer: block index out of range");
  const BlockLayout lay(config_);
  const std::span<const double> p = std::span<const double>(params_).subspan(block_offset(i), lay.size);
  const std::size_t ch = config_.channels(), tk = config_.tokens, th = config_.token_hidden,
                    chh = config_.channel_hidden;
  MixerBlock b;
  b.norm1_gain = p.subspan(lay.n1g, ch);
  b.norm1_bias = p.subspan(lay.n1b, ch);
  b.token_w1 = p.subspan(lay.tw1, th * tk);
  b.token_b1 = p.subspan(lay.tb1, th);
  b.token_w2 = p.subspan(lay.tw2, tk * th);
  b.token_b2 = p.subspan(lay.tb2, tk);
  b.norm2_gain = p.subspan(lay.n2g, ch);
  b.norm2_bias = p.subspan(lay.n2b, ch);
  b.channel_w1 = p.subspan(lay.cw1, chh * ch);
  b.channel_b1 = p.subspan(lay.cb1, chh);
  b.channel_w2 = p.subspan(lay.cw2, ch * chh);
  b.channel_b2 = p.subspan(lay.cb2, ch);
  return b;
}

std::span<const double> Mixer::head_weights() const {
  return std::span<const double>(params_).subspan(head_offset(), config_.output_dim * config_.channels());
}

std::span<const double> Mixer::head_bias() const {
  return std::span<const double>(params_).subspan(
      head_offset() + config_.output_dim * config_.channels(), config_.output_dim);
}

Matrix Mixer::tokens_of(std::span<const double> row) const {
  const std::size_t sf = config_.step_features, ch = config_.channels();
  Matrix x(config_.tokens, ch);
  for (std::size_t t = 0; t < config_.tokens; ++t) {
    for (std::size_t c = 0; c < sf; ++c) x(t, c) = row[t * sf + c];
    for (std::size_t c = 0; c < config_.static_features; ++c)
      x(t, sf + c) = row[config_.tokens * sf + c];
  }
  return x;
}

void Mixer::initialize_impl(std::mt19937_64& rng) {
  const BlockLayout lay(config_);
  const std::size_t ch = config_.channels(), tk = config_.tokens, th = config_.token_hidden,
                    chh = config_.channel_hidden;
  std::span<double> p = params_;
  for (std::size_t b = 0; b < config_.blocks; ++b) {
    auto blk = p.subspan(block_offset(b), lay.size);
    std::fill_n(blk.begin() + static_cast<std::ptrdiff_t>(lay.n1g), ch, 1.0);
    std::fill_n(blk.begin() + static_cast<std::ptrdiff_t>(lay.n1b), ch, 0.0);
    fill_uniform(blk.subspan(lay.tw1, th * tk + th), tk, rng);
    fill_uniform(blk.subspan(lay.tw2, tk * th + tk), th, rng);
    std::fill_n(blk.begin() + static_cast<std::ptrdiff_t>(lay.n2g), ch, 1.0);
    std::fill_n(blk.begin() + static_cast<std::ptrdiff_t>(lay.n2b), ch, 0.0);
    fill_uniform(blk.subspan(lay.cw1, chh * ch + chh), ch, rng);
    fill_uniform(blk.subspan(lay.cw2, ch * chh + ch), chh, rng);
  }
  fill_uniform(p.subspan(head_offset()), ch, rng);
}

namespace {

// Runs all blocks on one token matrix, optionally recording caches.
Matrix run_blocks(const Mixer& net, const std::vector<BlockWeights>& weights, Matrix x,
                  std::vector<BlockCache>* caches) {
  const MixerConfig& cfg = net.config();
  const std::size_t tk = cfg.tokens, ch = cfg.channels(), th = cfg.token_hidden,
                    chh = cfg.channel_hidden;
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    const MixerBlock blk = net.block(b);
    BlockCache local;
    BlockCache& bc = caches ? (*caches)[b] : local;

    bc.u = layer_norm(x, blk.norm1_gain.data(), blk.norm1_bias.data(), bc.norm1);
    bc.h1 = Matrix(th, ch);
    for (std::size_t h = 0; h < th; ++h)
      for (std::size_t c = 0; c < ch; ++c) bc.h1(h, c) = blk.token_b1[h];
    matmul_acc(weights[b].tw1, bc.u, bc.h1);
    bc.a1 = gelu_of(bc.h1);
    Matrix o1(tk, ch);
    for (std::size_t t = 0; t < tk; ++t)
      for (std::size_t c = 0; c < ch; ++c) o1(t, c) = blk.token_b2[t];
    matmul_acc(weights[b].tw2, bc.a1, o1);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += o1.data()[i];

    bc.v = layer_norm(x, blk.norm2_gain.data(), blk.norm2_bias.data(), bc.norm2);
    bc.h2 = Matrix(tk, chh);
    for (std::size_t t = 0; t < tk; ++t)
      std::copy(blk.channel_b1.begin(), blk.channel_b1.end(), bc.h2.row(t).begin());
    matmul_bt_acc(bc.v, weights[b].cw1, bc.h2);
    bc.a2 = gelu_of(bc.h2);
    Matrix o2(tk, ch);
    for (std::size_t t = 0; t < tk; ++t)
      std::copy(blk.channel_b2.begin(), blk.channel_b2.end(), o2.row(t).begin());
    matmul_bt_acc(bc.a2, weights[b].cw2, o2);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += o2.data()[i];
  }
  return x;
}

std::vector<BlockWeights> block_weights(const Mixer& net) {
  const MixerConfig& cfg = net.config();
  std::vector<BlockWeights> w(cfg.blocks);
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    const MixerBlock blk = net.block(b);
    w[b].tw1 = view_matrix(blk.token_w1.data(), cfg.token_hidden, cfg.tokens);
    w[b].tw2 = view_matrix(blk.token_w2.data(), cfg.tokens, cfg.token_hidden);
    w[b].cw1 = view_matrix(blk.channel_w1.data(), cfg.channel_hidden, cfg.channels());
    w[b].cw2 = view_matrix(blk.channel_w2.data(), cfg.channels(), cfg.channel_hidden);
  }
  return w;
}

}  // namespace

Matrix Mixer::forward(const Matrix& inputs) const {
  check_batch(inputs, nullptr);
  const auto weights = block_weights(*this);
  const std::size_t ch = config_.channels(), od = config_.output_dim;
  const auto hw = head_weights();
  const auto hb = head_bias();
  Matrix out(inputs.rows(), od);
  std::vector<double> pooled(ch);
  for (std::size_t b = 0; b < inputs.rows(); ++b) {
    const Matrix x = run_blocks(*this, weights, tokens_of(inputs.row(b)), nullptr);
    std::fill(pooled.begin(), pooled.end(), 0.0);
    for (std::size_t t = 0; t < config_.tokens; ++t)
      for (std::size_t c = 0; c < ch; ++c) pooled[c] += x(t, c);
    for (auto& v : pooled) v /= static_cast<double>(config_.tokens);
    for (std::size_t k = 0; k < od; ++k) {
      double z = hb[k];
      for (std::size_t c = 0; c < ch; ++c) z += hw[k * ch + c] * pooled[c];
      out(b, k) = sigmoid(z);
    }
  }
  return out;
}

double Mixer::loss_gradient(const Matrix& inputs, const Matrix& targets,
                            std::span<double> grad) const {
  check_batch(inputs, &targets);
  if (grad.size() != params_.size()) throw ShapeError("mixer: gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);

  const BlockLayout lay(config_);
  const std::size_t tk = config_.tokens, ch = config_.channels(), th = config_.token_hidden,
                    chh = config_.channel_hidden, od = config_.output_dim;
  const std::size_t batch = inputs.rows();
  const double scale = 2.0 / static_cast<double>(batch * od);
  const auto weights = block_weights(*this);
  const auto hw = head_weights();
  const auto hb = head_bias();

  struct BlockGrads {
    Matrix tw1, tw2, cw1, cw2;
  };
  std::vector<BlockGrads> wgrads(config_.blocks);
  for (auto& g : wgrads) {
    g.tw1 = Matrix(th, tk);
    g.tw2 = Matrix(tk, th);
    g.cw1 = Matrix(chh, ch);
    g.cw2 = Matrix(ch, chh);
  }

  std::vector<BlockCache> caches(config_.blocks);
  std::vector<double> pooled(ch), dpooled(ch), dy(od);
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const Matrix x = run_blocks(*this, weights, tokens_of(inputs.row(b)), &caches);
    std::fill(pooled.begin(), pooled.end(), 0.0);
    for (std::size_t t = 0; t < tk; ++t)
      for (std::size_t c = 0; c < ch; ++c) pooled[c] += x(t, c);
    for (auto& v : pooled) v /= static_cast<double>(tk);

    std::fill(dpooled.begin(), dpooled.end(), 0.0);
    double* g_hw = grad.data() + head_offset();
    double* g_hb = g_hw + od * ch;
    for (std::size_t k = 0; k < od; ++k) {
      double z = hb[k];
      for (std::size_t c = 0; c < ch; ++c) z += hw[k * ch + c] * pooled[c];
      const double y = sigmoid(z);
      const double r = y - targets(b, k);
      loss += r * r;
      dy[k] = scale * r * y * (1.0 - y);
      g_hb[k] += dy[k];
      for (std::size_t c = 0; c < ch; ++c) {
        g_hw[k * ch + c] += dy[k] * pooled[c];
        dpooled[c] += hw[k * ch + c] * dy[k];
      }
    }

    Matrix dx(tk, ch);
    for (std::size_t t = 0; t < tk; ++t)
      for (std::size_t c = 0; c < ch; ++c) dx(t, c) = dpooled[c] / static_cast<double>(tk);

    for (std::size_t blk_i = config_.blocks; blk_i-- > 0;) {
      const MixerBlock blk = block(blk_i);
      const BlockCache& bc = caches[blk_i];
      const BlockWeights& w = weights[blk_i];
      BlockGrads& g = wgrads[blk_i];
      double* gp = grad.data() + block_offset(blk_i);

      // Channel MLP: dx is both the residual gradient and d(o2).
      matmul_at_acc(dx, bc.a2, g.cw2);
      for (std::size_t t = 0; t < tk; ++t)
        for (std::size_t c = 0; c < ch; ++c) gp[lay.cb2 + c] += dx(t, c);
      Matrix dh2 = matmul(dx, w.cw2);
      for (std::size_t i = 0; i < dh2.size(); ++i)
        dh2.data()[i] *= gelu_derivative(bc.h2.data()[i]);
      matmul_at_acc(dh2, bc.v, g.cw1);
      for (std::size_t t = 0; t < tk; ++t)
        for (std::size_t h = 0; h < chh; ++h) gp[lay.cb1 + h] += dh2(t, h);
      const Matrix dv = matmul(dh2, w.cw1);
      const Matrix dn2 = layer_norm_backward(dv, blk.norm2_gain.data(), bc.norm2,
                                             gp + lay.n2g, gp + lay.n2b);
      for (std::size_t i = 0; i < dx.size(); ++i) dx.data()[i] += dn2.data()[i];

      // Token MLP: dx is both the residual gradient and d(o1).
      matmul_bt_acc(dx, bc.a1, g.tw2);
      for (std::size_t t = 0; t < tk; ++t)
        for (std::size_t c = 0; c < ch; ++c) gp[lay.tb2 + t] += dx(t, c);
      Matrix dh1 = matmul_at(w.tw2, dx);
      for (std::size_t i = 0; i < dh1.size(); ++i)
        dh1.data()[i] *= gelu_derivative(bc.h1.data()[i]);
      matmul_bt_acc(dh1, bc.u, g.tw1);
      for (std::size_t h = 0; h < th; ++h)
        for (std::size_t c = 0; c < ch; ++c) gp[lay.tb1 + h] += dh1(h, c);
      const Matrix du = matmul_at(w.tw1, dh1);
      const Matrix dn1 = layer_norm_backward(du, blk.norm1_gain.data(), bc.norm1,
                                             gp + lay.n1g, gp + lay.n1b);
      for (std::size_t i = 0; i < dx.size(); ++i) dx.data()[i] += dn1.data()[i];
    }
  }

  for (std::size_t b = 0; b < config_.blocks; ++b) {
    double* gp = grad.data() + block_offset(b);
    const auto add = [&](std::size_t off, const Matrix& m) {
      for (std::size_t i = 0; i < m.size(); ++i) gp[off + i] += m.data()[i];
    };
    add(lay.tw1, wgrads[b].tw1);
    add(lay.tw2, wgrads[b].tw2);
    add(lay.cw1, wgrads[b].cw1);
    add(lay.cw2, wgrads[b].cw2);
  }
  return loss / static_cast<double>(batch * od);
}

}  // namespace tempocast::nn

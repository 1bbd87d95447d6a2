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

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tempocast/error.hpp"
#include "tempocast/model.hpp"

namespace tempocast {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

constexpr char kMagic[4] = {'T', 'P', 'C', 'M'};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void u8(std::uint8_t v) { put(v); }
  void u16(std::uint16_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(v); }
  void str(std::string_view s) {
    if (s.size() > 0xffff) throw FormatError("string too long for model file");
    u16(static_cast<std::uint16_t>(s.size()));
    out_.append(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::uint8_t u8() { return get<std::uint8_t>(); }
  std::uint16_t u16() { return get<std::uint16_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return get<double>(); }
  std::string str() {
    const std::size_t n = u16();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // Element count that must fit in the remaining bytes.
  std::size_t count(std::size_t element_size) {
    const std::uint64_t n = u64();
    if (n > (in_.size() - pos_) / element_size) throw FormatError("model file truncated");
    return static_cast<std::size_t>(n);
  }
  bool done() const noexcept { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("model file truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_normalizer(Writer& w, const Normalizer& n) {
  w.u8(static_cast<std::uint8_t>(n.kind));
  w.u64(n.columns());
  for (double v : n.lo) w.f64(v);
  for (double v : n.hi) w.f64(v);
  for (std::uint8_t f : n.flagged) w.u8(f);
}

Normalizer read_normalizer(Reader& r) {
  Normalizer n;
  const std::uint8_t kind = r.u8();
  if (kind > 1) throw FormatError("unknown normalizer kind");
  n.kind = static_cast<NormalizerKind>(kind);
  const std::size_t cols = r.count(17);
  n.lo.resize(cols);
  n.hi.resize(cols);
  n.flagged.resize(cols);
  for (auto& v : n.lo) v = r.f64();
  for (auto& v : n.hi) v = r.f64();
  for (auto& f : n.flagged) f = r.u8();
  return n;
}

}  // namespace

std::string save_model(const TrainedModel& m) {
  Writer w;
  for (char c : kMagic) w.put(c);
  w.u16(TrainedModel::kFormatVersion);
  w.str(m.variant);
  w.u64(m.lookback);
  w.u64(m.retro);
  w.u64(m.horizons);
  write_normalizer(w, m.scalers.minmax);
  write_normalizer(w, m.scalers.zscore);

  const nn::TrainConfig& t = m.train_config;
  w.f64(t.adam.learning_rate);
  w.f64(t.adam.beta1);
  w.f64(t.adam.beta2);
  w.f64(t.adam.epsilon);
  w.u64(t.max_epochs);
  w.u64(t.patience);
  w.u8(static_cast<std::uint8_t>(t.patience_unit));
  w.u64(t.batch_size);
  w.u64(t.seed);

  w.u64(m.branches.size());
  for (const TrainedBranch& b : m.branches) {
    w.u8(static_cast<std::uint8_t>((b.features.spectral ? 1 : 0) | (b.features.rank_pool ? 2 : 0)));
    w.u8(static_cast<std::uint8_t>(b.network->architecture()));
    const auto shape = b.network->shape_table();
    w.u64(shape.size());
    for (std::uint64_t s : shape) w.u64(s);
    w.u64(b.best_epoch);
    const auto params = b.network->parameters();
    w.u64(params.size());
    for (double p : params) w.f64(p);
  }

  w.u8(m.fusion ? 1 : 0);
  if (m.fusion) {
    w.u64(m.fusion->horizons.size());
    for (const FusionTerm& f : m.fusion->horizons) {
      w.f64(f.w_fft);
      w.f64(f.w_rp);
      w.f64(f.intercept);
    }
  }
  return w.take();
}

TrainedModel load_model(std::string_view bytes) {
  if (bytes.size() < 6 || bytes.substr(0, 4) != std::string_view(kMagic, 4))
    throw FormatError("not a tempocast model file (bad magic)");
  Reader r(bytes.substr(4));
  const std::uint16_t version = r.u16();
  if (version != TrainedModel::kFormatVersion)
    throw VersionError(version, TrainedModel::kFormatVersion);

  TrainedModel m;
  m.variant = r.str();
  m.lookback = r.u64();
  m.retro = r.u64();
  m.horizons = r.u64();
  m.scalers.minmax = read_normalizer(r);
  m.scalers.zscore = read_normalizer(r);

  nn::TrainConfig& t = m.train_config;
  t.adam.learning_rate = r.f64();
  t.adam.beta1 = r.f64();
  t.adam.beta2 = r.f64();
  t.adam.epsilon = r.f64();
  t.max_epochs = r.u64();
  t.patience = r.u64();
  const std::uint8_t unit = r.u8();
  if (unit > 1) throw FormatError("unknown patience unit");
  t.patience_unit = static_cast<nn::PatienceUnit>(unit);
  t.batch_size = r.u64();
  t.seed = r.u64();

  const std::size_t branches = r.count(1);
  for (std::size_t i = 0; i < branches; ++i) {
    TrainedBranch b;
    const std::uint8_t feats = r.u8();
    if (feats > 3) throw FormatError("unknown feature set code");
    b.features = FeatureSet{(feats & 1) != 0, (feats & 2) != 0};
    const std::uint8_t arch = r.u8();
    if (arch > 2) throw FormatError("unknown architecture code");
    std::vector<std::uint64_t> shape(r.count(8));
    for (auto& s : shape) s = r.u64();
    b.best_epoch = r.u64();
    auto net = nn::make_network(static_cast<nn::Architecture>(arch), shape);
    const std::size_t n = r.count(8);
    if (n != net->parameter_count())
      throw FormatError("parameter count " + std::to_string(n) + " does not match shape table (" +
                        std::to_string(net->parameter_count()) + ")");
    for (double& p : net->parameters()) p = r.f64();
    b.network = std::move(net);
    m.branches.push_back(std::move(b));
  }

  const std::uint8_t has_fusion = r.u8();
  if (has_fusion > 1) throw FormatError("bad fusion flag");
  if (has_fusion) {
    FusionWeights f;
    f.horizons.resize(r.count(24));
    for (auto& h : f.horizons) {
      h.w_fft = r.f64();
      h.w_rp = r.f64();
      h.intercept = r.f64();
    }
    m.fusion = std::move(f);
  }
  if (!r.done()) throw FormatError("trailing bytes after model");
  if (m.branches.empty()) throw FormatError("model has no branches");
  return m;
}

void save_model_file(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  const std::string bytes = save_model(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

TrainedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

}  // namespace tempocast

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

#include "tempocast/model.hpp"

#include <algorithm>
#include <string>

#include "tempocast/error.hpp"
#include "tempocast/nn/mixer.hpp"
#include "tempocast/nn/mlp.hpp"

namespace tempocast {
namespace {

constexpr std::size_t kTarget = index_of(Channel::kWs10mi);

void check_layout(const TrainedModel& model, const WindowedDataset& ds) {
  if (ds.lookback != model.lookback || ds.retro != model.retro || ds.horizons != model.horizons)
    throw ShapeError("model " + model.variant + " expects lookback " +
                     std::to_string(model.lookback) + ", retro " + std::to_string(model.retro) +
                     ", " + std::to_string(model.horizons) + " horizons; dataset has " +
                     std::to_string(ds.lookback) + ", " + std::to_string(ds.retro) + ", " +
                     std::to_string(ds.horizons));
  if (ds.empty()) throw EmptyDataError("prediction dataset is empty");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::unique_ptr<nn::Network> make_branch_network(nn::Architecture arch, FeatureSet features,
                                                 std::size_t lookback, std::size_t horizons,
                                                 const ModelHyper& hyper) {
  switch (arch) {
    case nn::Architecture::kMlp: {
      nn::MlpConfig c;
      c.input_dim = features.dimension(lookback);
      c.hidden = hyper.mlp_hidden;
      c.output_dim = horizons;
      return std::make_unique<nn::Mlp>(c);
    }
    case nn::Architecture::kLstm: {
      nn::LstmConfig c;
      c.lookback = lookback;
      c.step_features = kNumChannels;
      c.static_features = features.extra_dim();
      c.units = hyper.lstm_units;
      c.output_dim = horizons;
      c.cell_activation = hyper.lstm_cell_activation;
      return std::make_unique<nn::Lstm>(c);
    }
    case nn::Architecture::kMixer: {
      nn::MixerConfig c;
      c.blocks = hyper.mixer_blocks;
      c.tokens = lookback;
      c.step_features = kNumChannels;
      c.static_features = features.extra_dim();
      c.token_hidden = hyper.mixer_token_hidden;
      c.channel_hidden = hyper.mixer_channel_hidden;
      c.output_dim = horizons;
      return std::make_unique<nn::Mixer>(c);
    }
  }
  throw ParameterError("unknown architecture");
}

Matrix targets_of(const WindowedDataset& ds) {
  Matrix out(ds.size(), ds.horizons);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& t = ds.samples[i].target;
    std::copy(t.begin(), t.end(), out.row(i).begin());
  }
  return out;
}

Matrix scale_targets(const FeatureScalers& scalers, const WindowedDataset& ds) {
  Matrix out = targets_of(ds);
  for (double& v : out.data()) v = scalers.minmax.apply_value(kTarget, v);
  return out;
}

TrainedModel train_model(const Variant& variant, const DatasetSplit& split,
                         const ModelHyper& hyper, const nn::TrainConfig& config) {
  if (variant.fused)
    throw ParameterError(variant.name() + " is trained from its branches; use fuse_models");
  const WindowedDataset& train = split.train;
  TrainedModel model;
  model.variant = variant.name();
  model.lookback = train.lookback;
  model.retro = train.retro;
  model.horizons = train.horizons;
  model.train_config = config;
  model.scalers = fit_feature_scalers(train);

  const Matrix x_train = assemble_matrix(train, variant.features, model.scalers);
  const Matrix x_val = assemble_matrix(split.val, variant.features, model.scalers);
  const Matrix y_train = scale_targets(model.scalers, train);
  const Matrix y_val = scale_targets(model.scalers, split.val);

  auto net = make_branch_network(variant.architecture, variant.features, train.lookback,
                                 train.horizons, hyper);
  net->initialize(config.seed);
  const nn::TrainHistory history = nn::train_network(*net, x_train, y_train, x_val, y_val, config);
  model.branches.push_back(TrainedBranch{variant.features, std::move(net), history.best_epoch});
  return model;
}

Matrix predict_branch(const TrainedModel& model, std::size_t branch, const WindowedDataset& ds) {
  check_layout(model, ds);
  if (branch >= model.branches.size()) throw ParameterError("branch index out of range");
  const TrainedBranch& b = model.branches[branch];
  Matrix out = b.network->forward(assemble_matrix(ds, b.features, model.scalers));
  for (double& v : out.data()) v = std::max(0.0, model.scalers.minmax.invert_value(kTarget, v));
  return out;
}

Matrix predict(const TrainedModel& model, const WindowedDataset& ds) {
  if (model.branches.empty()) throw FormatError("model " + model.variant + " has no branches");
  if (!model.fusion) return predict_branch(model, 0, ds);
  if (model.branches.size() != 2) throw FormatError("fused model needs exactly two branches");
  return fuse(*model.fusion, predict_branch(model, 0, ds), predict_branch(model, 1, ds));
}

TrainedModel fuse_models(const Variant& variant, const TrainedModel& fft_model,
                         const TrainedModel& rp_model, const WindowedDataset& fit) {
  if (!variant.fused) throw ParameterError(variant.name() + " is not a fused variant");
  if (fft_model.branches.size() != 1 || rp_model.branches.size() != 1 ||
      fft_model.branches[0].features != variant.fft_branch().features ||
      rp_model.branches[0].features != variant.rp_branch().features)
    throw ParameterError(variant.name() + ": branch models do not match FFT and RP variants");
  if (!(fft_model.scalers == rp_model.scalers))
    throw ParameterError(variant.name() + ": branches were fitted on different training data");
  TrainedModel model;
  model.variant = variant.name();
  model.lookback = fft_model.lookback;
  model.retro = fft_model.retro;
  model.horizons = fft_model.horizons;
  model.scalers = fft_model.scalers;
  model.train_config = fft_model.train_config;
  model.branches = {fft_model.branches[0], rp_model.branches[0]};
  model.fusion = fit_fusion(predict_branch(fft_model, 0, fit), predict_branch(rp_model, 0, fit),
                            targets_of(fit));
  return model;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view variant,
                          std::size_t lookback) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : variant) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(global_seed) ^ h ^ splitmix64(lookback));
}

}  // namespace tempocast

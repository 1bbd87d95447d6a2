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

#include "tempocast/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "tempocast/error.hpp"
#include "tempocast/log.hpp"
#include "tempocast/nn/ops.hpp"
#include "tempocast/text.hpp"
#include "tempocast/variant.hpp"

namespace tempocast {
namespace {

struct KeyHandler {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ParameterError("config key '" + std::string(key) + "': '" + std::string(value) +
                       "' is not " + expected);
}

double to_double(std::string_view key, std::string_view v) {
  const auto d = text::parse_double(v);
  if (!d) bad_value(key, v, "a number");
  return *d;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  const auto i = text::parse_int<Int>(v);
  if (!i) bad_value(key, v, "a non-negative integer");
  return *i;
}

std::vector<std::size_t> to_size_list(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  if (text::trim(v).empty()) return out;
  for (auto part : text::split(v, ',')) out.push_back(to_int<std::size_t>(key, part));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, std::string>)
      out += items[i];
    else
      out += std::to_string(items[i]);
  }
  return out;
}

#define TC_DOUBLE(field)                                                            \
  KeyHandler {                                                                      \
    [](const ExperimentConfig& c) { return text::format_double(c.field); },        \
        [](ExperimentConfig& c, std::string_view v) { c.field = to_double(#field, v); } \
  }
#define TC_SIZE(field)                                                                   \
  KeyHandler {                                                                           \
    [](const ExperimentConfig& c) { return std::to_string(c.field); },                  \
        [](ExperimentConfig& c, std::string_view v) {                                    \
          c.field = to_int<std::decay_t<decltype(c.field)>>(#field, v);                  \
        }                                                                                \
  }

const std::vector<std::pair<std::string, KeyHandler>>& handlers() {
  static const std::vector<std::pair<std::string, KeyHandler>> table = {
      {"data",
       {[](const ExperimentConfig& c) { return c.data_path; },
        [](ExperimentConfig& c, std::string_view v) { c.data_path = std::string(text::trim(v)); }}},
      {"gap_policy",
       {[](const ExperimentConfig& c) {
          return std::string(c.gap_policy == GapPolicy::kReject ? "reject" : "ffill");
        },
        [](ExperimentConfig& c, std::string_view v) {
          v = text::trim(v);
          if (v == "ffill")
            c.gap_policy = GapPolicy::kForwardFill;
          else if (v == "reject")
            c.gap_policy = GapPolicy::kReject;
          else
            bad_value("gap_policy", v, "'ffill' or 'reject'");
        }}},
      {"synthetic.length", TC_SIZE(synthetic.length)},
      {"synthetic.base", TC_DOUBLE(synthetic.base)},
      {"synthetic.amplitude", TC_DOUBLE(synthetic.amplitude)},
      {"synthetic.period", TC_DOUBLE(synthetic.period)},
      {"synthetic.slope", TC_DOUBLE(synthetic.slope)},
      {"synthetic.phi", TC_DOUBLE(synthetic.phi)},
      {"synthetic.noise_std", TC_DOUBLE(synthetic.noise_std)},
      {"synthetic.mixing_seed", TC_SIZE(synthetic.mixing_seed)},
      {"synthetic.start",
       {[](const ExperimentConfig& c) { return c.synthetic.start.to_string(); },
        [](ExperimentConfig& c, std::string_view v) {
          const auto t = HourStamp::parse(text::trim(v));
          if (!t) bad_value("synthetic.start", v, "an hourly timestamp");
          c.synthetic.start = *t;
        }}},
      {"variants",
       {[](const ExperimentConfig& c) { return join(c.variants); },
        [](ExperimentConfig& c, std::string_view v) {
          c.variants.clear();
          if (text::trim(v).empty()) return;
          for (auto part : text::split(v, ','))
            c.variants.push_back(Variant::parse(text::trim(part)).name());
        }}},
      {"lookbacks",
       {[](const ExperimentConfig& c) { return join(c.lookbacks); },
        [](ExperimentConfig& c, std::string_view v) { c.lookbacks = to_size_list("lookbacks", v); }}},
      {"horizons", TC_SIZE(horizons)},
      {"retro", TC_SIZE(retro)},
      {"split.train", TC_DOUBLE(split.train)},
      {"split.val", TC_DOUBLE(split.val)},
      {"split.test", TC_DOUBLE(split.test)},
      {"profile",
       {[](const ExperimentConfig& c) { return c.profile; },
        [](ExperimentConfig& c, std::string_view v) {
          v = text::trim(v);
          nn::TrainConfig preset;
          if (v == "desk")
            preset = nn::TrainConfig::desk();
          else if (v == "full")
            preset = nn::TrainConfig::full();
          else
            bad_value("profile", v, "'desk' or 'full'");
          c.profile = std::string(v);
          c.train.max_epochs = preset.max_epochs;
          c.train.patience = preset.patience;
        }}},
      {"train.learning_rate", TC_DOUBLE(train.adam.learning_rate)},
      {"train.beta1", TC_DOUBLE(train.adam.beta1)},
      {"train.beta2", TC_DOUBLE(train.adam.beta2)},
      {"train.epsilon", TC_DOUBLE(train.adam.epsilon)},
      {"train.max_epochs", TC_SIZE(train.max_epochs)},
      {"train.patience", TC_SIZE(train.patience)},
      {"train.patience_unit",
       {[](const ExperimentConfig& c) { return std::string(nn::to_string(c.train.patience_unit)); },
        [](ExperimentConfig& c, std::string_view v) {
          c.train.patience_unit = nn::parse_patience_unit(text::trim(v));
        }}},
      {"train.batch_size", TC_SIZE(train.batch_size)},
      {"model.mlp_hidden",
       {[](const ExperimentConfig& c) { return join(c.hyper.mlp_hidden); },
        [](ExperimentConfig& c, std::string_view v) {
          c.hyper.mlp_hidden = to_size_list("model.mlp_hidden", v);
        }}},
      {"model.lstm_units", TC_SIZE(hyper.lstm_units)},
      {"model.lstm_cell_activation",
       {[](const ExperimentConfig& c) {
          return std::string(c.hyper.lstm_cell_activation == nn::CellActivation::kSoftsign
                                 ? "softsign"
                                 : "tanh");
        },
        [](ExperimentConfig& c, std::string_view v) {
          v = text::trim(v);
          if (v == "tanh")
            c.hyper.lstm_cell_activation = nn::CellActivation::kTanh;
          else if (v == "softsign")
            c.hyper.lstm_cell_activation = nn::CellActivation::kSoftsign;
          else
            bad_value("model.lstm_cell_activation", v, "'tanh' or 'softsign'");
        }}},
      {"model.mixer_blocks", TC_SIZE(hyper.mixer_blocks)},
      {"model.mixer_token_hidden", TC_SIZE(hyper.mixer_token_hidden)},
      {"model.mixer_channel_hidden", TC_SIZE(hyper.mixer_channel_hidden)},
      {"seed",
       {[](const ExperimentConfig& c) { return c.seed ? std::to_string(*c.seed) : std::string(); },
        [](ExperimentConfig& c, std::string_view v) {
          if (text::trim(v).empty())
            c.seed.reset();
          else
            c.seed = to_int<std::uint64_t>("seed", v);
        }}},
      {"workers", TC_SIZE(workers)},
  };
  return table;
}

#undef TC_DOUBLE
#undef TC_SIZE

const KeyHandler& handler(std::string_view key) {
  for (const auto& [k, h] : handlers())
    if (k == key) return h;
  throw ParameterError("unknown config key '" + std::string(key) + "'");
}

double fit_mse(std::span<const double> pred, std::span<const double> truth) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

std::vector<MetricsCell> failed_cells(const std::string& variant, std::size_t lookback,
                                      std::size_t horizons) {
  std::vector<MetricsCell> out(horizons);
  for (std::size_t h = 0; h < horizons; ++h) {
    out[h].variant = variant;
    out[h].lookback = lookback;
    out[h].horizon = h + 1;
    out[h].failed = true;
  }
  return out;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  for (const Variant& v : default_variants()) variants.push_back(v.name());
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& [key, h] : handlers()) out.push_back(key);
    return out;
  }();
  return k;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  handler(text::trim(key)).set(*this, value);
}

std::string ExperimentConfig::get(std::string_view key) const {
  return handler(text::trim(key)).get(*this);
}

void ExperimentConfig::apply(std::string_view text_in) {
  std::size_t line_no = 0;
  for (auto line : text::lines(text_in)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

ExperimentConfig ExperimentConfig::parse(std::string_view text_in) {
  ExperimentConfig c;
  c.apply(text_in);
  return c;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [key, h] : handlers()) out += key + " = " + h.get(*this) + "\n";
  return out;
}

void ExperimentConfig::validate() const {
  if (variants.empty()) throw ParameterError("config: no variants selected");
  if (lookbacks.empty()) throw ParameterError("config: no lookbacks selected");
  for (const auto& v : variants) Variant::parse(v);
  for (std::size_t lb : lookbacks)
    if (lb < 1 || lb > retro)
      throw ParameterError("config: lookback " + std::to_string(lb) + " outside [1, retro]");
  if (horizons < 1) throw ParameterError("config: horizons must be at least 1");
  if (hyper.mlp_hidden.empty()) throw ParameterError("config: model.mlp_hidden is empty");
  nn::validate(train);
  if (data_path.empty()) tempocast::validate(synthetic);
}

TimeSeriesFrame load_frame(const ExperimentConfig& config) {
  if (config.data_path.empty()) {
    if (!config.seed) throw ParameterError("synthetic data needs a seed");
    return gen_synthetic(config.synthetic, *config.seed);
  }
  std::ifstream in(config.data_path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + config.data_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return impute_gaps(parse_records(ss.str()), config.gap_policy);
}

Matrix persistence_baseline(const WindowedDataset& ds) {
  Matrix out(ds.size(), ds.horizons);
  constexpr std::size_t kTarget = index_of(Channel::kWs10mi);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Matrix& r = ds.samples[i].retro;
    const double last = r(r.rows() - 1, kTarget);
    for (std::size_t h = 0; h < ds.horizons; ++h) out(i, h) = last;
  }
  return out;
}

Matrix constant_mean_baseline(const WindowedDataset& train, std::size_t rows) {
  if (train.empty()) throw EmptyDataError("mean baseline needs training samples");
  double acc = 0.0;
  for (const auto& s : train.samples)
    for (double t : s.target) acc += t;
  const double mean = acc / static_cast<double>(train.size() * train.horizons);
  return Matrix(rows, train.horizons, mean);
}

GridResult run_grid(const ExperimentConfig& config) {
  return run_grid(config, load_frame(config));
}

GridResult run_grid(const ExperimentConfig& config, const TimeSeriesFrame& frame) {
  config.validate();
  if (!config.seed) throw ParameterError("run_grid needs a seed");
  const std::uint64_t seed = *config.seed;
  const auto source = std::make_shared<const TimeSeriesFrame>(frame);

  std::map<std::size_t, DatasetSplit> splits;
  for (std::size_t lb : config.lookbacks)
    splits.emplace(lb, split_chronological(
                           make_windows(source, lb, config.horizons, config.retro), config.split));

  // Single-branch models to train, deduplicated across fused variants.
  std::vector<CellKey> tasks;
  const auto need = [&](const Variant& v, std::size_t lb) {
    CellKey k{v.name(), lb};
    if (std::find(tasks.begin(), tasks.end(), k) == tasks.end()) tasks.push_back(std::move(k));
  };
  for (std::size_t lb : config.lookbacks) {
    for (const auto& name : config.variants) {
      const Variant v = Variant::parse(name);
      if (v.fused) {
        need(v.fft_branch(), lb);
        need(v.rp_branch(), lb);
      } else {
        need(v, lb);
      }
    }
  }

  std::vector<std::shared_ptr<const TrainedModel>> trained(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const CellKey& k = tasks[i];
      nn::TrainConfig tc = config.train;
      tc.seed = derive_seed(seed, k.variant, k.lookback);
      try {
        trained[i] = std::make_shared<const TrainedModel>(
            train_model(Variant::parse(k.variant), splits.at(k.lookback), config.hyper, tc));
        log::info("trained " + k.variant + " lookback " + std::to_string(k.lookback));
      } catch (const Error& e) {
        errors[i] = e.what();
        log::warning("cell " + k.variant + " lookback " + std::to_string(k.lookback) +
                     " failed: " + e.what());
      }
    }
  };
  std::size_t workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, tasks.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::map<CellKey, std::shared_ptr<const TrainedModel>> base;
  std::map<CellKey, std::string> base_errors;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (trained[i])
      base.emplace(tasks[i], trained[i]);
    else
      base_errors.emplace(tasks[i], errors[i]);
  }

  GridResult result;
  for (const auto& name : config.variants) {
    const Variant v = Variant::parse(name);
    for (std::size_t lb : config.lookbacks) {
      const DatasetSplit& split = splits.at(lb);
      const CellKey key{name, lb};
      std::shared_ptr<const TrainedModel> model;
      std::string failure;
      if (!v.fused) {
        if (auto it = base.find(key); it != base.end())
          model = it->second;
        else
          failure = base_errors.at(key);
      } else {
        const CellKey fk{v.fft_branch().name(), lb}, rk{v.rp_branch().name(), lb};
        if (!base.count(fk)) {
          failure = "branch " + fk.variant + " failed: " + base_errors.at(fk);
        } else if (!base.count(rk)) {
          failure = "branch " + rk.variant + " failed: " + base_errors.at(rk);
        } else {
          try {
            const TrainedModel& fm = *base.at(fk);
            const TrainedModel& rm = *base.at(rk);
            auto fused = std::make_shared<const TrainedModel>(fuse_models(v, fm, rm, split.val));
            const Matrix pf = predict_branch(*fused, 0, split.val);
            const Matrix pr = predict_branch(*fused, 1, split.val);
            const Matrix y = targets_of(split.val);
            const Matrix out = fuse(*fused->fusion, pf, pr);
            for (std::size_t h = 0; h < y.cols(); ++h) {
              const auto yc = y.column(h);
              const double ybar =
                  std::accumulate(yc.begin(), yc.end(), 0.0) / static_cast<double>(yc.size());
              FusionDiagnostic d;
              d.variant = name;
              d.lookback = lb;
              d.horizon = h + 1;
              d.fused_mse = fit_mse(out.column(h), yc);
              d.fft_mse = fit_mse(pf.column(h), yc);
              d.rp_mse = fit_mse(pr.column(h), yc);
              d.mean_mse = fit_mse(std::vector<double>(yc.size(), ybar), yc);
              result.fusion.push_back(std::move(d));
            }
            model = std::move(fused);
          } catch (const Error& e) {
            failure = e.what();
          }
        }
      }

      if (!model) {
        result.failures.push_back({name, lb, failure});
        auto cells = failed_cells(name, lb, config.horizons);
        result.table.cells.insert(result.table.cells.end(), cells.begin(), cells.end());
        continue;
      }
      CellPredictions cp{predict(*model, split.test), targets_of(split.test)};
      auto cells = evaluate_cell(name, lb, cp.pred, cp.truth);
      result.table.cells.insert(result.table.cells.end(), cells.begin(), cells.end());
      result.predictions.emplace(key, std::move(cp));
      result.models.emplace(key, std::move(model));
    }
  }

  for (std::size_t lb : config.lookbacks) {
    const DatasetSplit& split = splits.at(lb);
    const Matrix truth = targets_of(split.test);
    auto p = evaluate_cell("PERSISTENCE", lb, persistence_baseline(split.test), truth);
    auto m = evaluate_cell("MEAN", lb, constant_mean_baseline(split.train, split.test.size()), truth);
    result.baselines.cells.insert(result.baselines.cells.end(), p.begin(), p.end());
    result.baselines.cells.insert(result.baselines.cells.end(), m.begin(), m.end());
  }
  return result;
}

}  // namespace tempocast

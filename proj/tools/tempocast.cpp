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

// Command-line front end: stats, synth, features, train, predict, grid, report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tempocast/error.hpp"
#include "tempocast/experiment.hpp"
#include "tempocast/features.hpp"
#include "tempocast/log.hpp"
#include "tempocast/model.hpp"
#include "tempocast/report.hpp"
#include "tempocast/synthetic.hpp"
#include "tempocast/text.hpp"

#ifndef TEMPOCAST_VERSION_STRING
#define TEMPOCAST_VERSION_STRING "dev"
#endif

namespace {

using namespace tempocast;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTraining = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
}

// "train.patience" -> "--patience", "synthetic.length" -> "--synthetic-length".
std::string flag_for(const std::string& key) {
  std::string name = key;
  for (const char* prefix : {"train.", "model."})
    if (name.rfind(prefix, 0) == 0) name = name.substr(std::string(prefix).size());
  for (char& c : name)
    if (c == '.' || c == '_') c = '-';
  return "--" + name;
}

/// Exposes every ExperimentConfig key as a flag on `cmd`.
class ConfigFlags {
 public:
  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file_, "Flat key = value config file");
    for (const auto& key : ExperimentConfig::keys())
      cmd->add_option(flag_for(key), values_[key], "Config key " + key)->group("Config keys");
  }

  ExperimentConfig build(CLI::App* cmd) const {
    ExperimentConfig c;
    if (!config_file_.empty()) c.apply(read_file(config_file_));
    for (const auto& key : ExperimentConfig::keys())
      if (cmd->count(flag_for(key)) > 0) c.set(key, values_.at(key));
    return c;
  }

 private:
  std::string config_file_;
  std::map<std::string, std::string> values_;
};

TimeSeriesFrame load_input(const std::string& path, GapPolicy policy) {
  return impute_gaps(parse_records(read_file(path)), policy);
}

int run_stats(const std::string& input) {
  std::cout << format_stats_csv(summarize(load_input(input, GapPolicy::kForwardFill)));
  return kExitOk;
}

int run_synth(const ExperimentConfig& c, const std::string& output) {
  if (!c.seed) throw ParameterError("synth needs --seed");
  write_output(output, serialize_records(gen_synthetic(c.synthetic, *c.seed)));
  return kExitOk;
}

int run_features(const ExperimentConfig& c, std::size_t lookback, const std::string& kind,
                 const std::string& output) {
  FeatureSet fs;
  if (kind == "rp")
    fs = {false, true};
  else if (kind == "fft")
    fs = {true, false};
  else if (kind == "both")
    fs = {true, true};
  else
    throw ParameterError("--kind must be rp, fft or both");
  const auto frame = std::make_shared<const TimeSeriesFrame>(load_frame(c));
  const WindowedDataset ds = make_windows(frame, lookback, c.horizons, c.retro);
  const FeatureScalers scalers = fit_feature_scalers(split_chronological(ds, c.split).train);
  std::string out = "origin";
  if (fs.spectral)
    for (auto name : kChannelNames)
      out += ",fft_mag_" + std::string(name) + ",fft_phase_" + std::string(name);
  if (fs.rank_pool)
    for (std::size_t s : kRankPoolScales)
      for (auto name : kChannelNames) out += ",rp" + std::to_string(s) + "_" + std::string(name);
  out += '\n';
  const std::size_t skip = kNumChannels * lookback;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = assemble_inputs(ds.samples[i], lookback, fs, scalers);
    out += ds.samples[i].origin.to_string();
    for (std::size_t j = skip; j < row.size(); ++j) out += "," + text::format_double(row[j]);
    out += '\n';
  }
  write_output(output, out);
  return kExitOk;
}

int run_train(const ExperimentConfig& c, const std::string& variant_name, std::size_t lookback,
              const std::string& output) {
  if (!c.seed) throw ParameterError("train needs --seed");
  const Variant v = Variant::parse(variant_name);
  const auto frame = std::make_shared<const TimeSeriesFrame>(load_frame(c));
  const DatasetSplit split =
      split_chronological(make_windows(frame, lookback, c.horizons, c.retro), c.split);
  const auto train_one = [&](const Variant& b) {
    nn::TrainConfig tc = c.train;
    tc.seed = derive_seed(*c.seed, b.name(), lookback);
    return train_model(b, split, c.hyper, tc);
  };
  TrainedModel model = v.fused ? fuse_models(v, train_one(v.fft_branch()), train_one(v.rp_branch()),
                                             split.val)
                               : train_one(v);
  const Matrix pred = predict(model, split.test);
  const auto cells = evaluate_cell(model.variant, lookback, pred, targets_of(split.test));
  for (const auto& cell : cells)
    std::cerr << model.variant << " lookback " << lookback << " step " << cell.horizon
              << ": test MAE " << text::format_fixed(cell.mae, 4) << " RMSE "
              << text::format_fixed(cell.rmse, 4) << "\n";
  for (const auto& b : model.branches)
    std::cerr << model.variant << " branch " << b.features.name() << ": best epoch "
              << b.best_epoch << "\n";
  save_model_file(model, output);
  return kExitOk;
}

int run_predict(const std::string& model_path, const std::string& input, const std::string& split_name,
                const ExperimentConfig& c, const std::string& output) {
  const TrainedModel model = load_model_file(model_path);
  const auto frame = std::make_shared<const TimeSeriesFrame>(
      input.empty() ? load_frame(c) : load_input(input, c.gap_policy));
  WindowedDataset ds = make_windows(frame, model.lookback, model.horizons, model.retro);
  if (split_name == "test")
    ds = split_chronological(ds, c.split).test;
  else if (split_name != "all")
    throw ParameterError("--split must be 'all' or 'test'");
  const Matrix pred = predict(model, ds);
  std::string out = "origin";
  for (std::size_t h = 1; h <= model.horizons; ++h) out += ",h" + std::to_string(h);
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += ds.samples[i].origin.to_string();
    for (std::size_t h = 0; h < model.horizons; ++h) out += "," + text::format_double(pred(i, h));
    out += '\n';
  }
  write_output(output, out);
  return kExitOk;
}

std::string manifest_for(const ExperimentConfig& c) {
  return "# tempocast " + std::string(TEMPOCAST_VERSION_STRING) +
         " run manifest; re-run with: tempocast grid --config run_manifest\n" + c.to_text();
}

int run_grid_cmd(const ExperimentConfig& c, const std::string& out_dir, bool save_models) {
  if (!c.seed) throw ParameterError("grid needs --seed");
  const GridResult r = run_grid(c);
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_output((dir / "results.csv").string(), format_results_csv(r.table));
  write_output((dir / "predictions.csv").string(), format_predictions_csv(r.predictions));
  write_output((dir / "baselines.csv").string(), format_results_csv(r.baselines));
  std::string fusion = "variant,lookback,horizon,fused_mse,fft_mse,rp_mse,mean_mse\n";
  for (const auto& d : r.fusion)
    fusion += d.variant + "," + std::to_string(d.lookback) + "," + std::to_string(d.horizon) +
              "," + text::format_double(d.fused_mse) + "," + text::format_double(d.fft_mse) +
              "," + text::format_double(d.rp_mse) + "," + text::format_double(d.mean_mse) + "\n";
  write_output((dir / "fusion.csv").string(), fusion);
  if (save_models) {
    std::filesystem::create_directories(dir / "models");
    for (const auto& [key, model] : r.models)
      save_model_file(*model, (dir / "models" / (key.variant + "_L" + std::to_string(key.lookback) +
                                                  ".tpcm"))
                                  .string());
  }
  const auto variants = r.table.variants();
  const bool has_mlp = std::find(variants.begin(), variants.end(), "MLP") != variants.end();
  emit_report(r.table, dir, manifest_for(c), has_mlp);
  for (const auto& f : r.failures)
    std::cerr << "failed cell " << f.variant << " lookback " << f.lookback << ": " << f.message
              << "\n";
  std::cerr << r.table.cells.size() << " cells written to " << dir.string() << "\n";
  return r.failures.empty() ? kExitOk : kExitTraining;
}

int run_report(const std::string& results_path, const std::string& out_dir, bool improvements) {
  const ResultsTable table = parse_results_csv(read_file(results_path));
  const auto manifest_path = std::filesystem::path(results_path).parent_path() / "run_manifest";
  std::string manifest = std::filesystem::exists(manifest_path)
                             ? read_file(manifest_path.string())
                             : std::string("# manifest unavailable\n");
  emit_report(table, out_dir, manifest, improvements);
  return table.has_failures() ? kExitTraining : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-step wind speed forecasting with spectral and rank-pooling features"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  std::string input, output, kind = "both", variant, model_path, split_name = "all";
  std::string out_dir = "results", results_path;
  std::size_t lookback = 4;
  bool save_models = false, no_improvements = false;

  auto* stats = app.add_subcommand("stats", "Summary statistics of a station CSV");
  stats->add_option("input", input, "CSV file")->required();

  ConfigFlags synth_flags, feat_flags, train_flags, predict_flags, grid_flags;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic station CSV");
  synth_flags.attach(synth);
  synth->add_option("-o,--output", output, "Output CSV (default stdout)");

  auto* features = app.add_subcommand("features", "Dump spectral and rank-pooling features");
  feat_flags.attach(features);
  features->add_option("input", input, "Station CSV (default: configured data)");
  features->add_option("--lookback", lookback, "Lookback in hours")->check(CLI::Range(1, 24));
  features->add_option("--kind", kind, "rp, fft or both");
  features->add_option("-o,--output", output, "Output CSV (default stdout)");

  auto* train = app.add_subcommand("train", "Train one variant and save the model");
  train_flags.attach(train);
  train->add_option("--variant", variant, "Variant name, e.g. LR-FFT-RP-MLP")->required();
  train->add_option("--lookback", lookback, "Lookback in hours")->required();
  train->add_option("-o,--output", output, "Model file")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Forecast with a saved model");
  predict_flags.attach(predict_cmd);
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--input", input, "Station CSV (default: configured data)");
  predict_cmd->add_option("--on", split_name, "all or test");
  predict_cmd->add_option("-o,--output", output, "Output CSV (default stdout)");

  auto* grid = app.add_subcommand("grid", "Run the experiment grid");
  grid_flags.attach(grid);
  grid->add_option("--out", out_dir, "Output directory");
  grid->add_flag("--save-models", save_models, "Write every trained model");

  auto* report = app.add_subcommand("report", "Re-emit tables from a results.csv");
  report->add_option("results", results_path, "results.csv from a grid run")->required();
  report->add_option("--out", out_dir, "Output directory");
  report->add_flag("--no-improvements", no_improvements, "Skip the improvement-vs-MLP files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  log::set_level(verbose ? log::Level::kInfo : log::Level::kWarning);

  try {
    if (*stats) return run_stats(input);
    if (*synth) return run_synth(synth_flags.build(synth), output);
    if (*features) {
      auto c = feat_flags.build(features);
      if (!input.empty()) c.data_path = input;
      return run_features(c, lookback, kind, output);
    }
    if (*train) return run_train(train_flags.build(train), variant, lookback, output);
    if (*predict_cmd)
      return run_predict(model_path, input, split_name, predict_flags.build(predict_cmd), output);
    if (*grid) {
      if (grid->count(flag_for("seed")) == 0) {
        std::cerr << "grid: --seed is required\n";
        return kExitUsage;
      }
      return run_grid_cmd(grid_flags.build(grid), out_dir, save_models);
    }
    if (*report) return run_report(results_path, out_dir, !no_improvements);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingError& e) {
    std::cerr << "training failed: " << e.what() << "\n";
    return kExitTraining;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

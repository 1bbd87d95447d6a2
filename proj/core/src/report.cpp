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

#include "tempocast/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tempocast/error.hpp"
#include "tempocast/text.hpp"

namespace tempocast {
namespace {

std::string r_field(const MetricsCell& c) {
  return c.r ? text::format_double(*c.r) : std::string("undefined");
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<std::string_view> fields_of(std::string_view line, std::size_t expected,
                                        std::size_t line_no) {
  auto f = text::split(line, ',');
  if (f.size() != expected)
    throw FormatError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected) + " fields, got " + std::to_string(f.size()));
  return f;
}

double number(std::string_view s, std::size_t line_no) {
  const auto d = text::parse_double(s);
  if (!d) throw FormatError("line " + std::to_string(line_no) + ": bad number '" +
                            std::string(s) + "'");
  return *d;
}

std::size_t count(std::string_view s, std::size_t line_no) {
  const auto i = text::parse_int<std::size_t>(s);
  if (!i) throw FormatError("line " + std::to_string(line_no) + ": bad integer '" +
                            std::string(s) + "'");
  return *i;
}

}  // namespace

std::string format_table_csv(const ResultsTable& table) {
  const auto variants = table.variants();
  const auto lookbacks = table.lookbacks();
  std::string out = "variant,step";
  for (const char* m : {"MAE", "RMSE", "R"})
    for (std::size_t lb : lookbacks) out += std::string(",") + m + "_" + std::to_string(lb);
  out += '\n';
  for (const auto& v : variants) {
    for (std::size_t h = 1; h <= table.horizons(); ++h) {
      out += v + "," + std::to_string(h);
      for (int m = 0; m < 3; ++m) {
        for (std::size_t lb : lookbacks) {
          const MetricsCell* c = table.find(v, lb, h);
          out += ',';
          if (!c)
            out += "missing";
          else if (c->failed)
            out += "failed";
          else if (m == 0)
            out += text::format_double(c->mae);
          else if (m == 1)
            out += text::format_double(c->rmse);
          else
            out += r_field(*c);
        }
      }
      out += '\n';
    }
  }
  return out;
}

std::string format_improvement_csv(const ResultsTable& table, Metric metric) {
  const std::size_t horizons = table.horizons();
  const auto variants = table.variants();
  if (std::find(variants.begin(), variants.end(), "MLP") == variants.end())
    throw ParameterError("improvements need MLP baseline cells");
  std::string out = "variant,lookback";
  for (std::size_t h = 1; h <= horizons; ++h) out += ",h" + std::to_string(h);
  out += '\n';
  for (const auto& v : variants) {
    if (v == "MLP") continue;
    for (std::size_t lb : table.lookbacks()) {
      out += v + "," + std::to_string(lb);
      for (std::size_t h = 1; h <= horizons; ++h) {
        const MetricsCell* base = table.find("MLP", lb, h);
        if (!base)
          throw ParameterError("improvements need the MLP baseline at lookback " +
                               std::to_string(lb) + " step " + std::to_string(h));
        const MetricsCell* c = table.find(v, lb, h);
        out += ',';
        if (!c || c->failed || base->failed) {
          out += "failed";
          continue;
        }
        switch (metric) {
          case Metric::kMae:
            out += text::format_fixed(improvement(base->mae, c->mae), 1);
            break;
          case Metric::kRmse:
            out += text::format_fixed(improvement(base->rmse, c->rmse), 1);
            break;
          case Metric::kR:
            if (base->r && c->r && *base->r > 0.0)
              out += text::format_fixed(improvement_r(*base->r, *c->r), 1);
            else
              out += "undefined";
            break;
        }
      }
      out += '\n';
    }
  }
  return out;
}

std::string format_results_csv(const ResultsTable& table) {
  std::string out = "variant,lookback,horizon,mae,rmse,r,status\n";
  for (const auto& c : table.cells) {
    out += c.variant + "," + std::to_string(c.lookback) + "," + std::to_string(c.horizon) + ",";
    if (c.failed) {
      out += ",,,failed\n";
      continue;
    }
    out += text::format_double(c.mae) + "," + text::format_double(c.rmse) + "," + r_field(c) +
           ",ok\n";
  }
  return out;
}

ResultsTable parse_results_csv(std::string_view content) {
  const auto ls = text::lines(content);
  if (ls.empty() || text::trim(ls[0]) != "variant,lookback,horizon,mae,rmse,r,status")
    throw FormatError("results file: unexpected header");
  ResultsTable table;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (text::trim(ls[i]).empty()) continue;
    const auto f = fields_of(ls[i], 7, i);
    MetricsCell c;
    c.variant = std::string(f[0]);
    c.lookback = count(f[1], i);
    c.horizon = count(f[2], i);
    if (f[6] == "failed") {
      c.failed = true;
    } else if (f[6] == "ok") {
      c.mae = number(f[3], i);
      c.rmse = number(f[4], i);
      if (f[5] != "undefined") c.r = number(f[5], i);
    } else {
      throw FormatError("line " + std::to_string(i) + ": bad status '" + std::string(f[6]) + "'");
    }
    table.cells.push_back(std::move(c));
  }
  return table;
}

std::string format_predictions_csv(const std::map<CellKey, CellPredictions>& predictions) {
  std::string out = "variant,lookback,sample,horizon,pred,truth\n";
  for (const auto& [key, cp] : predictions) {
    for (std::size_t i = 0; i < cp.pred.rows(); ++i)
      for (std::size_t h = 0; h < cp.pred.cols(); ++h)
        out += key.variant + "," + std::to_string(key.lookback) + "," + std::to_string(i) + "," +
               std::to_string(h + 1) + "," + text::format_double(cp.pred(i, h)) + "," +
               text::format_double(cp.truth(i, h)) + "\n";
  }
  return out;
}

std::map<CellKey, CellPredictions> parse_predictions_csv(std::string_view content) {
  const auto ls = text::lines(content);
  if (ls.empty() || text::trim(ls[0]) != "variant,lookback,sample,horizon,pred,truth")
    throw FormatError("predictions file: unexpected header");
  struct Entry {
    std::size_t sample, horizon;
    double pred, truth;
  };
  std::map<CellKey, std::vector<Entry>> raw;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (text::trim(ls[i]).empty()) continue;
    const auto f = fields_of(ls[i], 6, i);
    raw[CellKey{std::string(f[0]), count(f[1], i)}].push_back(
        {count(f[2], i), count(f[3], i), number(f[4], i), number(f[5], i)});
  }
  std::map<CellKey, CellPredictions> out;
  for (auto& [key, entries] : raw) {
    std::size_t rows = 0, cols = 0;
    for (const auto& e : entries) {
      rows = std::max(rows, e.sample + 1);
      cols = std::max(cols, e.horizon);
    }
    if (rows * cols != entries.size())
      throw FormatError("predictions for " + key.variant + " lookback " +
                        std::to_string(key.lookback) + " are incomplete");
    CellPredictions cp{Matrix(rows, cols), Matrix(rows, cols)};
    for (const auto& e : entries) {
      if (e.horizon == 0) throw FormatError("horizon numbers start at 1");
      cp.pred(e.sample, e.horizon - 1) = e.pred;
      cp.truth(e.sample, e.horizon - 1) = e.truth;
    }
    out.emplace(key, std::move(cp));
  }
  return out;
}

void emit_report(const ResultsTable& results, const std::filesystem::path& out_dir,
                 std::string_view manifest, bool improvements) {
  if (results.cells.empty()) throw ParameterError("report: no results");
  std::string mae_csv, rmse_csv, r_csv;
  if (improvements) {
    mae_csv = format_improvement_csv(results, Metric::kMae);
    rmse_csv = format_improvement_csv(results, Metric::kRmse);
    r_csv = format_improvement_csv(results, Metric::kR);
  }
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "table.csv", format_table_csv(results));
  if (improvements) {
    write_file(out_dir / "improvement_mae.csv", mae_csv);
    write_file(out_dir / "improvement_rmse.csv", rmse_csv);
    write_file(out_dir / "improvement_r.csv", r_csv);
  }
  write_file(out_dir / "run_manifest", manifest);
}

}  // namespace tempocast

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

#include "tempocast/nn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tempocast/log.hpp"
#include "tempocast/nn/ops.hpp"

namespace tempocast::nn {

std::string_view to_string(PatienceUnit u) {
  return u == PatienceUnit::kSteps ? "steps" : "epochs";
}

PatienceUnit parse_patience_unit(std::string_view s) {
  if (s == "epochs") return PatienceUnit::kEpochs;
  if (s == "steps") return PatienceUnit::kSteps;
  throw ParameterError("patience unit must be 'epochs' or 'steps', got '" + std::string(s) + "'");
}

TrainConfig TrainConfig::desk() { return TrainConfig{}; }

TrainConfig TrainConfig::full() {
  TrainConfig c;
  c.patience = 1500;
  c.max_epochs = 5000;
  return c;
}

void validate(const TrainConfig& c) {
  validate(c.adam);
  if (c.patience < 1) throw ParameterError("patience must be at least 1");
  if (c.max_epochs < 1) throw ParameterError("max_epochs must be at least 1");
  if (c.batch_size < 1) throw ParameterError("batch_size must be at least 1");
}

EarlyStopping::EarlyStopping(std::size_t patience, PatienceUnit unit)
    : patience_(patience), unit_(unit) {
  if (patience < 1) throw ParameterError("patience must be at least 1");
}

bool EarlyStopping::observe(std::size_t epoch, double val_loss, std::size_t steps_since_last) {
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  since_best_ += unit_ == PatienceUnit::kSteps ? steps_since_last : 1;
  return false;
}

TrainHistory train_network(Network& net, const Matrix& x_train, const Matrix& y_train,
                           const Matrix& x_val, const Matrix& y_val, const TrainConfig& config) {
  validate(config);
  if (x_train.rows() == 0 || x_val.rows() == 0)
    throw EmptyDataError("training needs non-empty train and validation sets");
  if (x_train.rows() != y_train.rows() || x_val.rows() != y_val.rows())
    throw ShapeError("input and target row counts differ");

  const std::size_t n = x_train.rows(), in = x_train.cols(), out = y_train.cols();
  const std::size_t batch = std::min(config.batch_size, n);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  AdamState state(net.parameter_count());
  std::vector<double> grad(net.parameter_count());
  std::vector<double> best(net.parameters().begin(), net.parameters().end());
  EarlyStopping stopper(config.patience, config.patience_unit);
  TrainHistory history;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t first = 0; first < n; first += batch) {
      const std::size_t count = std::min(batch, n - first);
      Matrix xb(count, in), yb(count, out);
      for (std::size_t r = 0; r < count; ++r) {
        const auto src_x = x_train.row(order[first + r]);
        const auto src_y = y_train.row(order[first + r]);
        std::copy(src_x.begin(), src_x.end(), xb.row(r).begin());
        std::copy(src_y.begin(), src_y.end(), yb.row(r).begin());
      }
      const double loss = net.loss_gradient(xb, yb, grad);
      if (!std::isfinite(loss)) throw TrainingError(epoch, "non-finite training loss");
      try {
        adam_step(state, net.parameters(), grad, config.adam);
      } catch (const NumericError& e) {
        throw TrainingError(epoch, e.what());
      }
      loss_sum += loss * static_cast<double>(count);
      ++steps;
    }
    const double val = mean_squared_error(net.forward(x_val), y_val);
    if (!std::isfinite(val)) throw TrainingError(epoch, "non-finite validation loss");
    history.train_loss.push_back(loss_sum / static_cast<double>(n));
    history.val_loss.push_back(val);
    history.steps += steps;
    if (stopper.observe(epoch, val, steps)) {
      const auto p = net.parameters();
      std::copy(p.begin(), p.end(), best.begin());
    }
    if (stopper.should_stop()) {
      history.stopped_early = true;
      break;
    }
  }

  std::copy(best.begin(), best.end(), net.parameters().begin());
  history.best_epoch = stopper.best_epoch();
  history.best_val_loss = stopper.best_loss();
  log::debug("train " + std::string(to_string(net.architecture())) + ": " +
                          std::to_string(history.epochs()) + " epochs, best " +
                          std::to_string(history.best_epoch));
  return history;
}

}  // namespace tempocast::nn

// Copyright 2026 The predbench Authors.
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

#include "predbench/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "network_engine.hpp"
#include "predbench/error.hpp"
#include "predbench/random.hpp"
#include "predbench/text.hpp"

namespace predbench {

std::string to_string(LrSchedule schedule) {
  return schedule == LrSchedule::kCosine ? "cosine" : "constant";
}

LrSchedule parse_lr_schedule(std::string_view name) {
  if (name == "cosine") return LrSchedule::kCosine;
  if (name == "constant") return LrSchedule::kConstant;
  throw InvalidArgument("unknown learning-rate schedule '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (epochs < 4) throw InvalidArgument("training needs at least 4 epochs");
  if (batch_size == 0) throw InvalidArgument("batch size must be positive");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (momentum < 0.0 || momentum >= 1.0) throw InvalidArgument("momentum must be in [0,1)");
}

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os << "epochs=" << epochs << ";batch=" << batch_size
     << ";lr=" << format_double(learning_rate)
     << ";momentum=" << format_double(momentum) << ";schedule=" << to_string(schedule);
  return os.str();
}

TrainConfig TrainConfig::parse(std::string_view description) {
  TrainConfig cfg;
  for (const auto& [key, value] : parse_fields(description)) {
    if (key == "epochs") cfg.epochs = parse_size(value);
    else if (key == "batch") cfg.batch_size = parse_size(value);
    else if (key == "lr") cfg.learning_rate = parse_double(value);
    else if (key == "momentum") cfg.momentum = parse_double(value);
    else if (key == "schedule") cfg.schedule = parse_lr_schedule(value);
    else throw FormatError("unknown training field: " + key);
  }
  return cfg;
}

LearningCurve LearningCurve::prefix(std::size_t k) const {
  if (k < 1 || k > epochs()) {
    throw InvalidArgument("curve prefix length " + std::to_string(k) +
                          " outside [1, " + std::to_string(epochs()) + "]");
  }
  LearningCurve out;
  out.train_loss.assign(train_loss.begin(), train_loss.begin() + k);
  out.val_acc.assign(val_acc.begin(), val_acc.begin() + k);
  out.val_loss.assign(val_loss.begin(), val_loss.begin() + k);
  return out;
}

LearningCurve train(Network& network, const SyntheticDataset& data,
                    const TrainConfig& config) {
  config.validate();
  const NetworkLayout& layout = network.layout();
  const std::size_t d = layout.input_dim;
  const std::size_t n = data.train_size();
  if (data.input_dim != d || data.num_classes != layout.num_classes) {
    throw InvalidArgument("dataset does not match network shape");
  }
  std::vector<double>& params = network.mutable_params();
  std::vector<double> grad(params.size());
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> dlogits(layout.num_classes);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, {fnv1a("shuffle")}));
  detail::Engine<double> engine(layout);

  const std::size_t steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const double total_steps = static_cast<double>(steps_per_epoch * config.epochs);
  std::size_t step = 0;
  LearningCurve curve;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i) {
        const std::size_t idx = order[i];
        const auto& logits = engine.forward(params.data(), &data.train_x[idx * d], false);
        epoch_loss += detail::softmax_xent(logits, data.train_y[idx], scale, dlogits.data());
        engine.backward(params.data(), dlogits.data(), grad.data(), nullptr, false);
      }
      double lr = config.learning_rate;
      if (config.schedule == LrSchedule::kCosine) {
        lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / total_steps));
      }
      ++step;
      for (std::size_t j = 0; j < params.size(); ++j) {
        velocity[j] = config.momentum * velocity[j] - lr * grad[j];
        params[j] += velocity[j];
      }
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) {
      throw DivergedTraining(epoch, "training loss became non-finite at epoch " +
                                        std::to_string(epoch));
    }
    const auto val = network.evaluate(data.val_x, data.val_y);
    curve.train_loss.push_back(epoch_loss);
    curve.val_acc.push_back(val.accuracy);
    curve.val_loss.push_back(val.mean_loss);
  }
  return curve;
}

}  // namespace predbench

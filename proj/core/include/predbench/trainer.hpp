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

#ifndef PREDBENCH_TRAINER_HPP_
#define PREDBENCH_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/dataset.hpp"
#include "predbench/network.hpp"

namespace predbench {

// Per-step learning-rate schedule. kCosine anneals from the base rate
// towards zero over the whole run.
enum class LrSchedule { kConstant, kCosine };
std::string to_string(LrSchedule schedule);
LrSchedule parse_lr_schedule(std::string_view name);

struct TrainConfig {
  std::size_t epochs = 50;  // E; learning-curve methods need at least 4
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  LrSchedule schedule = LrSchedule::kCosine;
  std::uint64_t seed = 0;

  void validate() const;
  std::string describe() const;  // excludes the seed
  static TrainConfig parse(std::string_view description);
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Per-epoch training statistics for one architecture. Validation loss is
// kept next to accuracy so early stopping can use either.
struct LearningCurve {
  std::vector<double> train_loss;
  std::vector<double> val_acc;
  std::vector<double> val_loss;

  std::size_t epochs() const { return val_acc.size(); }
  double final_val_acc() const { return val_acc.back(); }
  // First k epochs of every series.
  LearningCurve prefix(std::size_t k) const;

  friend bool operator==(const LearningCurve&, const LearningCurve&) = default;
};

// Minibatch SGD with momentum on softmax cross-entropy. The network is
// trained in place. Throws DivergedTraining if an epoch's loss is not finite.
LearningCurve train(Network& network, const SyntheticDataset& data,
                    const TrainConfig& config);

}  // namespace predbench

#endif  // PREDBENCH_TRAINER_HPP_

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

#ifndef PREDBENCH_DATASET_HPP_
#define PREDBENCH_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace predbench {

enum class DatasetLayout { kSpiral, kRings };

std::string to_string(DatasetLayout layout);
DatasetLayout parse_dataset_layout(std::string_view name);

struct DatasetConfig {
  DatasetLayout layout = DatasetLayout::kSpiral;
  std::size_t num_classes = 3;
  std::size_t train_per_class = 96;
  std::size_t val_per_class = 64;
  // Spiral turns (spiral) or ring spacing multiplier (rings).
  double turns = 1.0;
  double noise = 0.08;
  std::uint64_t seed = 0;

  std::string describe() const;
  static DatasetConfig parse(std::string_view description);
  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

// Two-dimensional points with integer class labels. Inputs are stored
// row-major, `input_dim` values per example.
struct SyntheticDataset {
  std::size_t input_dim = 2;
  std::size_t num_classes = 0;
  std::vector<double> train_x;
  std::vector<int> train_y;
  std::vector<double> val_x;
  std::vector<int> val_y;

  std::size_t train_size() const { return train_y.size(); }
  std::size_t val_size() const { return val_y.size(); }
};

// Class-balanced, deterministic in `config.seed`. Throws InvalidArgument for
// empty splits or fewer than two classes.
SyntheticDataset make_dataset(const DatasetConfig& config);

}  // namespace predbench

#endif  // PREDBENCH_DATASET_HPP_

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

#include "predbench/dataset.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "predbench/error.hpp"
#include "predbench/random.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

void append_split(const DatasetConfig& cfg, std::size_t per_class,
                  std::uint64_t stream, std::vector<double>& xs,
                  std::vector<int>& ys) {
  Rng rng(derive_seed(cfg.seed, {stream}));
  std::normal_distribution<double> noise(0.0, cfg.noise);
  const double two_pi = 2.0 * std::numbers::pi;
  // Interleave classes so that any prefix is roughly balanced.
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
      const double t = uniform01(rng);
      double x0 = 0.0;
      double x1 = 0.0;
      if (cfg.layout == DatasetLayout::kSpiral) {
        const double r = 0.15 + 0.85 * t;
        const double angle =
            two_pi * static_cast<double>(c) / static_cast<double>(cfg.num_classes) +
            two_pi * cfg.turns * t;
        x0 = r * std::cos(angle);
        x1 = r * std::sin(angle);
      } else {
        const double r =
            (static_cast<double>(c) + 0.5) / static_cast<double>(cfg.num_classes);
        const double angle = two_pi * t;
        x0 = r * std::cos(angle);
        x1 = r * std::sin(angle);
      }
      xs.push_back(2.0 * (x0 + noise(rng)));
      xs.push_back(2.0 * (x1 + noise(rng)));
      ys.push_back(static_cast<int>(c));
    }
  }
}

}  // namespace

std::string to_string(DatasetLayout layout) {
  return layout == DatasetLayout::kSpiral ? "spiral" : "rings";
}

DatasetLayout parse_dataset_layout(std::string_view name) {
  if (name == "spiral") return DatasetLayout::kSpiral;
  if (name == "rings") return DatasetLayout::kRings;
  throw InvalidArgument("unknown dataset layout: " + std::string(name));
}

std::string DatasetConfig::describe() const {
  std::ostringstream os;
  os << "layout=" << to_string(layout) << ";classes=" << num_classes
     << ";train_per_class=" << train_per_class
     << ";val_per_class=" << val_per_class << ";turns=" << format_double(turns)
     << ";noise=" << format_double(noise) << ";seed=" << seed;
  return os.str();
}

DatasetConfig DatasetConfig::parse(std::string_view description) {
  DatasetConfig cfg;
  for (const auto& [key, value] : parse_fields(description)) {
    if (key == "layout") cfg.layout = parse_dataset_layout(value);
    else if (key == "classes") cfg.num_classes = parse_size(value);
    else if (key == "train_per_class") cfg.train_per_class = parse_size(value);
    else if (key == "val_per_class") cfg.val_per_class = parse_size(value);
    else if (key == "turns") cfg.turns = parse_double(value);
    else if (key == "noise") cfg.noise = parse_double(value);
    else if (key == "seed") cfg.seed = parse_u64(value);
    else throw FormatError("unknown dataset field: " + key);
  }
  return cfg;
}

SyntheticDataset make_dataset(const DatasetConfig& config) {
  if (config.num_classes < 2) throw InvalidArgument("dataset needs >= 2 classes");
  if (config.train_per_class == 0 || config.val_per_class == 0) {
    throw InvalidArgument("dataset splits must be non-empty");
  }
  SyntheticDataset ds;
  ds.input_dim = 2;
  ds.num_classes = config.num_classes;
  append_split(config, config.train_per_class, fnv1a("train"), ds.train_x, ds.train_y);
  append_split(config, config.val_per_class, fnv1a("val"), ds.val_x, ds.val_y);
  return ds;
}

}  // namespace predbench

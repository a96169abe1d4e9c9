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

#ifndef PREDBENCH_REGISTRY_HPP_
#define PREDBENCH_REGISTRY_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/lc_pred.hpp"
#include "predbench/model_pred.hpp"
#include "predbench/omni.hpp"
#include "predbench/predictor.hpp"
#include "predbench/zerocost.hpp"

namespace predbench {

struct PredictorOptions {
  // HPO settings per model kind; kinds not listed use HpoSpec::defaults_for.
  std::map<ModelKind, HpoSpec> hpo;
  // When nonzero, overrides every spec's iteration cap.
  std::size_t hpo_iterations = 0;
  ModelKind omni_base = ModelKind::kGradientBoostedTrees;
  std::size_t retune_every = 5;
  // Shared memo tables; created on first use when null.
  std::shared_ptr<ZeroCostCache> zero_cost_cache;
  std::shared_ptr<LceCache> lce_cache;

  HpoSpec hpo_for(ModelKind kind) const;
};

// Every registered predictor name, in a fixed order.
const std::vector<std::string>& predictor_names();

// baseline | zero_cost | learning_curve | model_based | hybrid
std::string predictor_family(std::string_view name);

// Throws InvalidArgument listing the valid names for an unknown name.
std::unique_ptr<Predictor> make_predictor(std::string_view name, PredictorOptions& options);

}  // namespace predbench

#endif  // PREDBENCH_REGISTRY_HPP_

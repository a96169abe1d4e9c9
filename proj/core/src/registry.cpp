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

#include "predbench/registry.hpp"

#include "predbench/error.hpp"

namespace predbench {

HpoSpec PredictorOptions::hpo_for(ModelKind kind) const {
  auto it = hpo.find(kind);
  HpoSpec s = it == hpo.end() ? HpoSpec::defaults_for(kind) : it->second;
  if (hpo_iterations > 0) s.iterations = hpo_iterations;
  return s;
}

const std::vector<std::string>& predictor_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"oracle", "random"};
    for (ProxyKind k : all_proxy_kinds()) n.push_back(to_string(k));
    for (auto m : {LcMethod::kEarlyStopAcc, LcMethod::kEarlyStopLoss, LcMethod::kSotl,
                   LcMethod::kSotlE, LcMethod::kLce, LcMethod::kLceM}) {
      n.push_back(to_string(m));
    }
    for (ModelKind k : all_model_kinds()) n.push_back(to_string(k));
    n.push_back("bananas");
    for (const auto& v : omni_variants()) n.push_back(v.name);
    return n;
  }();
  return names;
}

std::string predictor_family(std::string_view name) {
  if (name == "oracle" || name == "random") return "baseline";
  for (ProxyKind k : all_proxy_kinds()) {
    if (name == to_string(k)) return "zero_cost";
  }
  try {
    parse_lc_method(name);
    return "learning_curve";
  } catch (const InvalidArgument&) {
  }
  if (name == "bananas") return "model_based";
  for (ModelKind k : all_model_kinds()) {
    if (name == to_string(k)) return "model_based";
  }
  for (const auto& v : omni_variants()) {
    if (name == v.name) return "hybrid";
  }
  throw InvalidArgument("unknown predictor '" + std::string(name) + "'");
}

std::unique_ptr<Predictor> make_predictor(std::string_view name, PredictorOptions& options) {
  if (!options.zero_cost_cache) options.zero_cost_cache = std::make_shared<ZeroCostCache>();
  if (!options.lce_cache) options.lce_cache = std::make_shared<LceCache>();
  if (name == "oracle") return std::make_unique<OraclePredictor>();
  if (name == "random") return std::make_unique<RandomPredictor>();
  for (ProxyKind k : all_proxy_kinds()) {
    if (name == to_string(k)) {
      return std::make_unique<ZeroCostPredictor>(k, options.zero_cost_cache);
    }
  }
  for (auto m : {LcMethod::kEarlyStopAcc, LcMethod::kEarlyStopLoss, LcMethod::kSotl,
                 LcMethod::kSotlE, LcMethod::kLce, LcMethod::kLceM}) {
    if (name == to_string(m)) return std::make_unique<LcPredictor>(m, options.lce_cache);
  }
  if (name == "bananas") {
    return std::make_unique<ModelPredictor>(
        "bananas", options.hpo_for(ModelKind::kFeedforwardEnsemble), EncodingKind::kPath,
        options.retune_every);
  }
  for (ModelKind k : all_model_kinds()) {
    if (name == to_string(k)) {
      return std::make_unique<ModelPredictor>(std::string(name), options.hpo_for(k),
                                              EncodingKind::kAdjacencyOneHot,
                                              options.retune_every);
    }
  }
  for (const auto& v : omni_variants()) {
    if (name == v.name) {
      OmniConfig cfg;
      cfg.features = v.features;
      cfg.hpo = options.hpo_for(options.omni_base);
      cfg.retune_every = options.retune_every;
      return std::make_unique<OmniPredictor>(v.name, cfg, options.zero_cost_cache);
    }
  }
  std::string valid;
  for (const auto& n : predictor_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown predictor '" + std::string(name) + "'; valid names: " + valid);
}

}  // namespace predbench

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

#ifndef PREDBENCH_OMNI_HPP_
#define PREDBENCH_OMNI_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/model_pred.hpp"
#include "predbench/predictor.hpp"
#include "predbench/zerocost.hpp"

namespace predbench {

enum OmniFeature : unsigned {
  kOmniEncoding = 1u << 0,
  kOmniSotlE = 1u << 1,
  kOmniJacobCov = 1u << 2,
};

inline constexpr unsigned kOmniAllFeatures = kOmniEncoding | kOmniSotlE | kOmniJacobCov;

struct OmniConfig {
  unsigned features = kOmniAllFeatures;
  // Gradient-boosted trees by default; kFeedforwardEnsemble is the neural
  // alternative.
  HpoSpec hpo = HpoSpec::defaults_for(ModelKind::kGradientBoostedTrees);
  EncodingKind encoding = EncodingKind::kAdjacencyOneHot;
  std::size_t retune_every = 5;

  void validate() const;
};

// "omni" (all three), "omni_enc_jc", "omni_enc_sotle", "omni_jc_sotle".
struct OmniVariant {
  const char* name;
  unsigned features;
};
const std::vector<OmniVariant>& omni_variants();
std::string omni_feature_string(unsigned features);

// Hybrid predictor: a model over (encoding, SoTL-E, Jacobian covariance).
//
// Training rows are fully trained inside the init budget. Their SoTL-E is
// read at the epoch index the query budget affords, and their Jacobian
// covariance is computed without charge (the architecture was trained
// anyway). A query spends the zero-cost constant on Jacobian covariance,
// then the rest of the query budget (up to E epochs) on a curve prefix for
// SoTL-E. Features the query budget cannot pay for are dropped from both
// training rows and queries, and such predictions are flagged degraded.
class OmniPredictor : public Predictor {
 public:
  OmniPredictor(std::string name, OmniConfig config,
                std::shared_ptr<ZeroCostCache> cache = nullptr);

  std::string name() const override { return name_; }
  bool uses_init_budget() const override { return true; }
  bool init_depends_on_query_budget() const override {
    return (config_.features & (kOmniSotlE | kOmniJacobCov)) != 0;
  }

  void update(std::span<const BenchmarkRecord> new_records) override;

  // Features in use after budget degradation, and the SoTL-E epoch.
  unsigned active_features() const { return active_; }
  std::size_t sotl_epoch() const { return sotl_k_; }
  std::size_t training_rows() const { return records_.size(); }

 protected:
  void do_initialize(const InitContext& ctx) override;
  Prediction do_query(const Architecture& arch, BudgetAccount& account) override;

 private:
  std::vector<double> feature_row(const Architecture& arch, double sotl_e_value,
                                  double jc_value) const;
  double jacob_cov(const Architecture& arch) const;
  void refit(bool retune);

  std::string name_;
  OmniConfig config_;
  std::shared_ptr<ZeroCostCache> cache_;
  const Benchmark* bench_ = nullptr;
  std::uint64_t seed_ = 0;
  unsigned active_ = 0;
  std::size_t sotl_k_ = 0;
  std::size_t updates_ = 0;
  double jc_impute_ = 0.0;
  std::vector<BenchmarkRecord> records_;
  Hyperparams tuned_;
  std::optional<FittedModel> model_;
};

}  // namespace predbench

#endif  // PREDBENCH_OMNI_HPP_

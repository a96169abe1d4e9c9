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

#include "predbench/omni.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "predbench/error.hpp"
#include "predbench/lc_pred.hpp"

namespace predbench {

void OmniConfig::validate() const {
  if ((features & kOmniAllFeatures) == 0 || (features & ~kOmniAllFeatures) != 0) {
    throw InvalidArgument("omni feature set must be a non-empty subset of {enc, sotl_e, jc}");
  }
  hpo.validate();
}

const std::vector<OmniVariant>& omni_variants() {
  static const std::vector<OmniVariant> v = {
      {"omni", kOmniAllFeatures},
      {"omni_enc_jc", kOmniEncoding | kOmniJacobCov},
      {"omni_enc_sotle", kOmniEncoding | kOmniSotlE},
      {"omni_jc_sotle", kOmniJacobCov | kOmniSotlE},
  };
  return v;
}

std::string omni_feature_string(unsigned features) {
  std::string s;
  auto add = [&](const char* n) {
    if (!s.empty()) s += '+';
    s += n;
  };
  if (features & kOmniEncoding) add("enc");
  if (features & kOmniSotlE) add("sotl_e");
  if (features & kOmniJacobCov) add("jc");
  return s.empty() ? "none" : s;
}

OmniPredictor::OmniPredictor(std::string name, OmniConfig config,
                             std::shared_ptr<ZeroCostCache> cache)
    : name_(std::move(name)),
      config_(std::move(config)),
      cache_(cache ? std::move(cache) : std::make_shared<ZeroCostCache>()) {
  config_.validate();
}

double OmniPredictor::jacob_cov(const Architecture& arch) const {
  return cache_->get(*bench_, arch, ProxyKind::kJacobCov, 32);
}

std::vector<double> OmniPredictor::feature_row(const Architecture& arch, double sotl_e_value,
                                               double jc_value) const {
  std::vector<double> row;
  if (active_ & kOmniEncoding) row = encode(bench_->space(), arch, config_.encoding).values;
  if (active_ & kOmniSotlE) row.push_back(sotl_e_value);
  if (active_ & kOmniJacobCov) row.push_back(std::isfinite(jc_value) ? jc_value : jc_impute_);
  return row;
}

void OmniPredictor::do_initialize(const InitContext& ctx) {
  bench_ = ctx.bench;
  seed_ = ctx.seed;
  const CostModel& cost = bench_->cost();
  active_ = config_.features & kOmniEncoding;
  double q = ctx.query_budget;
  if ((config_.features & kOmniJacobCov) && q + 1e-9 >= cost.zero_cost_query) {
    active_ |= kOmniJacobCov;
    q -= cost.zero_cost_query;
  }
  if (config_.features & kOmniSotlE) {
    const double k = std::floor((q + 1e-9) / cost.epoch_cost);
    sotl_k_ = k >= 1.0 ? std::min<std::size_t>(bench_->epochs(), static_cast<std::size_t>(k)) : 0;
    if (sotl_k_ > 0) active_ |= kOmniSotlE;
  }
  records_ = collect_full_trainings(ctx);
  if (records_.size() < 10) {
    throw InsufficientData(name_ + ": init budget affords " + std::to_string(records_.size()) +
                           " full trainings, need at least 10");
  }
  if (active_ != 0) refit(true);
}

void OmniPredictor::update(std::span<const BenchmarkRecord> new_records) {
  records_.insert(records_.end(), new_records.begin(), new_records.end());
  ++updates_;
  if (active_ != 0) refit(updates_ % std::max<std::size_t>(1, config_.retune_every) == 0);
}

void OmniPredictor::refit(bool retune) {
  std::vector<double> jc(records_.size(), 0.0);
  if (active_ & kOmniJacobCov) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < records_.size(); ++i) {
      jc[i] = jacob_cov(records_[i].arch);
      if (std::isfinite(jc[i])) lo = std::min(lo, jc[i]);
    }
    // Degenerate proxies rank at the bottom, so impute just below the
    // lowest observed value.
    jc_impute_ = std::isfinite(lo) ? lo - std::max(1.0, std::abs(lo)) : 0.0;
  }
  TrainingSet ts;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const double s = sotl_k_ > 0 ? -records_[i].curve.train_loss[sotl_k_ - 1] : 0.0;
    ts.x.push_row(feature_row(records_[i].arch, s, jc[i]));
    ts.y.push_back(records_[i].final_val_acc());
  }
  const std::uint64_t s = derive_seed(seed_, {updates_});
  const std::optional<EncodingKind> enc =
      active_ == kOmniEncoding ? std::optional<EncodingKind>(config_.encoding) : std::nullopt;
  model_.reset();
  if (retune || tuned_.empty()) {
    HpoOutcome o;
    model_.emplace(fit(config_.hpo, ts, s, enc, &o));
    tuned_ = o.best;
  } else {
    model_.emplace(fit_with(config_.hpo.kind, ts, tuned_, s, enc));
  }
}

Prediction OmniPredictor::do_query(const Architecture& arch, BudgetAccount& account) {
  Prediction p;
  p.degraded = active_ != config_.features;
  if (!model_) return p;
  const CostModel& cost = bench_->cost();
  if (!account.can_afford(cost.model_query)) {
    p.degraded = true;
    return p;
  }
  double jc = 0.0, s = 0.0;
  if (active_ & kOmniJacobCov) {
    if (!account.can_afford(cost.zero_cost_query)) {
      p.degraded = true;
      return p;
    }
    account.charge(cost.zero_cost_query);
    jc = jacob_cov(arch);
  }
  if (active_ & kOmniSotlE) {
    if (affordable_epochs(*bench_, account) < sotl_k_) {
      p.degraded = true;
      return p;
    }
    s = sotl_e(bench_->query_partial(arch, sotl_k_, account));
  }
  account.charge(cost.model_query);
  p.score = model_->predict(feature_row(arch, s, jc));
  if (!std::isfinite(p.score)) p.score = kDegenerateScore;
  return p;
}

}  // namespace predbench

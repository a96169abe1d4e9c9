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

#include "predbench/model_pred.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "predbench/error.hpp"
#include "predbench/metrics.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

struct KindName {
  ModelKind kind;
  const char* short_name;
  const char* long_name;
};

constexpr KindName kKindNames[] = {
    {ModelKind::kBayesLinear, "bayes_linear", "bayes_linear"},
    {ModelKind::kGaussianProcess, "gp", "gaussian_process"},
    {ModelKind::kRandomForest, "rf", "random_forest"},
    {ModelKind::kGradientBoostedTrees, "gbt", "gradient_boosted_trees"},
    {ModelKind::kFeedforwardEnsemble, "mlp", "feedforward_ensemble"},
};

double tau_or_zero(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() < 2) return 0.0;
  const double t = kendall_tau(pred, truth);
  return is_undefined(t) ? 0.0 : t;
}

std::string range_text(const HpRange& r) {
  std::string s = format_double(r.lo) + " " + format_double(r.hi) + " " + format_double(r.def);
  if (r.log_scale) s += " log";
  if (r.integer) s += " int";
  return s;
}

}  // namespace

std::string to_string(ModelKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.short_name;
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (name == k.short_name || name == k.long_name) return k.kind;
  }
  throw InvalidArgument("unknown model kind '" + std::string(name) + "'");
}

const std::vector<ModelKind>& all_model_kinds() {
  static const std::vector<ModelKind> kinds = {
      ModelKind::kBayesLinear, ModelKind::kGaussianProcess, ModelKind::kRandomForest,
      ModelKind::kGradientBoostedTrees, ModelKind::kFeedforwardEnsemble};
  return kinds;
}

std::size_t min_training_rows(ModelKind kind) {
  return kind == ModelKind::kBayesLinear || kind == ModelKind::kGaussianProcess ? 2 : 10;
}

void Matrix::push_row(std::span<const double> values) {
  if (rows == 0 && cols == 0) cols = values.size();
  if (values.size() != cols) throw InvalidArgument("row width mismatch");
  data.insert(data.end(), values.begin(), values.end());
  ++rows;
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
  Matrix out(0, cols);
  out.data.reserve(idx.size() * cols);
  for (auto i : idx) out.push_row(row(i));
  return out;
}

TrainingSet TrainingSet::subset(std::span<const std::size_t> idx) const {
  TrainingSet out;
  out.x = x.select_rows(idx);
  for (auto i : idx) out.y.push_back(y[i]);
  return out;
}

TrainingSet TrainingSet::from_records(const SearchSpace& space,
                                      std::span<const BenchmarkRecord> records,
                                      EncodingKind encoding) {
  TrainingSet ts;
  for (const auto& r : records) {
    ts.x.push_row(encode(space, r.arch, encoding).values);
    ts.y.push_back(r.final_val_acc());
  }
  return ts;
}

HpoSpec HpoSpec::defaults_for(ModelKind kind) {
  HpoSpec s;
  s.kind = kind;
  switch (kind) {
    case ModelKind::kBayesLinear:
      s.ranges = {{"alpha", 1e-3, 1e2, 1.0, true, false},
                  {"beta", 0.1, 1e3, 10.0, true, false}};
      break;
    case ModelKind::kGaussianProcess:
      s.ranges = {{"length_scale", 0.3, 10.0, 2.0, true, false},
                  {"noise", 1e-6, 1.0, 1e-2, true, false}};
      break;
    case ModelKind::kRandomForest:
      s.ranges = {{"n_trees", 16, 128, 64, false, true},
                  {"max_features", 0.1, 1.0, 0.5, false, false},
                  {"min_samples_leaf", 1, 20, 1, false, true}};
      s.fixed = {{"max_depth", 1000}, {"bootstrap", 1}};
      break;
    case ModelKind::kGradientBoostedTrees:
      s.ranges = {{"n_estimators", 32, 256, 100, true, true},
                  {"learning_rate", 0.01, 0.5, 0.1, true, false},
                  {"max_depth", 1, 8, 3, false, true},
                  {"min_samples_leaf", 1, 10, 1, false, true},
                  {"feature_fraction", 0.1, 1.0, 1.0, false, false},
                  {"subsample", 0.5, 1.0, 1.0, false, false}};
      break;
    case ModelKind::kFeedforwardEnsemble:
      s.ranges = {{"num_layers", 1, 4, 2, false, true},
                  {"layer_width", 8, 64, 32, true, true},
                  {"learning_rate", 1e-4, 1e-1, 1e-2, true, false},
                  {"epochs", 50, 300, 150, true, true}};
      s.fixed = {{"members", 3}, {"batch_size", 32}, {"weight_decay", 0}};
      break;
  }
  return s;
}

Hyperparams HpoSpec::defaults() const {
  Hyperparams hp = fixed;
  for (const auto& r : ranges) hp[r.name] = r.def;
  return hp;
}

Hyperparams HpoSpec::sample(Rng& rng) const {
  Hyperparams hp = fixed;
  for (const auto& r : ranges) {
    const double u = uniform01(rng);
    double v = r.log_scale ? std::exp(std::log(r.lo) + u * (std::log(r.hi) - std::log(r.lo)))
                           : r.lo + u * (r.hi - r.lo);
    if (r.integer) v = std::clamp(std::round(v), std::ceil(r.lo), std::floor(r.hi));
    hp[r.name] = v;
  }
  return hp;
}

void HpoSpec::validate() const {
  if (iterations < 1) throw InvalidArgument("hpo iterations must be >= 1");
  if (!(time_cap_seconds >= 0.0)) throw InvalidArgument("hpo time cap must be >= 0");
  if (ranges.empty()) throw InvalidArgument("hpo spec for " + to_string(kind) + " has no ranges");
  for (const auto& r : ranges) {
    if (!(r.lo <= r.hi)) throw InvalidArgument("hpo range '" + r.name + "' is empty");
    if (r.log_scale && !(r.lo > 0.0)) {
      throw InvalidArgument("hpo range '" + r.name + "' is log-scaled but not positive");
    }
    if (!(r.def >= r.lo && r.def <= r.hi)) {
      throw InvalidArgument("hpo default for '" + r.name + "' lies outside its range");
    }
  }
}

void HpoSpec::write(IniDocument::Section& section) const {
  section.set("iterations", std::to_string(iterations));
  section.set("time_cap", format_double(time_cap_seconds));
  for (const auto& r : ranges) section.set("range." + r.name, range_text(r));
  for (const auto& [k, v] : fixed) section.set("fixed." + k, format_double(v));
}

HpoSpec HpoSpec::read(ModelKind kind, const IniDocument::Section& section) {
  HpoSpec s = defaults_for(kind);
  for (const auto& e : section.entries) {
    try {
      if (e.key == "iterations") {
        s.iterations = parse_size(e.value);
      } else if (e.key == "time_cap") {
        s.time_cap_seconds = parse_double(e.value);
      } else if (e.key.rfind("range.", 0) == 0) {
        HpRange r;
        r.name = e.key.substr(6);
        std::vector<std::string_view> parts;
        for (auto p : split(e.value, ' ')) {
          if (!trim(p).empty()) parts.push_back(trim(p));
        }
        if (parts.size() < 3) throw FormatError("expected '<lo> <hi> <default> [log] [int]'");
        r.lo = parse_double(parts[0]);
        r.hi = parse_double(parts[1]);
        r.def = parse_double(parts[2]);
        for (std::size_t i = 3; i < parts.size(); ++i) {
          if (parts[i] == "log") r.log_scale = true;
          else if (parts[i] == "int") r.integer = true;
          else throw FormatError("unknown range flag '" + std::string(parts[i]) + "'");
        }
        auto it = std::find_if(s.ranges.begin(), s.ranges.end(),
                               [&](const HpRange& x) { return x.name == r.name; });
        if (it != s.ranges.end()) *it = r;
        else s.ranges.push_back(r);
      } else if (e.key.rfind("fixed.", 0) == 0) {
        s.fixed[e.key.substr(6)] = parse_double(e.value);
      } else {
        throw FormatError("unknown hpo key");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      throw ConfigError(e.line, e.key, err.what());
    }
  }
  try {
    s.validate();
  } catch (const Error& err) {
    throw ConfigError(section.line, "", err.what());
  }
  return s;
}

FittedModel::FittedModel(ModelKind kind, Hyperparams hp, std::size_t feature_dim,
                         std::optional<EncodingKind> encoding,
                         std::vector<std::shared_ptr<const Regressor>> members)
    : kind_(kind),
      hp_(std::move(hp)),
      feature_dim_(feature_dim),
      encoding_(encoding),
      members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("fitted model without members");
}

double FittedModel::predict(std::span<const double> features) const {
  return predict_dist(features).mean;
}

Distribution FittedModel::predict_dist(std::span<const double> features) const {
  if (features.size() != feature_dim_) {
    throw InvalidArgument("feature length " + std::to_string(features.size()) +
                          " != fitted length " + std::to_string(feature_dim_));
  }
  std::vector<double> preds;
  preds.reserve(members_.size());
  for (const auto& m : members_) preds.push_back(m->predict(features));
  const double n = static_cast<double>(preds.size());
  const double mean = std::accumulate(preds.begin(), preds.end(), 0.0) / n;
  // Pairwise form: exactly zero when all members agree.
  double ss = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = i + 1; j < preds.size(); ++j) ss += (preds[i] - preds[j]) * (preds[i] - preds[j]);
  }
  return {mean, std::sqrt(ss) / n};
}

std::vector<Distribution> FittedModel::predict(const SearchSpace& space,
                                               std::span<const Architecture> archs,
                                               EncodingKind kind) const {
  if (!encoding_ || *encoding_ != kind) {
    throw InvalidArgument("encoding mismatch: model was fitted on " +
                          (encoding_ ? to_string(*encoding_) : std::string("custom features")) +
                          ", asked for " + to_string(kind));
  }
  std::vector<Distribution> out;
  out.reserve(archs.size());
  for (const auto& a : archs) out.push_back(predict_dist(encode(space, a, kind).values));
  return out;
}

double cross_validate(ModelKind kind, const TrainingSet& data, const Hyperparams& hp,
                      std::uint64_t seed) {
  const std::size_t n = data.size();
  if (n < 2) throw InsufficientData("cross-validation needs at least 2 rows");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed, {fnv1a("folds")}));
  std::shuffle(perm.begin(), perm.end(), rng);
  const bool loo = n < 10;
  const std::size_t k = loo ? n : 3;
  std::vector<double> pooled_pred(n), pooled_truth(n);
  double total = 0.0;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, held;
    for (std::size_t p = 0; p < n; ++p) (p % k == f ? held : train).push_back(perm[p]);
    const TrainingSet tr = data.subset(train);
    const FittedModel m = fit_with(kind, tr, hp, derive_seed(seed, {f}));
    std::vector<double> pred, truth;
    for (auto i : held) {
      pred.push_back(m.predict(data.x.row(i)));
      truth.push_back(data.y[i]);
    }
    if (loo) {
      pooled_pred[f] = pred[0];
      pooled_truth[f] = truth[0];
    } else {
      total += tau_or_zero(pred, truth);
    }
  }
  return loo ? tau_or_zero(pooled_pred, pooled_truth) : total / static_cast<double>(k);
}

HpoOutcome tune(const HpoSpec& spec, const TrainingSet& data, std::uint64_t seed) {
  spec.validate();
  HpoOutcome out;
  out.best = spec.defaults();
  out.evaluated = 1;
  if (spec.iterations <= 1) {
    // Nothing to compare against; skip the cross-validation entirely.
    out.best_score = out.default_score = kUndefinedMetric;
    return out;
  }
  const auto start = std::chrono::steady_clock::now();
  Rng rng(derive_seed(seed, {fnv1a("hpo")}));
  auto score = [&](const Hyperparams& hp) {
    try {
      return cross_validate(spec.kind, data, hp, seed);
    } catch (const NumericalFailure&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  out.default_score = out.best_score = score(out.best);
  for (std::size_t c = 1; c < spec.iterations; ++c) {
    if (spec.time_cap_seconds > 0.0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() >= spec.time_cap_seconds) break;
    }
    Hyperparams hp = spec.sample(rng);
    const double s = score(hp);
    ++out.evaluated;
    if (s > out.best_score) {
      out.best_score = s;
      out.best = std::move(hp);
    }
  }
  return out;
}

FittedModel fit_with(ModelKind kind, const TrainingSet& data, const Hyperparams& hp,
                     std::uint64_t seed, std::optional<EncodingKind> encoding) {
  std::vector<std::shared_ptr<const Regressor>> members;
  std::size_t count = 1;
  if (kind == ModelKind::kFeedforwardEnsemble) {
    auto it = hp.find("members");
    count = it == hp.end() ? 3 : std::max<std::size_t>(1, static_cast<std::size_t>(it->second));
  }
  for (std::size_t m = 0; m < count; ++m) {
    const std::uint64_t s = count == 1 ? seed : derive_seed(seed, {m});
    members.push_back(train_regressor(kind, data.x, data.y, hp, s));
  }
  return FittedModel(kind, hp, data.x.cols, encoding, std::move(members));
}

FittedModel fit(const HpoSpec& spec, const TrainingSet& data, std::uint64_t seed,
                std::optional<EncodingKind> encoding, HpoOutcome* outcome) {
  if (data.size() < min_training_rows(spec.kind)) {
    throw InsufficientData(to_string(spec.kind) + " needs at least " +
                           std::to_string(min_training_rows(spec.kind)) + " rows, got " +
                           std::to_string(data.size()));
  }
  HpoOutcome o = tune(spec, data, derive_seed(seed, {fnv1a("tune")}));
  FittedModel m = fit_with(spec.kind, data, o.best, derive_seed(seed, {fnv1a("refit")}), encoding);
  if (outcome) *outcome = std::move(o);
  return m;
}

FittedModel ensemble_fit(ModelKind kind, const TrainingSet& data, const Hyperparams& hp,
                         std::span<const std::uint64_t> seeds,
                         std::optional<EncodingKind> encoding) {
  if (seeds.empty()) throw InvalidArgument("ensemble needs at least one seed");
  if (data.size() < min_training_rows(kind)) {
    throw InsufficientData(to_string(kind) + " needs at least " +
                           std::to_string(min_training_rows(kind)) + " rows");
  }
  std::vector<std::shared_ptr<const Regressor>> members;
  for (std::uint64_t s : seeds) {
    if (kind == ModelKind::kFeedforwardEnsemble) {
      members.push_back(train_regressor(kind, data.x, data.y, hp, s));
      continue;
    }
    Rng rng(derive_seed(s, {fnv1a("bootstrap")}));
    std::vector<std::size_t> idx(data.size());
    for (auto& i : idx) i = uniform_index(rng, data.size());
    const TrainingSet boot = data.subset(idx);
    members.push_back(train_regressor(kind, boot.x, boot.y, hp, s));
  }
  return FittedModel(kind, hp, data.x.cols, encoding, std::move(members));
}

ModelPredictor::ModelPredictor(std::string name, HpoSpec hpo, EncodingKind encoding,
                               std::size_t retune_every)
    : name_(std::move(name)),
      hpo_(std::move(hpo)),
      encoding_(encoding),
      retune_every_(std::max<std::size_t>(1, retune_every)) {}

void ModelPredictor::do_initialize(const InitContext& ctx) {
  space_ = &ctx.bench->space();
  seed_ = ctx.seed;
  records_ = collect_full_trainings(ctx);
  refit(true);
}

void ModelPredictor::update(std::span<const BenchmarkRecord> new_records) {
  records_.insert(records_.end(), new_records.begin(), new_records.end());
  ++updates_;
  refit(updates_ % retune_every_ == 0);
}

void ModelPredictor::refit(bool retune) {
  const TrainingSet ts = TrainingSet::from_records(*space_, records_, encoding_);
  const std::uint64_t s = derive_seed(seed_, {updates_});
  model_.reset();
  if (retune || tuned_.empty()) {
    HpoOutcome o;
    model_.emplace(fit(hpo_, ts, s, encoding_, &o));
    tuned_ = o.best;
  } else {
    if (ts.size() < min_training_rows(hpo_.kind)) {
      throw InsufficientData(name_ + ": too few training rows");
    }
    model_.emplace(fit_with(hpo_.kind, ts, tuned_, s, encoding_));
  }
}

const FittedModel& ModelPredictor::model() const {
  if (!model_) throw InvalidArgument(name_ + ": no fitted model");
  return *model_;
}

Prediction ModelPredictor::do_query(const Architecture& arch, BudgetAccount& account) {
  Prediction p;
  const double cost = bench().cost().model_query;
  if (!account.can_afford(cost)) {
    p.degraded = true;
    return p;
  }
  account.charge(cost);
  p.score = model().predict(encode(*space_, arch, encoding_).values);
  if (!std::isfinite(p.score)) p.score = kDegenerateScore;
  return p;
}

}  // namespace predbench

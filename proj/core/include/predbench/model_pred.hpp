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

#ifndef PREDBENCH_MODEL_PRED_HPP_
#define PREDBENCH_MODEL_PRED_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/config.hpp"
#include "predbench/predictor.hpp"
#include "predbench/random.hpp"
#include "predbench/search_space.hpp"

namespace predbench {

enum class ModelKind {
  kBayesLinear,
  kGaussianProcess,
  kRandomForest,
  kGradientBoostedTrees,
  kFeedforwardEnsemble,
};

// Short names: bayes_linear, gp, rf, gbt, mlp. parse_model_kind also takes
// gaussian_process, random_forest, gradient_boosted_trees,
// feedforward_ensemble.
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
const std::vector<ModelKind>& all_model_kinds();

// 2 for the kernel/linear models, 10 for trees and networks.
std::size_t min_training_rows(ModelKind kind);

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  void push_row(std::span<const double> values);
  Matrix select_rows(std::span<const std::size_t> idx) const;
};

struct TrainingSet {
  Matrix x;
  std::vector<double> y;

  std::size_t size() const { return y.size(); }
  TrainingSet subset(std::span<const std::size_t> idx) const;
  // Rows = encodings of the records' architectures, targets = final
  // validation accuracies.
  static TrainingSet from_records(const SearchSpace& space,
                                  std::span<const BenchmarkRecord> records,
                                  EncodingKind encoding);
};

using Hyperparams = std::map<std::string, double>;

struct HpRange {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  double def = 0.0;
  bool log_scale = false;
  bool integer = false;
};

// Random-search space for one model kind plus the search limits. The first
// candidate evaluated is always the defaults.
struct HpoSpec {
  ModelKind kind = ModelKind::kGradientBoostedTrees;
  std::vector<HpRange> ranges;
  // Fixed, untuned settings (e.g. the ensemble size).
  Hyperparams fixed;
  std::size_t iterations = 200;
  // Wall-clock cap in seconds; 0 disables it. A nonzero cap makes results
  // depend on machine speed.
  double time_cap_seconds = 0.0;

  static HpoSpec defaults_for(ModelKind kind);

  Hyperparams defaults() const;
  Hyperparams sample(Rng& rng) const;
  // Ranges non-empty and defaults inside them; throws InvalidArgument.
  void validate() const;

  // Section layout:
  //   iterations = 200
  //   time_cap = 0
  //   range.<name> = <lo> <hi> <default> [log] [int]
  //   fixed.<name> = <value>
  void write(IniDocument::Section& section) const;
  // Starts from defaults_for(kind) and applies the section's overrides.
  static HpoSpec read(ModelKind kind, const IniDocument::Section& section);
};

class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual double predict(std::span<const double> x) const = 0;
};

// One model (one ensemble member for kFeedforwardEnsemble). Throws
// NumericalFailure when a kernel or normal-equation system stays singular
// after jitter escalation.
std::unique_ptr<Regressor> train_regressor(ModelKind kind, const Matrix& x,
                                           std::span<const double> y,
                                           const Hyperparams& hp, std::uint64_t seed);

struct Distribution {
  double mean = 0.0;
  double std = 0.0;
};

class FittedModel {
 public:
  FittedModel(ModelKind kind, Hyperparams hp, std::size_t feature_dim,
              std::optional<EncodingKind> encoding,
              std::vector<std::shared_ptr<const Regressor>> members);

  ModelKind kind() const { return kind_; }
  const Hyperparams& hyperparams() const { return hp_; }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t members() const { return members_.size(); }
  const std::optional<EncodingKind>& encoding() const { return encoding_; }

  // Mean over members. Throws InvalidArgument on a dimension mismatch.
  double predict(std::span<const double> features) const;
  // Mean and population standard deviation over members.
  Distribution predict_dist(std::span<const double> features) const;

  // Throws InvalidArgument when `kind` differs from the fit-time encoding.
  std::vector<Distribution> predict(const SearchSpace& space,
                                    std::span<const Architecture> archs,
                                    EncodingKind kind) const;

 private:
  ModelKind kind_;
  Hyperparams hp_;
  std::size_t feature_dim_;
  std::optional<EncodingKind> encoding_;
  std::vector<std::shared_ptr<const Regressor>> members_;
};

// Mean validation Kendall tau of `hp`: 3 folds when n >= 10, otherwise
// leave-one-out with the out-of-fold predictions pooled into one tau.
// Undefined taus count as 0. Fold assignment and member seeds depend only on
// `seed`, so different hyperparameters are compared on identical splits.
double cross_validate(ModelKind kind, const TrainingSet& data, const Hyperparams& hp,
                      std::uint64_t seed);

struct HpoOutcome {
  Hyperparams best;
  double best_score = 0.0;
  double default_score = 0.0;
  std::size_t evaluated = 0;
};

HpoOutcome tune(const HpoSpec& spec, const TrainingSet& data, std::uint64_t seed);

// Fits with fixed hyperparameters. kFeedforwardEnsemble trains
// hp["members"] networks with distinct seeds; other kinds train one model.
FittedModel fit_with(ModelKind kind, const TrainingSet& data, const Hyperparams& hp,
                     std::uint64_t seed,
                     std::optional<EncodingKind> encoding = std::nullopt);

// Random-search HPO then a refit on all rows. Throws InsufficientData below
// min_training_rows(spec.kind).
FittedModel fit(const HpoSpec& spec, const TrainingSet& data, std::uint64_t seed,
                std::optional<EncodingKind> encoding = std::nullopt,
                HpoOutcome* outcome = nullptr);

// One member per seed. Network members differ by initialization and data
// order; other kinds are fitted on a bootstrap resample drawn from the
// member seed.
FittedModel ensemble_fit(ModelKind kind, const TrainingSet& data, const Hyperparams& hp,
                         std::span<const std::uint64_t> seeds,
                         std::optional<EncodingKind> encoding = std::nullopt);

// Model-based predictor: fully trains architectures from the training source
// within the init budget, fits, and scores queries with the model.
class ModelPredictor : public Predictor {
 public:
  ModelPredictor(std::string name, HpoSpec hpo, EncodingKind encoding,
                 std::size_t retune_every = 5);

  std::string name() const override { return name_; }
  bool uses_init_budget() const override { return true; }

  // Appends records, refits; HPO re-runs on every `retune_every`-th update.
  void update(std::span<const BenchmarkRecord> new_records) override;

  const FittedModel& model() const;
  std::size_t training_rows() const { return records_.size(); }

 protected:
  void do_initialize(const InitContext& ctx) override;
  Prediction do_query(const Architecture& arch, BudgetAccount& account) override;

 private:
  void refit(bool retune);

  std::string name_;
  HpoSpec hpo_;
  EncodingKind encoding_;
  std::size_t retune_every_;
  const SearchSpace* space_ = nullptr;
  std::uint64_t seed_ = 0;
  std::size_t updates_ = 0;
  std::vector<BenchmarkRecord> records_;
  Hyperparams tuned_;
  std::optional<FittedModel> model_;
};

}  // namespace predbench

#endif  // PREDBENCH_MODEL_PRED_HPP_

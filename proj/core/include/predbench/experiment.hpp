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

#ifndef PREDBENCH_EXPERIMENT_HPP_
#define PREDBENCH_EXPERIMENT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/metrics.hpp"
#include "predbench/predictor.hpp"

namespace predbench {

// n values from lo to hi, evenly spaced in log space (lo, hi > 0).
std::vector<double> log_space(double lo, double hi, std::size_t n);

// Budgets in epoch-equivalents.
struct BudgetGrid {
  std::vector<double> init_levels;
  std::vector<double> query_levels;

  // 11 x 14: init = 0 plus 10 levels from 10 to 300 full trainings, query =
  // 14 levels from `min_query` to E epochs.
  static BudgetGrid default_for(std::size_t epochs, double epoch_cost = 1.0,
                                double min_query = 0.05);

  std::size_t cells() const { return init_levels.size() * query_levels.size(); }
  // Non-empty, non-negative, strictly increasing; throws InvalidArgument.
  void validate() const;
};

using PredictorFactory = std::function<std::unique_ptr<Predictor>()>;

struct NamedFactory {
  std::string name;
  PredictorFactory make;
};

enum class Protocol { kUniform, kMutation };
std::string to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

struct MutationConfig {
  std::size_t pool = 50;
  std::size_t seeds = 5;
  std::size_t test_size = 200;
  std::size_t max_attrs = 3;
  // Draw attempts allowed per requested architecture before giving up.
  std::size_t retries_per_arch = 200;
};

struct MutationSets {
  std::vector<Architecture> seeds;
  std::vector<Architecture> test;
  std::vector<Architecture> train;
};

// Seeds = the best `seeds` of `pool` random store architectures; test =
// distinct mutations (up to max_attrs edges) of the seeds; train = `n_train`
// distinct single-edge mutations of test architectures, disjoint from test.
// Only the store's records are read (for seed selection); mutated
// architectures are trained on demand when a predictor queries them. Throws
// ProtocolFailure when the retry bound is hit.
MutationSets mutation_protocol(const Benchmark& bench, std::uint64_t seed,
                               std::size_t n_train, const MutationConfig& config = {});

struct GridOptions {
  std::size_t test_size = 200;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  Protocol protocol = Protocol::kUniform;
  MutationConfig mutation;
  double sparse_resolution = 0.001;
};

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t trials = 0;
  // Trials where the predictor threw; they enter the mean as 0.
  std::size_t failures = 0;
  // Trials where the metric was undefined; they enter the mean as 0.
  std::size_t undefined = 0;
};

class ResultGrid {
 public:
  ResultGrid() = default;
  ResultGrid(std::vector<std::string> predictors, BudgetGrid grid);

  const std::vector<std::string>& predictors() const { return predictors_; }
  const BudgetGrid& grid() const { return grid_; }

  MetricStats& at(std::size_t p, std::size_t i, std::size_t q, MetricKind m);
  const MetricStats& at(std::size_t p, std::size_t i, std::size_t q, MetricKind m) const;
  std::size_t predictor_index(std::string_view name) const;

  // Header: predictor,init_budget,query_budget,metric,mean,std,trials,failures
  std::string to_csv() const;
  static ResultGrid from_csv(std::string_view text);

 private:
  std::vector<std::string> predictors_;
  BudgetGrid grid_;
  std::vector<MetricStats> stats_;
};

// Per trial: one test set and one training order, shared by every predictor
// and every budget cell of the trial. Predictors that ignore the init budget
// are initialized once per trial; ones whose initialization ignores the query
// budget are reused across query levels. Each query gets a fresh account of
// the cell's query budget. Deterministic in options.seed for any thread
// count.
ResultGrid run_grid(const Benchmark& bench, const std::vector<NamedFactory>& predictors,
                    const BudgetGrid& grid, const GridOptions& options);

struct ParetoResult {
  // winner[i][q] = index into the grid's predictor list.
  std::vector<std::vector<std::size_t>> winner;
  std::vector<std::string> pareto_set;  // sorted by name

  // Header: init_budget,query_budget,best_predictor,mean
  std::string to_csv(const ResultGrid& grid, MetricKind metric) const;
};

// Per-cell argmax of the mean metric; ties go to the lexicographically
// smallest predictor name. The Pareto set holds every cell winner.
ParetoResult pareto_best(const ResultGrid& grid, MetricKind metric);

struct SeedVarianceOptions {
  std::size_t fixed_trials = 10;
  std::size_t redraws = 50;
  double init_budget = 0.0;
  double query_budget = 0.0;
  std::size_t test_size = 200;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct SeedVariance {
  double overall_std = 0.0;  // over all redraws x fixed trials
  double fixed_std = 0.0;    // std over fixed trials, averaged over redraws
};

// Kendall-tau spread from predictor randomness (fixed train/test sets, new
// predictor seeds) versus from redrawing the sets.
SeedVariance seed_variance(const Benchmark& bench, const PredictorFactory& factory,
                           const SeedVarianceOptions& options);

}  // namespace predbench

#endif  // PREDBENCH_EXPERIMENT_HPP_

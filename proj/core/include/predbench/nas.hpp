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

#ifndef PREDBENCH_NAS_HPP_
#define PREDBENCH_NAS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/experiment.hpp"
#include "predbench/model_pred.hpp"

namespace predbench {

enum class NasFramework { kEvolution, kBoIts };
std::string to_string(NasFramework f);
NasFramework parse_nas_framework(std::string_view name);

struct NasRunConfig {
  NasFramework framework = NasFramework::kEvolution;
  std::size_t initial_population = 10;
  std::size_t iterations = 25;
  // Evolution.
  std::size_t elite = 5;
  std::size_t mutations_per_elite = 40;
  std::size_t k = 20;
  // BO with independent Thompson sampling.
  std::size_t pool = 200;
  std::size_t select = 20;
  std::size_t members = 3;
  // HPO re-runs on every `retune_every`-th refit.
  std::size_t retune_every = 5;
  // Query budget handed to the predictor for each candidate it scores.
  double query_budget = 0.0;
  std::uint64_t seed = 0;

  // Counts >= 1, select <= pool; throws InvalidArgument.
  void validate() const;
};

struct NasStep {
  std::size_t step = 0;
  double cost = 0.0;            // cumulative simulated cost after this evaluation
  double best_val_error = 1.0;  // 1 - best final validation accuracy so far
  Architecture arch;            // architecture evaluated at this step
};

struct NasTrace {
  std::vector<NasStep> steps;
  // Total spent on predictor queries (included in the step costs).
  double query_cost = 0.0;
  // Iterations whose selection fell back to random order.
  std::size_t fallbacks = 0;

  double final_error() const { return steps.empty() ? 1.0 : steps.back().best_val_error; }
  // Best error among steps whose cost does not exceed `cost`.
  double best_error_at(double cost) const;
  // Header: seed,step,cost,best_val_error
  std::string to_csv(std::uint64_t seed, bool header = true) const;
};

using NasLog = std::function<void(const std::string&)>;

// Predictor-guided evolution. Each iteration refits the predictor on the
// whole evaluated population, mutates the `elite` best architectures
// `mutations_per_elite` times each (one edge per mutation), scores the unseen
// candidates and fully evaluates the top k. If fewer than k unseen candidates
// exist, other population members are mutated in rank order, then random
// architectures top up the pool. A predictor that fails to fit or query makes
// that iteration pick candidates in random order (logged).
NasTrace run_evolution(const Benchmark& bench, const PredictorFactory& factory,
                       const NasRunConfig& config, const NasLog& log = {});

// Surrogate returning a predictive distribution per pool architecture, given
// the evaluated population. `refit_index` counts calls from 0.
using NasSurrogate = std::function<std::vector<Distribution>(
    std::span<const BenchmarkRecord> population, std::span<const Architecture> pool,
    std::size_t refit_index)>;

// Ensemble surrogate over `kind`: members = config.members fitted with
// distinct seeds (bootstrap resamples for non-network kinds). HPO runs on
// every `retune_every`-th refit.
NasSurrogate make_ensemble_surrogate(const SearchSpace& space, const HpoSpec& spec,
                                     EncodingKind encoding, const NasRunConfig& config);

// BO with independent Thompson sampling: each iteration draws one
// Normal(mean, std) sample per pool architecture and evaluates the `select`
// highest draws. Zero std everywhere reduces to mean ranking (logged).
NasTrace run_bo_its(const Benchmark& bench, const NasSurrogate& surrogate,
                    const NasRunConfig& config, const NasLog& log = {});

}  // namespace predbench

#endif  // PREDBENCH_NAS_HPP_

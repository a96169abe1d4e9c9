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

// Predictor-guided search against random-guided search.

#include <algorithm>
#include <cmath>
#include <map>

#include "acceptance.hpp"
#include "predbench/nas.hpp"
#include "predbench/registry.hpp"

namespace acceptance {

using namespace predbench;

namespace {

constexpr std::size_t kSeeds = 100;

// P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(std::size_t wins, std::size_t n) {
  long double p = 0.0L;
  for (std::size_t k = wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L) -
                  static_cast<long double>(n) * std::log(2.0L));
  }
  return static_cast<double>(p);
}

struct Paired {
  double mean_a = 0.0, mean_b = 0.0;
  std::size_t a_better = 0, b_better = 0;
};

// Each seed is compared at the smaller of the two runs' final costs.
Paired compare(const std::vector<NasTrace>& a, const std::vector<NasTrace>& b) {
  Paired r;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const double cost = std::min(a[s].steps.back().cost, b[s].steps.back().cost);
    const double ea = a[s].best_error_at(cost), eb = b[s].best_error_at(cost);
    r.mean_a += ea / static_cast<double>(a.size());
    r.mean_b += eb / static_cast<double>(a.size());
    r.a_better += ea < eb;
    r.b_better += eb < ea;
  }
  return r;
}

std::string select_grid_best(const Benchmark& bench, PredictorOptions& po, std::size_t threads) {
  std::vector<NamedFactory> fs;
  for (const auto& name : predictor_names()) {
    if (predictor_family(name) == "baseline") continue;
    fs.push_back({name, [name, &po] { return make_predictor(name, po); }});
  }
  const double full = static_cast<double>(bench.epochs()) * bench.cost().epoch_cost;
  BudgetGrid bg;
  for (double n : {10.0, 30.0, 100.0, 300.0}) bg.init_levels.push_back(n * full);
  bg.query_levels = {bench.cost().zero_cost_query};
  GridOptions o;
  o.trials = 20;
  o.seed = 8;
  o.threads = threads;
  const ResultGrid grid = run_grid(bench, fs, bg, o);
  const ParetoResult pareto = pareto_best(grid, MetricKind::kKendallTau);
  std::map<std::string, std::size_t> wins;
  for (const auto& row : pareto.winner) {
    for (std::size_t p : row) ++wins[grid.predictors()[p]];
  }
  // std::map iterates by name, so ties go to the smaller name.
  std::string best;
  std::size_t most = 0;
  for (const auto& [name, w] : wins) {
    if (w > most) {
      best = name;
      most = w;
    }
  }
  return best;
}

}  // namespace

Outcome nas_transfer(Context& ctx) {
  PredictorOptions po;
  po.hpo_iterations = 1;
  po.zero_cost_cache = std::make_shared<ZeroCostCache>();
  po.lce_cache = std::make_shared<LceCache>();

  const std::string chosen = select_grid_best(Benchmark(ctx.store()), po, ctx.threads);

  const Benchmark bench(ctx.store(), true);
  auto run_all = [&](const std::string& name) {
    std::vector<NasTrace> traces;
    for (std::size_t s = 0; s < kSeeds; ++s) {
      NasRunConfig c;
      c.seed = s;
      c.query_budget = bench.cost().zero_cost_query;
      traces.push_back(run_evolution(bench, [&] { return make_predictor(name, po); }, c));
    }
    return traces;
  };

  const auto guided = run_all(chosen);
  const auto random = run_all("random");
  const Paired vs_random = compare(guided, random);
  const std::size_t n = vs_random.a_better + vs_random.b_better;
  const double p = sign_test_p(vs_random.a_better, n);
  const bool transfer = vs_random.mean_a < vs_random.mean_b && p < 0.05;

  const auto omni = run_all("omni");
  const auto gbt = run_all("gbt");
  const Paired vs_gbt = compare(omni, gbt);
  const bool hybrid = vs_gbt.mean_a <= vs_gbt.mean_b + 0.005;

  return {transfer && hybrid,
          cat("grid-best ", chosen, " mean error ", vs_random.mean_a, " vs random ",
              vs_random.mean_b, ", better on ", vs_random.a_better, " worse on ",
              vs_random.b_better, " of ", kSeeds, " seeds, sign test p = ", p,
              "; omni ", vs_gbt.mean_a, " vs gbt ", vs_gbt.mean_b, " (allowed +0.005); ",
              bench.trained_on_demand(), " architectures trained on demand")};
}

}  // namespace acceptance

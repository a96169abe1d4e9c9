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


#include <algorithm>
#include <set>

#include "doctest.h"
#include "predbench/error.hpp"
#include "predbench/nas.hpp"
#include "predbench/registry.hpp"
#include "support.hpp"

using namespace predbench;

namespace {

constexpr double kE = 12.0;

NasRunConfig small_evolution(std::uint64_t seed) {
  NasRunConfig c;
  c.iterations = 3;
  c.mutations_per_elite = 6;
  c.k = 5;
  c.seed = seed;
  return c;
}

class BrokenPredictor : public Predictor {
 public:
  std::string name() const override { return "broken"; }

 protected:
  void do_initialize(const InitContext&) override { throw NumericalFailure("no fit"); }
  Prediction do_query(const Architecture&, BudgetAccount&) override { return {}; }
};

void check_anytime(const NasTrace& t) {
  for (std::size_t i = 1; i < t.steps.size(); ++i) {
    CHECK(t.steps[i].best_val_error <= t.steps[i - 1].best_val_error);
    CHECK(t.steps[i].cost > t.steps[i - 1].cost);
    CHECK(t.steps[i].step == i);
  }
}

}  // namespace

TEST_CASE("framework names and config checks") {
  CHECK(parse_nas_framework("evolution") == NasFramework::kEvolution);
  CHECK(parse_nas_framework(to_string(NasFramework::kBoIts)) == NasFramework::kBoIts);
  CHECK_THROWS_AS(parse_nas_framework("rl"), InvalidArgument);
  NasRunConfig c;
  CHECK_NOTHROW(c.validate());
  c.select = c.pool + 1;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("evolution trace shape and cost") {
  const Benchmark bench(unit::small_store(), true);
  PredictorOptions po;
  po.hpo_iterations = 2;
  const NasRunConfig c = small_evolution(3);
  const NasTrace t = run_evolution(bench, [&] { return make_predictor("gbt", po); }, c);
  CHECK(t.steps.size() == c.iterations * c.k + c.initial_population);
  check_anytime(t);
  CHECK(t.fallbacks == 0);
  CHECK(t.query_cost == 0.0);
  for (std::size_t i = 1; i < t.steps.size(); ++i) {
    CHECK(t.steps[i].cost - t.steps[i - 1].cost == doctest::Approx(kE));
  }
  std::set<Architecture> seen;
  for (const auto& s : t.steps) CHECK(seen.insert(s.arch).second);

  const NasTrace again = run_evolution(bench, [&] { return make_predictor("gbt", po); }, c);
  CHECK(again.to_csv(3) == t.to_csv(3));
  CHECK(t.to_csv(3).rfind("seed,step,cost,best_val_error\n", 0) == 0);
  CHECK(t.to_csv(3, false).rfind("3,0,", 0) == 0);
  CHECK(t.best_error_at(t.steps.back().cost) == t.final_error());
  CHECK(t.best_error_at(t.steps[4].cost) == t.steps[4].best_val_error);
  CHECK(t.best_error_at(0.0) == 1.0);
}

TEST_CASE("query costs enter the trace") {
  const Benchmark bench(unit::small_store(), true);
  PredictorOptions po;
  NasRunConfig c = small_evolution(4);
  c.query_budget = 0.05;
  const NasTrace t = run_evolution(bench, [&] { return make_predictor("synflow", po); }, c);
  CHECK(t.query_cost > 0.0);
  check_anytime(t);
  CHECK(t.steps.back().cost ==
        doctest::Approx(static_cast<double>(t.steps.size()) * kE + t.query_cost));
}

TEST_CASE("failing predictors fall back to random selection") {
  const Benchmark bench(unit::small_store(), true);
  std::vector<std::string> lines;
  const NasRunConfig c = small_evolution(5);
  const NasTrace t = run_evolution(
      bench, [] { return std::make_unique<BrokenPredictor>(); }, c,
      [&](const std::string& s) { lines.push_back(s); });
  CHECK(t.fallbacks == c.iterations);
  CHECK(lines.size() == c.iterations);
  CHECK(t.steps.size() == c.iterations * c.k + c.initial_population);
}

TEST_CASE("oracle guidance beats random selection after one iteration") {
  const Benchmark bench(unit::small_store(), true);
  PredictorOptions po;
  NasRunConfig c = small_evolution(0);
  c.iterations = 1;
  double oracle = 0.0, random = 0.0;
  const std::size_t seeds = 30;
  for (std::size_t s = 0; s < seeds; ++s) {
    c.seed = s;
    oracle += run_evolution(bench, [&] { return make_predictor("oracle", po); }, c).final_error();
    random += run_evolution(bench, [&] { return make_predictor("random", po); }, c).final_error();
  }
  CHECK(oracle < random);
}

TEST_CASE("thompson sampling with a zero-spread oracle is greedy") {
  const Benchmark bench(unit::small_store(), true);
  NasRunConfig c;
  c.framework = NasFramework::kBoIts;
  c.iterations = 2;
  c.pool = 30;
  c.select = 6;
  c.seed = 2;
  std::vector<std::vector<Architecture>> pools;
  auto truth = [&](const Architecture& a) {
    BudgetAccount acc(1e9);
    return bench.query_full(a, acc).final_val_acc();
  };
  std::vector<std::string> lines;
  const NasTrace t = run_bo_its(
      bench,
      [&](std::span<const BenchmarkRecord>, std::span<const Architecture> pool, std::size_t) {
        pools.emplace_back(pool.begin(), pool.end());
        std::vector<Distribution> out;
        for (const auto& a : pool) out.push_back({truth(a), 0.0});
        return out;
      },
      c, [&](const std::string& s) { lines.push_back(s); });
  REQUIRE(pools.size() == 2);
  CHECK(lines.size() == 2);
  CHECK(t.steps.size() == c.initial_population + 2 * c.select);
  check_anytime(t);
  for (std::size_t it = 0; it < 2; ++it) {
    std::vector<double> acc;
    for (const auto& a : pools[it]) acc.push_back(truth(a));
    std::sort(acc.rbegin(), acc.rend());
    const double cut = acc[c.select - 1];
    const std::size_t first = c.initial_population + it * c.select;
    double chosen_sum = 0.0;
    for (std::size_t i = first; i < first + c.select; ++i) {
      CHECK(truth(t.steps[i].arch) >= cut);
      CHECK(t.steps[i].cost - t.steps[i - 1].cost == doctest::Approx(kE));
      chosen_sum += truth(t.steps[i].arch);
    }
    double top_sum = 0.0;
    for (std::size_t i = 0; i < c.select; ++i) top_sum += acc[i];
    CHECK(chosen_sum == doctest::Approx(top_sum));
  }
}

TEST_CASE("ensemble surrogate runs bo") {
  const Benchmark bench(unit::small_store(), true);
  NasRunConfig c;
  c.framework = NasFramework::kBoIts;
  c.iterations = 2;
  c.pool = 40;
  c.select = 5;
  c.seed = 9;
  HpoSpec spec = HpoSpec::defaults_for(ModelKind::kGradientBoostedTrees);
  spec.iterations = 2;
  auto surrogate = make_ensemble_surrogate(bench.space(), spec, EncodingKind::kAdjacencyOneHot, c);
  const NasTrace t = run_bo_its(bench, surrogate, c);
  CHECK(t.fallbacks == 0);
  CHECK(t.steps.size() == 20);
  check_anytime(t);
  auto surrogate2 = make_ensemble_surrogate(bench.space(), spec, EncodingKind::kAdjacencyOneHot, c);
  CHECK(run_bo_its(bench, surrogate2, c).to_csv(9) == t.to_csv(9));
}

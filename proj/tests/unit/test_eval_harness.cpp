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
#include <cmath>
#include <set>

#include "doctest.h"
#include "predbench/error.hpp"
#include "predbench/experiment.hpp"
#include "predbench/metrics.hpp"
#include "predbench/registry.hpp"
#include "support.hpp"

using namespace predbench;

namespace {

// Straight pair enumeration with the tau-b denominator.
double brute_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  double c = 0, d = 0, tx = 0, ty = 0, n0 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++n0;
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0) ++tx;
      if (b == 0) ++ty;
      if (a * b > 0) ++c;
      if (a * b < 0) ++d;
    }
  }
  return (c - d) / std::sqrt((n0 - tx) * (n0 - ty));
}

class ThrowingPredictor : public Predictor {
 public:
  std::string name() const override { return "throws"; }

 protected:
  void do_initialize(const InitContext&) override { throw NumericalFailure("always"); }
  Prediction do_query(const Architecture&, BudgetAccount&) override { return {}; }
};

std::vector<NamedFactory> factories(std::vector<std::string> names, PredictorOptions& po) {
  std::vector<NamedFactory> out;
  for (auto& n : names) out.push_back({n, [n, &po] { return make_predictor(n, po); }});
  return out;
}

GridOptions small_options(std::size_t trials, std::uint64_t seed) {
  GridOptions o;
  o.test_size = 50;
  o.trials = trials;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("metric examples") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  for (MetricKind m : all_metric_kinds()) CHECK(compute_metrics(a, a)[static_cast<int>(m)] == doctest::Approx(1.0));
  const std::vector<double> r = {5, 4, 3, 2, 1};
  CHECK(kendall_tau(r, a) == -1.0);
  CHECK(kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(spearman(std::vector<double>{1, 2, 2}, std::vector<double>{1, 2, 3}) ==
        doctest::Approx(1.5 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(std::abs(spearman(std::vector<double>{1, 2, 2}, std::vector<double>{1, 2, 3}) - 0.8660) < 1e-4);
  CHECK(average_ranks(std::vector<double>{3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("undefined and invalid inputs") {
  const std::vector<double> flat = {2, 2, 2};
  const std::vector<double> up = {1, 2, 3};
  CHECK(is_undefined(pearson(flat, up)));
  CHECK(is_undefined(spearman(up, flat)));
  CHECK(is_undefined(kendall_tau(flat, up)));
  CHECK(is_undefined(sparse_kendall_tau(up, std::vector<double>{0.1, 0.1001, 0.1002})));
  CHECK_THROWS_AS(kendall_tau(up, std::vector<double>{1, 2}), InvalidArgument);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), InvalidArgument);
  CHECK_THROWS_AS(sparse_kendall_tau(up, up, 0.0), InvalidArgument);
  for (MetricKind m : all_metric_kinds()) CHECK(parse_metric_kind(to_string(m)) == m);
}

TEST_CASE("kendall tau matches pair enumeration with ties") {
  Rng rng(31);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + uniform_index(rng, 49);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 6));
    for (auto& v : y) v = static_cast<double>(uniform_index(rng, 6));
    const double want = brute_tau_b(x, y);
    const double got = kendall_tau(x, y);
    if (std::isnan(want)) {
      CHECK(is_undefined(got));
    } else {
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("rank metrics ignore increasing transforms") {
  Rng rng(8);
  std::vector<double> x(40), y(40), ex(40), ax(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = uniform01(rng) * 4 - 2;
    y[i] = x[i] + 0.5 * uniform01(rng);
    ex[i] = std::exp(x[i]);
    ax[i] = 3.0 * x[i] + 7.0;
  }
  CHECK(spearman(ex, y) == spearman(x, y));
  CHECK(kendall_tau(ex, y) == kendall_tau(x, y));
  CHECK(sparse_kendall_tau(ex, y) == sparse_kendall_tau(x, y));
  CHECK(spearman(ax, y) == spearman(x, y));
  CHECK(kendall_tau(ax, y) == kendall_tau(x, y));
  CHECK(pearson(ax, y) == doctest::Approx(pearson(x, y)).epsilon(1e-12));
  CHECK(sparse_kendall_tau(x, y, 1e-12) == kendall_tau(x, y));
}

TEST_CASE("degenerate scores rank at the bottom") {
  const std::vector<double> s = {0.3, kDegenerateScore, -2.0, 5.0};
  const auto clean = sanitize_scores(s);
  CHECK(clean[1] < -2.0);
  CHECK(std::isfinite(clean[1]));
  CHECK(clean[0] == 0.3);
  const std::vector<double> all = {kDegenerateScore, kDegenerateScore};
  CHECK(sanitize_scores(all) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("budget grid shape") {
  const auto ls = log_space(1.0, 1000.0, 4);
  CHECK(ls[0] == doctest::Approx(1.0));
  CHECK(ls[1] == doctest::Approx(10.0));
  CHECK(ls[3] == doctest::Approx(1000.0));
  const BudgetGrid g = BudgetGrid::default_for(50);
  CHECK(g.init_levels.size() == 11);
  CHECK(g.query_levels.size() == 14);
  CHECK(g.cells() == 154);
  CHECK(g.init_levels.front() == 0.0);
  CHECK(g.init_levels[1] == doctest::Approx(10 * 50.0));
  CHECK(g.init_levels.back() == doctest::Approx(300 * 50.0));
  CHECK(g.query_levels.front() == doctest::Approx(0.05));
  CHECK(g.query_levels.back() == doctest::Approx(50.0));
  CHECK_NOTHROW(g.validate());
  CHECK(std::is_sorted(g.query_levels.begin(), g.query_levels.end()));
  BudgetGrid bad = g;
  bad.query_levels[2] = bad.query_levels[1];
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = g;
  bad.init_levels.clear();
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("grid runs: oracle, zero-cost columns, failures, determinism") {
  const auto& store = unit::small_store();
  const Benchmark bench(store);
  PredictorOptions po;
  auto preds = factories({"oracle", "random", "synflow", "sotl_e"}, po);
  preds.push_back({"throws", [] { return std::make_unique<ThrowingPredictor>(); }});
  const BudgetGrid grid{{0.0, 24.0, 60.0}, {0.05, 3.0, 12.0}};
  const ResultGrid r = run_grid(bench, preds, grid, small_options(5, 3));

  const std::size_t oracle = r.predictor_index("oracle");
  const std::size_t syn = r.predictor_index("synflow");
  const std::size_t thr = r.predictor_index("throws");
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t q = 0; q < 3; ++q) {
      CHECK(r.at(oracle, i, q, MetricKind::kKendallTau).mean == 1.0);
      CHECK(r.at(oracle, i, q, MetricKind::kKendallTau).std == 0.0);
      for (std::size_t p = 0; p < r.predictors().size(); ++p) {
        CHECK(r.at(p, i, q, MetricKind::kSpearman).trials == 5);
      }
      CHECK(r.at(syn, i, q, MetricKind::kKendallTau).mean ==
            r.at(syn, 0, 0, MetricKind::kKendallTau).mean);
      CHECK(r.at(thr, i, q, MetricKind::kKendallTau).failures == 5);
      CHECK(r.at(thr, i, q, MetricKind::kKendallTau).mean == 0.0);
    }
  }
  CHECK(r.at(r.predictor_index("sotl_e"), 0, 2, MetricKind::kKendallTau).mean >
        r.at(r.predictor_index("sotl_e"), 0, 0, MetricKind::kKendallTau).mean);
  CHECK_THROWS_AS(r.predictor_index("nope"), NotFound);

  GridOptions two = small_options(5, 3);
  two.threads = 2;
  CHECK(run_grid(bench, preds, grid, two).to_csv() == r.to_csv());
  CHECK(run_grid(bench, preds, grid, small_options(5, 4)).to_csv() != r.to_csv());

  const ResultGrid back = ResultGrid::from_csv(r.to_csv());
  CHECK(back.to_csv() == r.to_csv());
  CHECK(back.predictors() == r.predictors());
  CHECK(back.grid().query_levels == grid.query_levels);
}

TEST_CASE("pareto extraction") {
  const BudgetGrid grid{{0.0, 10.0}, {1.0, 2.0}};
  ResultGrid r({"b", "a", "c"}, grid);
  const MetricKind m = MetricKind::kKendallTau;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t q = 0; q < 2; ++q) {
      r.at(0, i, q, m).mean = 0.5;
      r.at(1, i, q, m).mean = 0.5;
      r.at(2, i, q, m).mean = 0.1;
    }
  }
  r.at(0, 1, 1, m).mean = 0.9;
  const ParetoResult p = pareto_best(r, m);
  CHECK(p.winner[0][0] == 1);
  CHECK(p.winner[1][1] == 0);
  CHECK(p.pareto_set == std::vector<std::string>{"a", "b"});
  const std::string csv = p.to_csv(r, m);
  CHECK(csv.rfind("init_budget,query_budget,best_predictor,mean\n", 0) == 0);
  CHECK(csv.find(",b,0.9") != std::string::npos);

  ResultGrid solo({"only"}, grid);
  const ParetoResult s = pareto_best(solo, m);
  CHECK(s.pareto_set == std::vector<std::string>{"only"});
}

TEST_CASE("mutation protocol sets") {
  const auto& store = unit::small_store();
  const Benchmark bench(store, true);
  MutationConfig cfg;
  cfg.test_size = 60;
  const MutationSets sets = mutation_protocol(bench, 5, 40, cfg);
  CHECK(sets.seeds.size() == 5);
  CHECK(sets.test.size() == 60);
  CHECK(sets.train.size() == 40);

  std::set<Architecture> test(sets.test.begin(), sets.test.end());
  CHECK(test.size() == sets.test.size());
  for (const auto& t : sets.test) {
    std::size_t best = 99;
    for (const auto& s : sets.seeds) best = std::min(best, edit_distance(t, s));
    CHECK(best <= 3);
  }
  std::set<Architecture> train(sets.train.begin(), sets.train.end());
  CHECK(train.size() == sets.train.size());
  for (const auto& a : sets.train) {
    CHECK(test.count(a) == 0);
    bool one = false;
    for (const auto& t : sets.test) one = one || edit_distance(a, t) == 1;
    CHECK(one);
  }
  const MutationSets again = mutation_protocol(bench, 5, 40, cfg);
  CHECK(again.test == sets.test);
  CHECK(again.train == sets.train);

  MutationConfig tight = cfg;
  tight.max_attrs = 1;
  tight.test_size = 200;
  tight.retries_per_arch = 5;
  CHECK_THROWS_AS(mutation_protocol(bench, 5, 10, tight), ProtocolFailure);
}

TEST_CASE("seed variance") {
  const auto& store = unit::small_store();
  const Benchmark bench(store);
  PredictorOptions po;
  SeedVarianceOptions o;
  o.fixed_trials = 4;
  o.redraws = 4;
  o.test_size = 40;
  o.query_budget = 0.05;
  o.seed = 2;
  const SeedVariance oracle = seed_variance(bench, [&] { return make_predictor("oracle", po); }, o);
  CHECK(oracle.overall_std == 0.0);
  CHECK(oracle.fixed_std == 0.0);
  const SeedVariance syn = seed_variance(bench, [&] { return make_predictor("synflow", po); }, o);
  CHECK(syn.fixed_std < 1e-9);
  CHECK(syn.overall_std > 0.0);
  const SeedVariance rnd = seed_variance(bench, [&] { return make_predictor("random", po); }, o);
  CHECK(rnd.fixed_std > 0.0);
}

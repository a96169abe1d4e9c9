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

#include "predbench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "predbench/error.hpp"
#include "predbench/parallel.hpp"
#include "predbench/random.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

struct TrialData {
  std::vector<Architecture> test;
  std::vector<Architecture> train_order;
  std::vector<double> truth;
};

TrialData uniform_split(const Benchmark& bench, std::size_t test_size, std::uint64_t seed) {
  const auto& records = bench.store().records();
  if (records.size() < test_size + 1) {
    throw InvalidArgument("store holds " + std::to_string(records.size()) +
                          " architectures; need more than the test size " +
                          std::to_string(test_size));
  }
  std::vector<Architecture> all;
  all.reserve(records.size());
  for (const auto& r : records) all.push_back(r.arch);
  Rng rng(derive_seed(seed, {fnv1a("split")}));
  std::shuffle(all.begin(), all.end(), rng);
  TrialData t;
  t.test.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(test_size));
  t.train_order.assign(all.begin() + static_cast<std::ptrdiff_t>(test_size), all.end());
  return t;
}

void fill_truth(const Benchmark& bench, TrialData& t) {
  t.truth.clear();
  for (const auto& a : t.test) t.truth.push_back(bench.record(a).final_val_acc());
}

std::unique_ptr<Predictor> initialized(const NamedFactory& f, const Benchmark& bench,
                                       const std::vector<Architecture>& train_order,
                                       double init_budget, double query_budget,
                                       std::uint64_t seed,
                                       std::unique_ptr<Predictor> reuse = nullptr) {
  auto pred = reuse ? std::move(reuse) : f.make();
  BudgetAccount account(init_budget);
  ListSource source(train_order);
  InitContext ctx{&bench, &account, query_budget, &source, seed};
  pred->initialize(ctx);
  return pred;
}

std::vector<double> score_all(Predictor& pred, const std::vector<Architecture>& test,
                              double query_budget) {
  BudgetLedger ledger(0.0, query_budget);
  std::vector<double> scores;
  scores.reserve(test.size());
  for (const auto& a : test) scores.push_back(pred.query(a, ledger.begin_query()).score);
  return scores;
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw InvalidArgument("log_space needs 0 < lo <= hi and n >= 1");
  }
  std::vector<double> v(n);
  if (n == 1) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

BudgetGrid BudgetGrid::default_for(std::size_t epochs, double epoch_cost, double min_query) {
  const double full = static_cast<double>(epochs) * epoch_cost;
  BudgetGrid g;
  g.init_levels.push_back(0.0);
  for (double v : log_space(10.0 * full, 300.0 * full, 10)) g.init_levels.push_back(v);
  g.query_levels = log_space(min_query, full, 14);
  return g;
}

void BudgetGrid::validate() const {
  auto check = [](const std::vector<double>& v, const char* what) {
    if (v.empty()) throw InvalidArgument(std::string(what) + " levels are empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
        throw InvalidArgument(std::string(what) + " levels must be finite and >= 0");
      }
      if (i > 0 && !(v[i] > v[i - 1])) {
        throw InvalidArgument(std::string(what) + " levels must be strictly increasing");
      }
    }
  };
  check(init_levels, "init");
  check(query_levels, "query");
}

std::string to_string(Protocol p) { return p == Protocol::kUniform ? "uniform" : "mutation"; }

Protocol parse_protocol(std::string_view name) {
  if (name == "uniform") return Protocol::kUniform;
  if (name == "mutation") return Protocol::kMutation;
  throw InvalidArgument("unknown protocol '" + std::string(name) + "'");
}

MutationSets mutation_protocol(const Benchmark& bench, std::uint64_t seed,
                               std::size_t n_train, const MutationConfig& config) {
  const auto& records = bench.store().records();
  if (config.seeds < 1 || config.seeds > config.pool || records.size() < config.pool) {
    throw InvalidArgument("mutation protocol needs 1 <= seeds <= pool <= store size");
  }
  Rng rng(seed);
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < config.pool; ++i) {
    std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
  }
  idx.resize(config.pool);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return records[a].final_val_acc() > records[b].final_val_acc();
  });
  MutationSets out;
  for (std::size_t i = 0; i < config.seeds; ++i) out.seeds.push_back(records[idx[i]].arch);

  const SearchSpace& space = bench.space();
  std::unordered_set<Architecture> test_set;
  std::size_t attempts = 0;
  while (out.test.size() < config.test_size) {
    if (++attempts > config.retries_per_arch * config.test_size) {
      throw ProtocolFailure("could not draw " + std::to_string(config.test_size) +
                            " distinct mutated test architectures");
    }
    const Architecture& parent = out.seeds[uniform_index(rng, out.seeds.size())];
    Architecture child = mutate(space, parent, config.max_attrs, rng);
    if (test_set.insert(child).second) out.test.push_back(std::move(child));
  }

  std::unordered_set<Architecture> train_set;
  attempts = 0;
  while (out.train.size() < n_train) {
    if (++attempts > config.retries_per_arch * std::max<std::size_t>(n_train, 1)) {
      throw ProtocolFailure("could not draw " + std::to_string(n_train) +
                            " training architectures disjoint from the test set");
    }
    const Architecture& parent = out.test[uniform_index(rng, out.test.size())];
    Architecture child = mutate(space, parent, 1, rng);
    if (test_set.count(child) || !train_set.insert(child).second) continue;
    out.train.push_back(std::move(child));
  }
  return out;
}

ResultGrid::ResultGrid(std::vector<std::string> predictors, BudgetGrid grid)
    : predictors_(std::move(predictors)), grid_(std::move(grid)) {
  stats_.resize(predictors_.size() * grid_.cells() * kNumMetrics);
}

MetricStats& ResultGrid::at(std::size_t p, std::size_t i, std::size_t q, MetricKind m) {
  const std::size_t nq = grid_.query_levels.size();
  return stats_.at(((p * grid_.init_levels.size() + i) * nq + q) * kNumMetrics +
                   static_cast<std::size_t>(m));
}

const MetricStats& ResultGrid::at(std::size_t p, std::size_t i, std::size_t q,
                                  MetricKind m) const {
  return const_cast<ResultGrid*>(this)->at(p, i, q, m);
}

std::size_t ResultGrid::predictor_index(std::string_view name) const {
  for (std::size_t p = 0; p < predictors_.size(); ++p) {
    if (predictors_[p] == name) return p;
  }
  throw NotFound("predictor '" + std::string(name) + "' is not in the result grid");
}

std::string ResultGrid::to_csv() const {
  std::ostringstream os;
  os << "predictor,init_budget,query_budget,metric,mean,std,trials,failures\n";
  for (std::size_t p = 0; p < predictors_.size(); ++p) {
    for (std::size_t i = 0; i < grid_.init_levels.size(); ++i) {
      for (std::size_t q = 0; q < grid_.query_levels.size(); ++q) {
        for (MetricKind m : all_metric_kinds()) {
          const MetricStats& s = at(p, i, q, m);
          os << predictors_[p] << ',' << format_double(grid_.init_levels[i]) << ','
             << format_double(grid_.query_levels[q]) << ',' << to_string(m) << ','
             << format_double(s.mean) << ',' << format_double(s.std) << ',' << s.trials << ','
             << s.failures << '\n';
        }
      }
    }
  }
  return os.str();
}

ResultGrid ResultGrid::from_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() ||
      lines[0] != "predictor,init_budget,query_budget,metric,mean,std,trials,failures") {
    throw FormatError("result grid CSV: unexpected header");
  }
  struct Row {
    std::string pred;
    double init, query;
    MetricKind metric;
    MetricStats stats;
  };
  std::vector<Row> rows;
  std::vector<std::string> preds;
  std::vector<double> inits, queries;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    auto f = split(lines[l], ',');
    if (f.size() != 8) throw FormatError("result grid CSV line " + std::to_string(l + 1));
    Row r{std::string(f[0]), parse_double(f[1]), parse_double(f[2]), parse_metric_kind(f[3]), {}};
    r.stats.mean = parse_double(f[4]);
    r.stats.std = parse_double(f[5]);
    r.stats.trials = parse_size(f[6]);
    r.stats.failures = parse_size(f[7]);
    if (std::find(preds.begin(), preds.end(), r.pred) == preds.end()) preds.push_back(r.pred);
    inits.push_back(r.init);
    queries.push_back(r.query);
    rows.push_back(std::move(r));
  }
  for (auto* v : {&inits, &queries}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  ResultGrid g(preds, BudgetGrid{inits, queries});
  for (const auto& r : rows) {
    const auto p = static_cast<std::size_t>(
        std::find(preds.begin(), preds.end(), r.pred) - preds.begin());
    const auto i = static_cast<std::size_t>(
        std::lower_bound(inits.begin(), inits.end(), r.init) - inits.begin());
    const auto q = static_cast<std::size_t>(
        std::lower_bound(queries.begin(), queries.end(), r.query) - queries.begin());
    g.at(p, i, q, r.metric) = r.stats;
  }
  return g;
}

ResultGrid run_grid(const Benchmark& bench, const std::vector<NamedFactory>& predictors,
                    const BudgetGrid& grid, const GridOptions& options) {
  grid.validate();
  if (predictors.empty()) throw InvalidArgument("run_grid needs at least one predictor");
  if (options.trials == 0 || options.test_size < 2) {
    throw InvalidArgument("run_grid needs trials >= 1 and test_size >= 2");
  }
  const std::size_t P = predictors.size();
  const std::size_t NI = grid.init_levels.size();
  const std::size_t NQ = grid.query_levels.size();
  const double full = static_cast<double>(bench.epochs()) * bench.cost().epoch_cost;
  const std::size_t max_train =
      static_cast<std::size_t>(std::ceil(grid.init_levels.back() / full - 1e-9));

  // values[trial][((p * NI + i) * NQ + q) * kNumMetrics + m]; NaN = undefined.
  std::vector<std::vector<double>> values(options.trials);
  std::vector<std::vector<char>> failed(options.trials);

  parallel_for(options.trials, options.threads, [&](std::size_t t) {
    const std::uint64_t ts = derive_seed(options.seed, {t});
    TrialData data;
    if (options.protocol == Protocol::kUniform) {
      data = uniform_split(bench, options.test_size, ts);
    } else {
      MutationConfig mc = options.mutation;
      mc.test_size = options.test_size;
      auto sets = mutation_protocol(bench, derive_seed(ts, {fnv1a("mutation")}), max_train, mc);
      data.test = std::move(sets.test);
      data.train_order = std::move(sets.train);
    }
    fill_truth(bench, data);

    auto& vals = values[t];
    auto& fail = failed[t];
    vals.assign(P * NI * NQ * kNumMetrics, 0.0);
    fail.assign(P * NI * NQ, 0);
    auto cell = [&](std::size_t p, std::size_t i, std::size_t q) { return (p * NI + i) * NQ + q; };
    auto record = [&](std::size_t p, std::size_t i, std::size_t q,
                      const std::vector<double>& scores) {
      const auto m = compute_metrics(scores, data.truth, options.sparse_resolution);
      std::copy(m.begin(), m.end(), vals.begin() + cell(p, i, q) * kNumMetrics);
    };

    for (std::size_t p = 0; p < P; ++p) {
      const NamedFactory& f = predictors[p];
      const std::uint64_t pseed = derive_seed(ts, {fnv1a(f.name)});
      auto probe = f.make();
      const bool uses_init = probe->uses_init_budget();
      const bool init_on_query = probe->init_depends_on_query_budget();
      const std::size_t ni_run = uses_init ? NI : 1;
      for (std::size_t i = 0; i < ni_run; ++i) {
        const double ib = uses_init ? grid.init_levels[i] : 0.0;
        std::unique_ptr<Predictor> shared;
        bool shared_failed = false;
        if (!init_on_query) {
          try {
            shared = initialized(f, bench, data.train_order, ib, grid.query_levels.back(), pseed,
                                 std::move(probe));
          } catch (const Error&) {
            shared_failed = true;
          }
        }
        for (std::size_t q = 0; q < NQ; ++q) {
          const double qb = grid.query_levels[q];
          try {
            if (shared_failed) throw Error("init", "initialization failed");
            std::unique_ptr<Predictor> own;
            Predictor* pred = shared.get();
            if (init_on_query) {
              own = initialized(f, bench, data.train_order, ib, qb, pseed);
              pred = own.get();
            }
            record(p, i, q, score_all(*pred, data.test, qb));
          } catch (const Error&) {
            fail[cell(p, i, q)] = 1;
          }
        }
      }
      if (!uses_init) {
        for (std::size_t i = 1; i < NI; ++i) {
          for (std::size_t q = 0; q < NQ; ++q) {
            fail[cell(p, i, q)] = fail[cell(p, 0, q)];
            std::copy_n(vals.begin() + cell(p, 0, q) * kNumMetrics, kNumMetrics,
                        vals.begin() + cell(p, i, q) * kNumMetrics);
          }
        }
      }
    }
  });

  ResultGrid out([&] {
    std::vector<std::string> names;
    for (const auto& f : predictors) names.push_back(f.name);
    return names;
  }(), grid);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t i = 0; i < NI; ++i) {
      for (std::size_t q = 0; q < NQ; ++q) {
        const std::size_t c = (p * NI + i) * NQ + q;
        for (MetricKind m : all_metric_kinds()) {
          MetricStats& s = out.at(p, i, q, m);
          std::vector<double> xs;
          for (std::size_t t = 0; t < options.trials; ++t) {
            double v = values[t][c * kNumMetrics + static_cast<std::size_t>(m)];
            if (failed[t][c]) {
              ++s.failures;
              v = 0.0;
            } else if (is_undefined(v)) {
              ++s.undefined;
              v = 0.0;
            }
            xs.push_back(v);
          }
          s.trials = options.trials;
          s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
          s.std = sample_std(xs);
        }
      }
    }
  }
  return out;
}

std::string ParetoResult::to_csv(const ResultGrid& grid, MetricKind metric) const {
  std::ostringstream os;
  os << "init_budget,query_budget,best_predictor,mean\n";
  for (std::size_t i = 0; i < winner.size(); ++i) {
    for (std::size_t q = 0; q < winner[i].size(); ++q) {
      const std::size_t p = winner[i][q];
      os << format_double(grid.grid().init_levels[i]) << ','
         << format_double(grid.grid().query_levels[q]) << ',' << grid.predictors()[p] << ','
         << format_double(grid.at(p, i, q, metric).mean) << '\n';
    }
  }
  return os.str();
}

ParetoResult pareto_best(const ResultGrid& grid, MetricKind metric) {
  const auto& names = grid.predictors();
  if (names.empty()) throw InvalidArgument("pareto_best on an empty grid");
  ParetoResult r;
  std::vector<char> wins(names.size(), 0);
  const std::size_t NI = grid.grid().init_levels.size(), NQ = grid.grid().query_levels.size();
  r.winner.assign(NI, std::vector<std::size_t>(NQ, 0));
  for (std::size_t i = 0; i < NI; ++i) {
    for (std::size_t q = 0; q < NQ; ++q) {
      std::size_t best = 0;
      for (std::size_t p = 1; p < names.size(); ++p) {
        const double a = grid.at(p, i, q, metric).mean;
        const double b = grid.at(best, i, q, metric).mean;
        if (a > b || (a == b && names[p] < names[best])) best = p;
      }
      r.winner[i][q] = best;
      wins[best] = 1;
    }
  }
  for (std::size_t p = 0; p < names.size(); ++p) {
    if (wins[p]) r.pareto_set.push_back(names[p]);
  }
  std::sort(r.pareto_set.begin(), r.pareto_set.end());
  return r;
}

SeedVariance seed_variance(const Benchmark& bench, const PredictorFactory& factory,
                           const SeedVarianceOptions& options) {
  if (options.fixed_trials < 1 || options.redraws < 1) {
    throw InvalidArgument("seed_variance needs at least one trial and one redraw");
  }
  std::vector<std::vector<double>> taus(options.redraws);
  const NamedFactory named{"seed_variance", factory};
  parallel_for(options.redraws, options.threads, [&](std::size_t d) {
    TrialData data = uniform_split(bench, options.test_size, derive_seed(options.seed, {d}));
    fill_truth(bench, data);
    for (std::size_t j = 0; j < options.fixed_trials; ++j) {
      double tau = 0.0;
      try {
        auto pred = initialized(named, bench, data.train_order, options.init_budget,
                                options.query_budget, derive_seed(options.seed, {d, j}));
        const auto scores = sanitize_scores(score_all(*pred, data.test, options.query_budget));
        tau = kendall_tau(scores, data.truth);
        if (is_undefined(tau)) tau = 0.0;
      } catch (const Error&) {
        tau = 0.0;
      }
      taus[d].push_back(tau);
    }
  });
  SeedVariance out;
  std::vector<double> all;
  for (const auto& v : taus) {
    out.fixed_std += sample_std(v);
    all.insert(all.end(), v.begin(), v.end());
  }
  out.fixed_std /= static_cast<double>(options.redraws);
  out.overall_std = sample_std(all);
  return out;
}

}  // namespace predbench

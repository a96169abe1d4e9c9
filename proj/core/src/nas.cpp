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

#include "predbench/nas.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "predbench/error.hpp"
#include "predbench/metrics.hpp"
#include "predbench/random.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

// Shared bookkeeping of both loops: the evaluated population and the trace.
class Population {
 public:
  Population(const Benchmark& bench, NasTrace& trace) : bench_(bench), trace_(trace) {}

  void evaluate(const Architecture& arch) {
    BudgetAccount unlimited;
    const BenchmarkRecord& r = bench_.query_full(arch, unlimited);
    cost_ += unlimited.spent();
    best_acc_ = std::max(best_acc_, r.final_val_acc());
    records_.push_back(r);
    seen_.insert(arch);
    trace_.steps.push_back({trace_.steps.size(), cost_, 1.0 - best_acc_, arch});
  }

  void add_cost(double c) { cost_ += c; }
  bool seen(const Architecture& a) const { return seen_.count(a) > 0; }
  const std::vector<BenchmarkRecord>& records() const { return records_; }

  // Indices of records, best final accuracy first (stable).
  std::vector<std::size_t> ranked() const {
    std::vector<std::size_t> idx(records_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return records_[a].final_val_acc() > records_[b].final_val_acc();
    });
    return idx;
  }

 private:
  const Benchmark& bench_;
  NasTrace& trace_;
  std::vector<BenchmarkRecord> records_;
  std::unordered_set<Architecture> seen_;
  double cost_ = 0.0;
  double best_acc_ = 0.0;
};

void seed_population(Population& pop, const Benchmark& bench, std::size_t n, Rng& rng) {
  std::size_t tries = 0;
  std::unordered_set<Architecture> drawn;
  while (drawn.size() < n) {
    if (++tries > 1000 * n) throw DuplicateExhaustion("cannot draw the initial population");
    Architecture a = sample_uniform(bench.space(), rng);
    if (drawn.insert(a).second) pop.evaluate(a);
  }
}

// Indices of the top `k` scores, highest first; ties keep candidate order.
std::vector<std::size_t> top_k(const std::vector<double>& scores, std::size_t k) {
  const auto s = sanitize_scores(scores);
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

void emit(const NasLog& log, const std::string& msg) {
  if (log) log(msg);
}

}  // namespace

std::string to_string(NasFramework f) { return f == NasFramework::kEvolution ? "evolution" : "bo_its"; }

NasFramework parse_nas_framework(std::string_view name) {
  if (name == "evolution") return NasFramework::kEvolution;
  if (name == "bo_its") return NasFramework::kBoIts;
  throw InvalidArgument("unknown NAS framework '" + std::string(name) + "'");
}

void NasRunConfig::validate() const {
  if (initial_population < 1 || iterations < 1 || elite < 1 || mutations_per_elite < 1 ||
      k < 1 || pool < 1 || select < 1 || members < 1 || retune_every < 1) {
    throw InvalidArgument("NAS counts must all be >= 1");
  }
  if (select > pool) throw InvalidArgument("NAS select must not exceed pool");
  if (!(query_budget >= 0.0)) throw InvalidArgument("NAS query budget must be >= 0");
}

double NasTrace::best_error_at(double cost) const {
  double best = 1.0;
  for (const auto& s : steps) {
    if (s.cost <= cost + 1e-9) best = std::min(best, s.best_val_error);
  }
  return best;
}

std::string NasTrace::to_csv(std::uint64_t seed, bool header) const {
  std::ostringstream os;
  if (header) os << "seed,step,cost,best_val_error\n";
  for (const auto& s : steps) {
    os << seed << ',' << s.step << ',' << format_double(s.cost) << ','
       << format_double(s.best_val_error) << '\n';
  }
  return os.str();
}

NasTrace run_evolution(const Benchmark& bench, const PredictorFactory& factory,
                       const NasRunConfig& config, const NasLog& log) {
  config.validate();
  NasTrace trace;
  Population pop(bench, trace);
  Rng rng(derive_seed(config.seed, {fnv1a("evolution")}));
  seed_population(pop, bench, config.initial_population, rng);
  const double full = static_cast<double>(bench.epochs()) * bench.cost().epoch_cost;
  const SearchSpace& space = bench.space();

  std::unique_ptr<Predictor> pred;
  std::size_t fed = 0;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    bool ok = true;
    try {
      if (!pred) {
        pred = factory();
        BudgetAccount account(static_cast<double>(pop.records().size()) * full);
        std::vector<Architecture> archs;
        for (const auto& r : pop.records()) archs.push_back(r.arch);
        ListSource source(std::move(archs));
        InitContext ctx{&bench, &account, config.query_budget, &source,
                        derive_seed(config.seed, {fnv1a("predictor")})};
        pred->initialize(ctx);
      } else {
        pred->update(std::span(pop.records()).subspan(fed));
      }
      fed = pop.records().size();
    } catch (const Error& e) {
      ok = false;
      pred.reset();
      emit(log, "iteration " + std::to_string(it) + ": predictor fit failed (" + e.what() +
                    "); selecting candidates at random");
    }

    // Candidate pool.
    std::vector<Architecture> cands;
    std::unordered_set<Architecture> cand_set;
    auto add = [&](Architecture a) {
      if (!pop.seen(a) && cand_set.insert(a).second) cands.push_back(std::move(a));
    };
    const auto order = pop.ranked();
    std::size_t next = 0;
    for (; next < std::min(config.elite, order.size()); ++next) {
      for (std::size_t m = 0; m < config.mutations_per_elite; ++m) {
        add(mutate(space, pop.records()[order[next]].arch, 1, rng));
      }
    }
    for (; cands.size() < config.k && next < order.size(); ++next) {
      for (std::size_t m = 0; m < config.mutations_per_elite; ++m) {
        add(mutate(space, pop.records()[order[next]].arch, 1, rng));
      }
    }
    for (std::size_t tries = 0; cands.size() < config.k && tries < 100000; ++tries) {
      add(sample_uniform(space, rng));
    }
    if (cands.empty()) break;

    std::vector<double> scores(cands.size());
    if (ok) {
      try {
        double spent = 0.0;
        for (std::size_t c = 0; c < cands.size(); ++c) {
          BudgetAccount account(config.query_budget);
          const Prediction p = pred->query(cands[c], account);
          scores[c] = p.score;
          spent += p.cost_charged;
        }
        trace.query_cost += spent;
        pop.add_cost(spent);
      } catch (const Error& e) {
        ok = false;
        emit(log, "iteration " + std::to_string(it) + ": predictor query failed (" + e.what() +
                      "); selecting candidates at random");
      }
    }
    if (!ok) {
      ++trace.fallbacks;
      for (auto& s : scores) s = uniform01(rng);
    }
    for (std::size_t c : top_k(scores, config.k)) pop.evaluate(cands[c]);
  }
  return trace;
}

NasSurrogate make_ensemble_surrogate(const SearchSpace& space, const HpoSpec& spec,
                                     EncodingKind encoding, const NasRunConfig& config) {
  auto tuned = std::make_shared<Hyperparams>();
  const std::uint64_t seed = derive_seed(config.seed, {fnv1a("surrogate")});
  const std::size_t members = config.members;
  const std::size_t retune = config.retune_every;
  return [=, &space](std::span<const BenchmarkRecord> population,
                     std::span<const Architecture> pool, std::size_t refit) {
    const TrainingSet ts = TrainingSet::from_records(space, population, encoding);
    if (ts.size() < min_training_rows(spec.kind)) {
      throw InsufficientData("surrogate needs at least " +
                             std::to_string(min_training_rows(spec.kind)) + " rows");
    }
    if (refit % retune == 0 || tuned->empty()) {
      *tuned = tune(spec, ts, derive_seed(seed, {refit, fnv1a("tune")})).best;
    }
    std::vector<std::uint64_t> seeds;
    for (std::size_t m = 0; m < members; ++m) seeds.push_back(derive_seed(seed, {refit, m}));
    const FittedModel model = ensemble_fit(spec.kind, ts, *tuned, seeds, encoding);
    return model.predict(space, pool, encoding);
  };
}

NasTrace run_bo_its(const Benchmark& bench, const NasSurrogate& surrogate,
                    const NasRunConfig& config, const NasLog& log) {
  config.validate();
  NasTrace trace;
  Population pop(bench, trace);
  Rng rng(derive_seed(config.seed, {fnv1a("bo_its")}));
  seed_population(pop, bench, config.initial_population, rng);
  const SearchSpace& space = bench.space();
  for (std::size_t it = 0; it < config.iterations; ++it) {
    std::vector<Architecture> pool;
    std::unordered_set<Architecture> in_pool;
    for (std::size_t tries = 0; pool.size() < config.pool && tries < 1000 * config.pool; ++tries) {
      Architecture a = sample_uniform(space, rng);
      if (!pop.seen(a) && in_pool.insert(a).second) pool.push_back(std::move(a));
    }
    if (pool.empty()) break;
    std::vector<double> draws(pool.size());
    try {
      const auto dists = surrogate(pop.records(), pool, it);
      if (dists.size() != pool.size()) throw InvalidArgument("surrogate returned wrong count");
      const bool flat = std::all_of(dists.begin(), dists.end(),
                                    [](const Distribution& d) { return !(d.std > 0.0); });
      if (flat) {
        emit(log, "iteration " + std::to_string(it) +
                      ": zero predictive std everywhere; ranking by mean");
      }
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const double z = normal(rng);
        draws[i] = dists[i].std > 0.0 ? dists[i].mean + dists[i].std * z : dists[i].mean;
      }
    } catch (const Error& e) {
      ++trace.fallbacks;
      emit(log, "iteration " + std::to_string(it) + ": surrogate failed (" + e.what() +
                    "); selecting at random");
      for (auto& d : draws) d = uniform01(rng);
    }
    for (std::size_t c : top_k(draws, config.select)) pop.evaluate(pool[c]);
  }
  return trace;
}

}  // namespace predbench

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

#include "predbench/predictor.hpp"

#include <cmath>
#include <unordered_set>

#include "predbench/error.hpp"

namespace predbench {

void Predictor::initialize(const InitContext& ctx) {
  if (bench_) throw InvalidArgument(name() + ": initialize called twice");
  if (!ctx.bench || !ctx.account) {
    throw InvalidArgument(name() + ": init context needs a benchmark and an account");
  }
  do_initialize(ctx);
  bench_ = ctx.bench;
}

Prediction Predictor::query(const Architecture& arch, BudgetAccount& account) {
  if (!bench_) throw InvalidArgument(name() + ": query before initialize");
  const double before = account.spent();
  Prediction p = do_query(arch, account);
  p.cost_charged = account.spent() - before;
  return p;
}

void Predictor::update(std::span<const BenchmarkRecord>) {}

std::size_t affordable_epochs(const Benchmark& bench, const BudgetAccount& account) {
  const double per_epoch = bench.cost().epoch_cost;
  const double remaining = account.remaining();
  if (std::isinf(remaining)) return bench.epochs();
  const double k = std::floor((remaining + 1e-9) / per_epoch);
  if (k <= 0.0) return 0;
  return std::min<std::size_t>(bench.epochs(), static_cast<std::size_t>(k));
}

std::vector<BenchmarkRecord> collect_full_trainings(const InitContext& ctx) {
  std::vector<BenchmarkRecord> out;
  if (!ctx.source) return out;
  const Benchmark& bench = *ctx.bench;
  std::unordered_set<Architecture> seen;
  const double full = static_cast<double>(bench.epochs()) * bench.cost().epoch_cost;
  while (ctx.account->can_afford(full)) {
    auto arch = ctx.source->next();
    if (!arch) break;
    if (!seen.insert(*arch).second) continue;
    out.push_back(bench.query_full(*arch, *ctx.account));
  }
  return out;
}

Prediction OraclePredictor::do_query(const Architecture& arch, BudgetAccount&) {
  Prediction p;
  const double f = bench().record(arch).final_val_acc();
  p.score = reversed_ ? -f : f;
  return p;
}

void RandomPredictor::do_initialize(const InitContext& ctx) {
  rng_.seed(derive_seed(ctx.seed, {fnv1a("random_predictor")}));
}

Prediction RandomPredictor::do_query(const Architecture&, BudgetAccount&) {
  Prediction p;
  p.score = uniform01(rng_);
  return p;
}

}  // namespace predbench

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

// Shared fixtures for the unit tests.

#ifndef PREDBENCH_TESTS_UNIT_SUPPORT_HPP_
#define PREDBENCH_TESTS_UNIT_SUPPORT_HPP_

#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/predictor.hpp"

namespace unit {

// 150 architectures trained for 12 epochs; built once per test binary.
inline const predbench::BenchmarkStore& small_store() {
  static const predbench::BenchmarkStore store = [] {
    predbench::StoreHeader h;
    h.train.epochs = 12;
    h.seed = 77;
    predbench::BuildOptions o;
    o.n_archs = 150;
    return predbench::BenchmarkStore::build(h, o);
  }();
  return store;
}

inline std::vector<predbench::Architecture> archs_of(const predbench::BenchmarkStore& s,
                                                     std::size_t begin, std::size_t end) {
  std::vector<predbench::Architecture> out;
  for (std::size_t i = begin; i < end && i < s.size(); ++i) out.push_back(s.records()[i].arch);
  return out;
}

inline std::vector<double> truth_of(const predbench::BenchmarkStore& s,
                                    const std::vector<predbench::Architecture>& archs) {
  std::vector<double> out;
  for (const auto& a : archs) out.push_back(s.at(a).final_val_acc());
  return out;
}

// Initializes `p` with `budget` for training and the given training order.
inline void init(predbench::Predictor& p, const predbench::Benchmark& bench,
                 predbench::BudgetAccount& account, std::vector<predbench::Architecture> train,
                 double query_budget, std::uint64_t seed = 1) {
  predbench::ListSource source(std::move(train));
  predbench::InitContext ctx;
  ctx.bench = &bench;
  ctx.account = &account;
  ctx.query_budget = query_budget;
  ctx.source = &source;
  ctx.seed = seed;
  p.initialize(ctx);
}

inline std::vector<double> score(predbench::Predictor& p,
                                 const std::vector<predbench::Architecture>& archs,
                                 double query_budget) {
  std::vector<double> out;
  for (const auto& a : archs) {
    predbench::BudgetAccount acc(query_budget);
    out.push_back(p.query(a, acc).score);
  }
  return out;
}

}  // namespace unit

#endif  // PREDBENCH_TESTS_UNIT_SUPPORT_HPP_

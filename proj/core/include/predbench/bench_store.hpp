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

#ifndef PREDBENCH_BENCH_STORE_HPP_
#define PREDBENCH_BENCH_STORE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "predbench/budget.hpp"
#include "predbench/dataset.hpp"
#include "predbench/network.hpp"
#include "predbench/search_space.hpp"
#include "predbench/trainer.hpp"

namespace predbench {

// Simulated costs in epoch-equivalents (one training epoch of one
// architecture). On the reference GPU benchmark one epoch is roughly 90 s;
// that figure is documentation only.
struct CostModel {
  double epoch_cost = 1.0;
  double zero_cost_query = 0.05;
  double model_query = 0.0;

  void validate() const;
  std::string describe() const;
  static CostModel parse(std::string_view description);
  friend bool operator==(const CostModel&, const CostModel&) = default;
};

struct BenchmarkRecord {
  Architecture arch;
  LearningCurve curve;
  std::size_t param_count = 0;
  std::size_t flop_count = 0;
  double epoch_cost = 1.0;

  double final_val_acc() const { return curve.final_val_acc(); }
  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

struct StoreHeader {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  SearchSpace space;
  NetConfig net;
  TrainConfig train;  // train.seed is unused; per-arch seeds derive from `seed`
  DatasetConfig dataset;
  CostModel cost;
  std::uint64_t seed = 0;

  // Header lines as written to disk, excluding the hash line.
  std::string serialize() const;
  std::uint64_t hash() const;
  friend bool operator==(const StoreHeader&, const StoreHeader&) = default;
};

// Trains one architecture exactly as the store would; seeds derive from the
// header seed and the architecture's index, so results do not depend on
// build order.
BenchmarkRecord train_record(const StoreHeader& header,
                             const SyntheticDataset& data,
                             const Architecture& arch);

struct BuildOptions {
  std::size_t n_archs = 1;
  std::size_t threads = 1;
  // Receives one line per skipped (diverged) architecture.
  std::function<void(const std::string&)> log;
};

// Immutable table of trained architectures.
class BenchmarkStore {
 public:
  static BenchmarkStore build(const StoreHeader& header, const BuildOptions& options);

  static BenchmarkStore parse(std::string_view text);
  static BenchmarkStore load(const std::filesystem::path& path);
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  const StoreHeader& header() const { return header_; }
  const SearchSpace& space() const { return header_.space; }
  std::size_t epochs() const { return header_.train.epochs; }
  const std::vector<BenchmarkRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  const BenchmarkRecord* find(const Architecture& arch) const;
  // Throws NotFound.
  const BenchmarkRecord& at(const Architecture& arch) const;

  // Full record; charges E * epoch_cost to `account`.
  const BenchmarkRecord& query_full(const Architecture& arch,
                                    BudgetAccount& account) const;
  // First k epochs; charges k * epoch_cost to `account`.
  LearningCurve query_partial(const Architecture& arch, std::size_t k,
                              BudgetAccount& account) const;

  friend bool operator==(const BenchmarkStore& a, const BenchmarkStore& b) {
    return a.header_ == b.header_ && a.records_ == b.records_;
  }

 private:
  BenchmarkStore(StoreHeader header, std::vector<BenchmarkRecord> records);

  StoreHeader header_;
  std::vector<BenchmarkRecord> records_;
  std::unordered_map<Architecture, std::size_t> index_;
};

// What predictors and experiments see: the stored table, plus (optionally)
// deterministic on-demand training for architectures outside it. Trained
// extras are cached; the cache is internally synchronized.
class Benchmark {
 public:
  explicit Benchmark(const BenchmarkStore& store, bool on_demand = false);

  const BenchmarkStore& store() const { return store_; }
  const StoreHeader& header() const { return store_.header(); }
  const SearchSpace& space() const { return store_.space(); }
  const SyntheticDataset& dataset() const { return dataset_; }
  const CostModel& cost() const { return store_.header().cost; }
  std::size_t epochs() const { return store_.epochs(); }
  bool on_demand() const { return on_demand_; }

  bool contains(const Architecture& arch) const;
  // Uncharged ground truth. Throws NotFound without on-demand training.
  const BenchmarkRecord& record(const Architecture& arch) const;
  const BenchmarkRecord& query_full(const Architecture& arch,
                                    BudgetAccount& account) const;
  LearningCurve query_partial(const Architecture& arch, std::size_t k,
                              BudgetAccount& account) const;

  std::size_t trained_on_demand() const;

 private:
  const BenchmarkStore& store_;
  bool on_demand_;
  SyntheticDataset dataset_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Architecture, std::unique_ptr<BenchmarkRecord>> extra_;
};

}  // namespace predbench

#endif  // PREDBENCH_BENCH_STORE_HPP_

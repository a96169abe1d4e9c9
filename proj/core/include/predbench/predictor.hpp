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

#ifndef PREDBENCH_PREDICTOR_HPP_
#define PREDBENCH_PREDICTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/budget.hpp"
#include "predbench/random.hpp"
#include "predbench/search_space.hpp"

namespace predbench {

// Score given to an architecture a predictor cannot rank (degenerate
// statistics, nothing affordable). Sorts below every finite score.
inline constexpr double kDegenerateScore = -std::numeric_limits<double>::infinity();

inline bool is_degenerate(double score) { return !(score > kDegenerateScore); }

// Higher score = predicted better final validation accuracy.
struct Prediction {
  double score = kDegenerateScore;
  double cost_charged = 0.0;
  bool fallback = false;  // a cheaper method answered instead
  bool degraded = false;  // budget forced a reduced feature set or prefix
};

// Yields candidate training architectures in a fixed order.
class TrainingSource {
 public:
  virtual ~TrainingSource() = default;
  virtual std::optional<Architecture> next() = 0;
};

class ListSource : public TrainingSource {
 public:
  explicit ListSource(std::vector<Architecture> archs) : archs_(std::move(archs)) {}
  std::optional<Architecture> next() override {
    if (pos_ >= archs_.size()) return std::nullopt;
    return archs_[pos_++];
  }

 private:
  std::vector<Architecture> archs_;
  std::size_t pos_ = 0;
};

struct InitContext {
  const Benchmark* bench = nullptr;
  BudgetAccount* account = nullptr;  // initialization budget
  double query_budget = 0.0;          // per query; some predictors shape features on it
  TrainingSource* source = nullptr;   // may be null for predictors that train nothing
  std::uint64_t seed = 0;
};

class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::string name() const = 0;

  // Harness hints. A predictor that ignores the init budget is initialized
  // once per trial; one whose initialization ignores the query budget is
  // reused across query levels.
  virtual bool uses_init_budget() const { return false; }
  virtual bool init_depends_on_query_budget() const { return false; }

  // Must be called exactly once, before any query.
  void initialize(const InitContext& ctx);
  bool initialized() const { return bench_ != nullptr; }

  // `cost_charged` of the result is whatever the call debited from `account`.
  Prediction query(const Architecture& arch, BudgetAccount& account);

  // Adds fully evaluated records (NAS population growth) and refits. The
  // default ignores them.
  virtual void update(std::span<const BenchmarkRecord> new_records);

 protected:
  virtual void do_initialize(const InitContext& ctx) = 0;
  virtual Prediction do_query(const Architecture& arch, BudgetAccount& account) = 0;

  const Benchmark& bench() const { return *bench_; }

 private:
  const Benchmark* bench_ = nullptr;
};

// Epochs of training affordable from `account`, capped at E.
std::size_t affordable_epochs(const Benchmark& bench, const BudgetAccount& account);

// Pulls architectures from ctx.source and fully trains each (charging the
// init account) while a full training is affordable. Duplicates are skipped.
std::vector<BenchmarkRecord> collect_full_trainings(const InitContext& ctx);

// Score = f(a). Zero cost everywhere.
class OraclePredictor : public Predictor {
 public:
  explicit OraclePredictor(bool reversed = false) : reversed_(reversed) {}
  std::string name() const override { return reversed_ ? "reversed_oracle" : "oracle"; }

 protected:
  void do_initialize(const InitContext&) override {}
  Prediction do_query(const Architecture& arch, BudgetAccount& account) override;

 private:
  bool reversed_;
};

// i.i.d. uniform scores from a stream seeded at initialization.
class RandomPredictor : public Predictor {
 public:
  std::string name() const override { return "random"; }

 protected:
  void do_initialize(const InitContext& ctx) override;
  Prediction do_query(const Architecture& arch, BudgetAccount& account) override;

 private:
  Rng rng_;
};

}  // namespace predbench

#endif  // PREDBENCH_PREDICTOR_HPP_

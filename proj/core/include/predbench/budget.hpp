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

#ifndef PREDBENCH_BUDGET_HPP_
#define PREDBENCH_BUDGET_HPP_

#include <cstddef>
#include <limits>
#include <vector>

namespace predbench {

// Simulated-cost account in epoch-equivalents. Debits are append-only and
// can never push spending past the budget.
class BudgetAccount {
 public:
  static constexpr double kUnlimited = std::numeric_limits<double>::infinity();

  explicit BudgetAccount(double budget = kUnlimited);

  double budget() const { return budget_; }
  double spent() const { return spent_; }
  double remaining() const { return budget_ - spent_; }
  bool can_afford(double cost) const;
  // Throws BudgetExceeded (and records nothing) if unaffordable.
  void charge(double cost);
  const std::vector<double>& log() const { return log_; }

 private:
  double budget_;
  double spent_ = 0.0;
  std::vector<double> log_;
};

// Initialization budget plus a per-query budget; each query gets a fresh
// account so the harness can reconstruct what every prediction cost.
class BudgetLedger {
 public:
  BudgetLedger(double init_budget, double query_budget);

  double init_budget() const { return init_.budget(); }
  double query_budget() const { return query_budget_; }

  BudgetAccount& init() { return init_; }
  const BudgetAccount& init() const { return init_; }

  BudgetAccount& begin_query();
  const std::vector<BudgetAccount>& queries() const { return queries_; }

  double total_query_spent() const;
  double total_spent() const { return init_.spent() + total_query_spent(); }

 private:
  BudgetAccount init_;
  double query_budget_;
  std::vector<BudgetAccount> queries_;
};

}  // namespace predbench

#endif  // PREDBENCH_BUDGET_HPP_

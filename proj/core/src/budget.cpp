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

#include "predbench/budget.hpp"

#include <string>

#include "predbench/error.hpp"

namespace predbench {

namespace {
// Absorbs rounding when budgets are sums of fractional costs.
constexpr double kSlack = 1e-9;
}  // namespace

BudgetAccount::BudgetAccount(double budget) : budget_(budget) {
  if (!(budget >= 0.0)) throw InvalidArgument("budget must be non-negative");
}

bool BudgetAccount::can_afford(double cost) const {
  return cost <= remaining() + kSlack;
}

void BudgetAccount::charge(double cost) {
  if (!(cost >= 0.0)) throw InvalidArgument("negative charge");
  if (!can_afford(cost)) {
    throw BudgetExceeded("charge of " + std::to_string(cost) +
                         " exceeds remaining budget " + std::to_string(remaining()));
  }
  spent_ += cost;
  log_.push_back(cost);
}

BudgetLedger::BudgetLedger(double init_budget, double query_budget)
    : init_(init_budget), query_budget_(query_budget) {
  if (!(query_budget >= 0.0)) throw InvalidArgument("query budget must be non-negative");
}

BudgetAccount& BudgetLedger::begin_query() {
  queries_.emplace_back(query_budget_);
  return queries_.back();
}

double BudgetLedger::total_query_spent() const {
  double total = 0.0;
  for (const auto& q : queries_) total += q.spent();
  return total;
}

}  // namespace predbench

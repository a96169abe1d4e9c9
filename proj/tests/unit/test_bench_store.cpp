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


#include <filesystem>
#include <set>

#include "doctest.h"
#include "predbench/bench_store.hpp"
#include "predbench/error.hpp"

using namespace predbench;

namespace {

StoreHeader small_header(std::uint64_t seed = 5) {
  StoreHeader h;
  h.train.epochs = 10;
  h.seed = seed;
  return h;
}

BenchmarkStore small_store(std::size_t n, std::uint64_t seed = 5, std::size_t threads = 1) {
  BuildOptions o;
  o.n_archs = n;
  o.threads = threads;
  return BenchmarkStore::build(small_header(seed), o);
}

std::string replace_line(const std::string& text, const std::string& prefix,
                         const std::string& line) {
  const auto start = text.find("\n" + prefix) + 1;
  const auto end = text.find('\n', start);
  return text.substr(0, start) + line + text.substr(end);
}

}  // namespace

TEST_CASE("a one-record store round-trips exactly") {
  const BenchmarkStore s = small_store(1);
  REQUIRE(s.size() == 1);
  const std::string text = s.serialize();
  const BenchmarkStore back = BenchmarkStore::parse(text);
  CHECK(back == s);
  CHECK(back.serialize() == text);

  const auto path = std::filesystem::temp_directory_path() / "predbench_unit_store.nbstore";
  s.save(path);
  CHECK(BenchmarkStore::load(path).serialize() == text);
  std::filesystem::remove(path);
}

TEST_CASE("records are distinct and well formed") {
  const BenchmarkStore s = small_store(12);
  std::set<std::string> keys;
  for (const auto& r : s.records()) {
    keys.insert(r.arch.str());
    CHECK(r.curve.epochs() == s.epochs());
    CHECK(r.epoch_cost > 0.0);
    CHECK(s.find(r.arch) == &r);
  }
  CHECK(keys.size() == 12);
}

TEST_CASE("equal seeds build byte-identical stores regardless of threads") {
  const std::string a = small_store(6, 9, 1).serialize();
  CHECK(small_store(6, 9, 2).serialize() == a);
  CHECK(small_store(6, 10, 1).serialize() != a);
}

TEST_CASE("asking for more architectures than exist is refused") {
  BuildOptions o;
  o.n_archs = 15626;
  CHECK_THROWS_AS(BenchmarkStore::build(small_header(), o), DuplicateExhaustion);
  o.n_archs = 0;
  CHECK_THROWS_AS(BenchmarkStore::build(small_header(), o), InvalidArgument);
}

TEST_CASE("a tampered header fails its hash check") {
  const std::string text = small_store(1).serialize();
  CHECK_THROWS_AS(BenchmarkStore::parse(replace_line(text, "seed ", "seed 6")), FormatError);
  CHECK_THROWS_AS(BenchmarkStore::parse(text.substr(0, 40)), FormatError);
  CHECK_THROWS_AS(BenchmarkStore::parse("hello\n"), FormatError);
}

TEST_CASE("partial and full queries") {
  const BenchmarkStore s = small_store(3);
  const Architecture a = s.records()[0].arch;
  BudgetAccount acc;
  const LearningCurve full = s.query_partial(a, s.epochs(), acc);
  CHECK(full == s.records()[0].curve);
  CHECK(acc.spent() == 10.0);

  BudgetAccount two;
  const LearningCurve half = s.query_partial(a, 5, two);
  s.query_partial(a, 5, two);
  CHECK(two.spent() == 10.0);
  CHECK(two.log().size() == 2);

  for (std::size_t k1 = 1; k1 <= s.epochs(); ++k1) {
    for (std::size_t k2 = k1; k2 <= s.epochs(); ++k2) {
      BudgetAccount scratch;
      const auto p1 = s.query_partial(a, k1, scratch), p2 = s.query_partial(a, k2, scratch);
      CHECK(p2.prefix(k1) == p1);
    }
  }
  CHECK(half.epochs() == 5);

  BudgetAccount f;
  s.query_full(a, f);
  CHECK(f.spent() == 10.0);
  BudgetAccount bad;
  CHECK_THROWS_AS(s.query_partial(a, 0, bad), InvalidArgument);
  CHECK_THROWS_AS(s.query_partial(a, 11, bad), InvalidArgument);
}

TEST_CASE("unknown architectures") {
  const BenchmarkStore s = small_store(2);
  Architecture missing;
  Rng rng(1);
  do {
    missing = sample_uniform(s.space(), rng);
  } while (s.find(missing));
  BudgetAccount acc;
  CHECK_THROWS_AS(s.query_full(missing, acc), NotFound);
  CHECK(acc.spent() == 0.0);

  const Benchmark plain(s);
  CHECK_THROWS_AS(plain.record(missing), NotFound);
  const Benchmark lazy(s, true);
  const BenchmarkRecord& r = lazy.record(missing);
  CHECK(r == train_record(s.header(), make_dataset(s.header().dataset), missing));
  CHECK(lazy.contains(missing));
  CHECK(lazy.trained_on_demand() == 1);
  BudgetAccount charged;
  lazy.query_full(missing, charged);
  CHECK(charged.spent() == 10.0);
}

TEST_CASE("budget accounts") {
  BudgetAccount acc(3.0);
  acc.charge(1.0);
  acc.charge(2.0);
  CHECK(acc.remaining() == 0.0);
  CHECK_FALSE(acc.can_afford(0.5));
  CHECK_THROWS_AS(acc.charge(0.5), BudgetExceeded);
  CHECK_THROWS_AS(acc.charge(-1.0), InvalidArgument);
  CHECK(acc.spent() == 3.0);

  BudgetLedger ledger(10.0, 2.0);
  ledger.init().charge(4.0);
  ledger.begin_query().charge(1.5);
  ledger.begin_query().charge(2.0);
  CHECK(ledger.total_query_spent() == 3.5);
  CHECK(ledger.total_spent() == 7.5);
}

TEST_CASE("cost model validation and parsing") {
  CostModel c;
  CHECK(CostModel::parse(c.describe()) == c);
  c.zero_cost_query = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = CostModel{};
  c.epoch_cost = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

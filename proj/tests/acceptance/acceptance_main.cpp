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

// Acceptance runner. One line per criterion:
//
//   C<n> PASS|FAIL <title>: <details> (<seconds> s, limit <limit> s)
//
// The process exits nonzero if any selected criterion fails. `--prepare`
// builds (or verifies) the shared benchmark store used by the statistical
// criteria.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "predbench/error.hpp"

namespace acceptance {

predbench::StoreHeader store_header() {
  predbench::StoreHeader h;
  h.seed = kStoreSeed;
  return h;
}

const predbench::BenchmarkStore& Context::store() {
  if (!store_) {
    if (store_path.empty()) throw predbench::InvalidArgument("no --store given");
    store_.emplace(predbench::BenchmarkStore::load(store_path));
    if (!(store_->header() == store_header()) || store_->size() != kStoreSize) {
      throw predbench::InvalidArgument("store at " + store_path.string() +
                                       " was not built by --prepare");
    }
  }
  return *store_;
}

double mean_kt(const predbench::ResultGrid& grid, std::size_t p, std::size_t i,
               std::size_t q) {
  return grid.at(p, i, q, predbench::MetricKind::kKendallTau).mean;
}

namespace {

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  Outcome (*run)(Context&);
};

const Criterion kCriteria[] = {
    {1, "metric oracle equivalence", 10, metric_oracles},
    {2, "gradient correctness", 30, gradient_check},
    {3, "flops/params rank identity", 5, flops_params_rank},
    {4, "oracle/random sanity", 60, oracle_random_sanity},
    {5, "budget monotonicity", 20 * 60, budget_monotonicity},
    {6, "OMNI complementarity", 30 * 60, omni_complementarity},
    {7, "mutation protocol structure", 60, mutation_structure},
    {8, "NAS transfer", 30 * 60, nas_transfer},
    {9, "CLI determinism", 5 * 60, cli_determinism},
    {10, "Pareto correctness", 10, pareto_oracle},
};

int prepare(const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) {
    try {
      const auto store = predbench::BenchmarkStore::load(path);
      if (store.header() == store_header() && store.size() == kStoreSize) {
        std::cout << "store " << path.string() << " is up to date\n";
        return 0;
      }
    } catch (const predbench::Error&) {
    }
  }
  predbench::BuildOptions options;
  options.n_archs = kStoreSize;
  options.threads = 0;
  options.log = [](const std::string& line) { std::cerr << line << '\n'; };
  const auto start = std::chrono::steady_clock::now();
  const auto store = predbench::BenchmarkStore::build(store_header(), options);
  std::filesystem::create_directories(path.parent_path());
  store.save(path);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "built " << kStoreSize << " architectures in " << secs << " s\n";
  return 0;
}

}  // namespace
}  // namespace acceptance

int main(int argc, char** argv) {
  using namespace acceptance;
  CLI::App app{"predbench acceptance criteria"};
  std::vector<int> selected;
  std::filesystem::path prepare_path;
  Context ctx;
  app.add_option("-c,--criterion", selected, "criterion number (repeatable; default all)")
      ->check(CLI::Range(1, 10));
  app.add_option("--store", ctx.store_path, "benchmark store built by --prepare");
  app.add_option("--prepare", prepare_path, "build the shared store at this path and exit");
  app.add_option("--cli", ctx.cli, "path to the predbench executable");
  app.add_option("--workdir", ctx.workdir, "scratch directory");
  app.add_option("--threads", ctx.threads, "worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  if (!prepare_path.empty()) return prepare(prepare_path);
  if (ctx.workdir.empty()) ctx.workdir = std::filesystem::temp_directory_path() / "predbench_acceptance";

  std::set<int> wanted(selected.begin(), selected.end());
  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run(ctx);
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = out.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("C%d %s %s: %s%s (%.1f s, limit %.0f s)\n", c.id, pass ? "PASS" : "FAIL",
                c.title, out.detail.c_str(), in_time ? "" : "; over time limit", secs,
                c.limit_seconds);
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}

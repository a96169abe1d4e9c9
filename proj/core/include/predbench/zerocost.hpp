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

#ifndef PREDBENCH_ZEROCOST_HPP_
#define PREDBENCH_ZEROCOST_HPP_

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "predbench/bench_store.hpp"
#include "predbench/network.hpp"
#include "predbench/predictor.hpp"

namespace predbench {

enum class ProxyKind { kSnip, kGradNorm, kFisher, kGrasp, kSynflow, kJacobCov, kFlops, kParams };

std::string to_string(ProxyKind kind);
// Throws InvalidArgument for unknown names.
ProxyKind parse_proxy_kind(std::string_view name);
const std::vector<ProxyKind>& all_proxy_kinds();

// Proxy statistics over an existing network and minibatch. Each returns
// kDegenerateScore when the statistic is not finite.
double snip_score(const GradientSnapshot& snap);
double grad_norm_score(const GradientSnapshot& snap);
double fisher_score(const GradientSnapshot& snap);
double grasp_score(const Network& net, const GradientSnapshot& snap);
double synflow_score(const Network& net);
// -sum_ij log(|rho_ij| + 1e-5) over the correlation matrix of the rows.
// Degenerate when any row has zero variance or there are fewer than 2 rows.
double jacob_cov_score(const std::vector<std::vector<double>>& jacobian_rows);

double proxy_score(ProxyKind kind, const Network& net, const GradientSnapshot& snap);

// Fixed minibatch of `batch_size` training examples drawn without
// replacement from `seed`.
void draw_minibatch(const SyntheticDataset& data, std::size_t batch_size,
                    std::uint64_t seed, std::vector<double>& xs, std::vector<int>& ys);

// Scores `arch` on a freshly initialized network. The weights are the ones
// the store would train from when seed == header.seed; the minibatch depends
// only on the seed.
double zero_cost_score(const StoreHeader& header, const SyntheticDataset& data,
                       const Architecture& arch, ProxyKind kind, std::uint64_t seed,
                       std::size_t batch_size = 32);

// Thread-safe memo of proxy scores keyed by (arch, proxy). Scores are a pure
// function of the key for one store, so sharing across predictors is safe.
class ZeroCostCache {
 public:
  double get(const Benchmark& bench, const Architecture& arch, ProxyKind kind,
             std::size_t batch_size);

 private:
  std::mutex mutex_;
  std::unordered_map<Architecture, std::unordered_map<int, double>> scores_;
};

// Charges the cost model's zero-cost constant per query; returns the
// degenerate score when that is not affordable.
class ZeroCostPredictor : public Predictor {
 public:
  explicit ZeroCostPredictor(ProxyKind kind, std::shared_ptr<ZeroCostCache> cache = nullptr,
                             std::size_t batch_size = 32);
  std::string name() const override { return to_string(kind_); }

 protected:
  void do_initialize(const InitContext&) override {}
  Prediction do_query(const Architecture& arch, BudgetAccount& account) override;

 private:
  ProxyKind kind_;
  std::shared_ptr<ZeroCostCache> cache_;
  std::size_t batch_size_;
};

}  // namespace predbench

#endif  // PREDBENCH_ZEROCOST_HPP_

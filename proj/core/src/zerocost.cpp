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

#include "predbench/zerocost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "predbench/error.hpp"
#include "predbench/random.hpp"

namespace predbench {

namespace {

struct ProxyName {
  ProxyKind kind;
  const char* name;
};

constexpr ProxyName kProxyNames[] = {
    {ProxyKind::kSnip, "snip"},         {ProxyKind::kGradNorm, "grad_norm"},
    {ProxyKind::kFisher, "fisher"},     {ProxyKind::kGrasp, "grasp"},
    {ProxyKind::kSynflow, "synflow"},   {ProxyKind::kJacobCov, "jacob_cov"},
    {ProxyKind::kFlops, "flops"},       {ProxyKind::kParams, "params"},
};

double finite_or_degenerate(double v) { return std::isfinite(v) ? v : kDegenerateScore; }

}  // namespace

std::string to_string(ProxyKind kind) {
  for (const auto& p : kProxyNames) {
    if (p.kind == kind) return p.name;
  }
  return "unknown";
}

ProxyKind parse_proxy_kind(std::string_view name) {
  for (const auto& p : kProxyNames) {
    if (name == p.name) return p.kind;
  }
  throw InvalidArgument("unknown zero-cost proxy '" + std::string(name) + "'");
}

const std::vector<ProxyKind>& all_proxy_kinds() {
  static const std::vector<ProxyKind> kinds = [] {
    std::vector<ProxyKind> v;
    for (const auto& p : kProxyNames) v.push_back(p.kind);
    return v;
  }();
  return kinds;
}

double snip_score(const GradientSnapshot& snap) {
  double s = 0.0;
  for (std::size_t i = 0; i < snap.params.size(); ++i) {
    s += std::abs(snap.params[i] * snap.gradients[i]);
  }
  return finite_or_degenerate(s);
}

double grad_norm_score(const GradientSnapshot& snap) {
  double s = 0.0;
  for (double g : snap.gradients) s += g * g;
  return finite_or_degenerate(std::sqrt(s));
}

double fisher_score(const GradientSnapshot& snap) {
  double s = 0.0;
  const double n = static_cast<double>(snap.batch_size);
  for (const auto& trace : snap.activations) {
    for (std::size_t u = 0; u < trace.width; ++u) {
      double acc = 0.0;
      for (std::size_t b = 0; b < snap.batch_size; ++b) {
        const double zg = trace.values[b * trace.width + u] * trace.grads[b * trace.width + u];
        acc += zg * zg;
      }
      s += 0.5 * acc / n;
    }
  }
  return finite_or_degenerate(s);
}

double grasp_score(const Network& net, const GradientSnapshot& snap) {
  const auto hg = net.hessian_vector_product(snap.batch_x, snap.batch_y, snap.gradients);
  double s = 0.0;
  for (std::size_t i = 0; i < hg.size(); ++i) s -= hg[i] * snap.params[i];
  return finite_or_degenerate(s);
}

double synflow_score(const Network& net) {
  std::vector<double> grad;
  net.linearized_objective(grad);
  double s = 0.0;
  const auto& p = net.params();
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i]) * grad[i];
  return finite_or_degenerate(s);
}

double jacob_cov_score(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n < 2) return kDegenerateScore;
  const std::size_t m = rows[0].size();
  std::vector<std::vector<double>> z(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != m) throw InvalidArgument("jacobian rows differ in length");
    const double mean = std::accumulate(rows[i].begin(), rows[i].end(), 0.0) / m;
    double ss = 0.0;
    for (double v : rows[i]) ss += (v - mean) * (v - mean);
    if (!(ss > 1e-300) || !std::isfinite(ss)) return kDegenerateScore;
    const double inv = 1.0 / std::sqrt(ss);
    for (std::size_t j = 0; j < m; ++j) z[i][j] = (rows[i][j] - mean) * inv;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double rho = 0.0;
      for (std::size_t k = 0; k < m; ++k) rho += z[i][k] * z[j][k];
      s -= std::log(std::abs(rho) + 1e-5);
    }
  }
  return finite_or_degenerate(s);
}

double proxy_score(ProxyKind kind, const Network& net, const GradientSnapshot& snap) {
  switch (kind) {
    case ProxyKind::kSnip: return snip_score(snap);
    case ProxyKind::kGradNorm: return grad_norm_score(snap);
    case ProxyKind::kFisher: return fisher_score(snap);
    case ProxyKind::kGrasp: return grasp_score(net, snap);
    case ProxyKind::kSynflow: return synflow_score(net);
    case ProxyKind::kJacobCov: return jacob_cov_score(snap.jacobian_rows);
    case ProxyKind::kFlops: return static_cast<double>(net.flop_count());
    case ProxyKind::kParams: return static_cast<double>(net.param_count());
  }
  throw InvalidArgument("unhandled proxy kind");
}

void draw_minibatch(const SyntheticDataset& data, std::size_t batch_size,
                    std::uint64_t seed, std::vector<double>& xs, std::vector<int>& ys) {
  const std::size_t n = data.train_size();
  if (batch_size == 0 || batch_size > n) {
    throw InvalidArgument("minibatch size " + std::to_string(batch_size) +
                          " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(seed, {fnv1a("minibatch")}));
  for (std::size_t i = 0; i < batch_size; ++i) {
    std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
  }
  const std::size_t d = data.input_dim;
  xs.resize(batch_size * d);
  ys.resize(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    std::copy_n(data.train_x.begin() + idx[i] * d, d, xs.begin() + i * d);
    ys[i] = data.train_y[idx[i]];
  }
}

double zero_cost_score(const StoreHeader& header, const SyntheticDataset& data,
                       const Architecture& arch, ProxyKind kind, std::uint64_t seed,
                       std::size_t batch_size) {
  const std::uint64_t idx = arch.index(header.space);
  const Network net =
      Network::instantiate(header.space, arch, header.net, data.input_dim,
                           data.num_classes, derive_seed(seed, {idx, fnv1a("init")}));
  if (kind == ProxyKind::kFlops) return static_cast<double>(net.flop_count());
  if (kind == ProxyKind::kParams) return static_cast<double>(net.param_count());
  if (kind == ProxyKind::kSynflow) return synflow_score(net);
  std::vector<double> xs;
  std::vector<int> ys;
  draw_minibatch(data, batch_size, seed, xs, ys);
  return proxy_score(kind, net, net.snapshot(xs, ys));
}

double ZeroCostCache::get(const Benchmark& bench, const Architecture& arch, ProxyKind kind,
                          std::size_t batch_size) {
  const int key = static_cast<int>(kind);
  {
    std::lock_guard lock(mutex_);
    auto it = scores_.find(arch);
    if (it != scores_.end()) {
      auto jt = it->second.find(key);
      if (jt != it->second.end()) return jt->second;
    }
  }
  const double s = zero_cost_score(bench.header(), bench.dataset(), arch, kind,
                                   bench.header().seed, batch_size);
  std::lock_guard lock(mutex_);
  scores_[arch][key] = s;
  return s;
}

ZeroCostPredictor::ZeroCostPredictor(ProxyKind kind, std::shared_ptr<ZeroCostCache> cache,
                                     std::size_t batch_size)
    : kind_(kind),
      cache_(cache ? std::move(cache) : std::make_shared<ZeroCostCache>()),
      batch_size_(batch_size) {}

Prediction ZeroCostPredictor::do_query(const Architecture& arch, BudgetAccount& account) {
  Prediction p;
  const double cost = bench().cost().zero_cost_query;
  if (!account.can_afford(cost)) {
    p.degraded = true;
    return p;
  }
  account.charge(cost);
  p.score = cache_->get(bench(), arch, kind_, batch_size_);
  return p;
}

}  // namespace predbench

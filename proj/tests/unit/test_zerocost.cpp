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


#include <cmath>
#include <limits>

#include "doctest.h"
#include "predbench/metrics.hpp"
#include "predbench/zerocost.hpp"
#include "support.hpp"

using namespace predbench;

namespace {

const SearchSpace kSpace;

struct Probe {
  Network net;
  std::vector<double> xs;
  std::vector<int> ys;
};

Probe probe(const Architecture& arch, std::uint64_t seed, NetConfig cfg = {}) {
  Probe p{Network::instantiate(kSpace, arch, cfg, 2, 3, seed), {}, {}};
  Rng rng(seed + 1);
  for (int i = 0; i < 8; ++i) {
    p.xs.push_back(2 * uniform01(rng) - 1);
    p.xs.push_back(2 * uniform01(rng) - 1);
    p.ys.push_back(static_cast<int>(uniform_index(rng, 3)));
  }
  return p;
}

std::vector<double> fd_gradient(Network& net, const std::vector<double>& xs,
                                const std::vector<int>& ys) {
  const double eps = 1e-5;
  std::vector<double> g(net.params().size()), scratch;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double keep = net.mutable_params()[j];
    net.mutable_params()[j] = keep + eps;
    const double up = net.loss_and_gradient(xs, ys, scratch);
    net.mutable_params()[j] = keep - eps;
    const double down = net.loss_and_gradient(xs, ys, scratch);
    net.mutable_params()[j] = keep;
    g[j] = (up - down) / (2 * eps);
  }
  return g;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); }

}  // namespace

TEST_CASE("proxy names") {
  CHECK(all_proxy_kinds().size() == 8);
  for (ProxyKind k : all_proxy_kinds()) CHECK(parse_proxy_kind(to_string(k)) == k);
  CHECK_THROWS(parse_proxy_kind("zen"));
}

TEST_CASE("gradient-based proxies agree with finite differences") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    Probe p = probe(sample_uniform(kSpace, rng), 100 + t, NetConfig{4, 1});
    const GradientSnapshot snap = p.net.snapshot(p.xs, p.ys);
    const auto fd = fd_gradient(p.net, p.xs, p.ys);
    double norm2 = 0.0, snip = 0.0;
    for (std::size_t j = 0; j < fd.size(); ++j) {
      norm2 += fd[j] * fd[j];
      snip += std::abs(p.net.params()[j] * fd[j]);
    }
    CHECK(rel(grad_norm_score(snap), std::sqrt(norm2)) < 1e-3);
    CHECK(rel(snip_score(snap), snip) < 1e-3);
  }
}

TEST_CASE("grasp matches a finite-difference Hessian-gradient product") {
  Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    Probe p = probe(sample_uniform(kSpace, rng), 200 + t, NetConfig{4, 1});
    const GradientSnapshot snap = p.net.snapshot(p.xs, p.ys);
    const double eps = 1e-5;
    std::vector<double> up, down;
    auto& params = p.net.mutable_params();
    const std::vector<double> keep = params;
    for (std::size_t j = 0; j < params.size(); ++j) params[j] = keep[j] + eps * snap.gradients[j];
    p.net.loss_and_gradient(p.xs, p.ys, up);
    for (std::size_t j = 0; j < params.size(); ++j) params[j] = keep[j] - eps * snap.gradients[j];
    p.net.loss_and_gradient(p.xs, p.ys, down);
    params = keep;
    double oracle = 0.0;
    for (std::size_t j = 0; j < keep.size(); ++j) oracle -= keep[j] * (up[j] - down[j]) / (2 * eps);
    if (std::abs(oracle) < 1e-10) continue;
    CHECK(rel(grasp_score(p.net, snap), oracle) < 1e-4);
  }
}

TEST_CASE("synflow matches finite differences of the linearized objective") {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    Probe p = probe(sample_uniform(kSpace, rng), 300 + t, NetConfig{4, 1});
    const double expected_score = synflow_score(p.net);
    // With every parameter made positive, |theta| = theta and R can be
    // differentiated by perturbation.
    for (auto& v : p.net.mutable_params()) v = std::abs(v) + 1e-3;
    const double score = synflow_score(p.net);
    std::vector<double> g;
    const double eps = 1e-6;
    double oracle = 0.0;
    for (std::size_t j = 0; j < p.net.params().size(); ++j) {
      const double keep = p.net.params()[j];
      p.net.mutable_params()[j] = keep + eps;
      const double up = p.net.linearized_objective(g);
      p.net.mutable_params()[j] = keep - eps;
      const double down = p.net.linearized_objective(g);
      p.net.mutable_params()[j] = keep;
      oracle += keep * (up - down) / (2 * eps);
    }
    CHECK(rel(score, oracle) < 1e-5);
    CHECK(expected_score >= 0.0);
  }
}

TEST_CASE("a zeroed tensor contributes nothing to synflow") {
  const Architecture arch({2, 3, 2, 1, 2, 4});
  Probe p = probe(arch, 7);
  const auto& layout = p.net.layout();
  const ParamTensor& zeroed = layout.tensors[2];  // first dense edge
  std::fill_n(p.net.mutable_params().begin() + static_cast<std::ptrdiff_t>(zeroed.offset),
              zeroed.size, 0.0);
  std::vector<double> grad;
  p.net.linearized_objective(grad);
  double others = 0.0;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    if (j >= zeroed.offset && j < zeroed.offset + zeroed.size) continue;
    others += std::abs(p.net.params()[j]) * grad[j];
  }
  CHECK(synflow_score(p.net) == doctest::Approx(others).epsilon(1e-12));
}

TEST_CASE("fisher sums squared activation saliencies per unit") {
  Probe p = probe(Architecture({2, 4, 3, 1, 2, 0}), 11);
  const GradientSnapshot snap = p.net.snapshot(p.xs, p.ys);
  REQUIRE_FALSE(snap.activations.empty());
  double oracle = 0.0;
  for (const auto& t : snap.activations) {
    for (std::size_t u = 0; u < t.width; ++u) {
      double sum = 0.0;
      for (std::size_t b = 0; b < snap.batch_size; ++b) {
        sum += std::pow(t.values[b * t.width + u] * t.grads[b * t.width + u], 2);
      }
      oracle += 0.5 * sum / static_cast<double>(snap.batch_size);
    }
  }
  CHECK(fisher_score(snap) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("jacob_cov scores the correlation matrix of the Jacobian rows") {
  Rng rng(5);
  std::vector<std::vector<double>> rows(6, std::vector<double>(6));
  for (auto& r : rows) {
    for (auto& v : r) v = uniform01(rng);
  }
  double oracle = 0.0;
  for (const auto& a : rows) {
    for (const auto& b : rows) oracle -= std::log(std::abs(pearson(a, b)) + 1e-5);
  }
  CHECK(jacob_cov_score(rows) == doctest::Approx(oracle).epsilon(1e-10));

  rows[3].assign(6, 0.25);
  CHECK(is_degenerate(jacob_cov_score(rows)));
  CHECK(is_degenerate(jacob_cov_score({{1.0, 2.0, 3.0}})));
}

TEST_CASE("flops and params depend only on the op multiset and rank identically") {
  const StoreHeader h;
  const SyntheticDataset data = make_dataset(h.dataset);
  const Architecture a({2, 3, 0, 1, 4, 2}), b({3, 2, 2, 4, 1, 0});
  for (ProxyKind k : {ProxyKind::kFlops, ProxyKind::kParams}) {
    CHECK(zero_cost_score(h, data, a, k, 1) == zero_cost_score(h, data, b, k, 1));
  }
  Rng rng(8);
  std::vector<double> flops, params, flops_scaled;
  StoreHeader scaled = h;
  scaled.net.init_gain = 3.0;
  for (int i = 0; i < 200; ++i) {
    const Architecture x = sample_uniform(kSpace, rng);
    flops.push_back(zero_cost_score(h, data, x, ProxyKind::kFlops, 1));
    params.push_back(zero_cost_score(h, data, x, ProxyKind::kParams, 1));
    flops_scaled.push_back(zero_cost_score(scaled, data, x, ProxyKind::kFlops, 1));
  }
  CHECK(spearman(flops, params) == 1.0);
  CHECK(flops_scaled == flops);
}

TEST_CASE("proxies are deterministic and the saliency proxies are non-negative") {
  const StoreHeader h;
  const SyntheticDataset data = make_dataset(h.dataset);
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    const Architecture x = sample_uniform(kSpace, rng);
    for (ProxyKind k : all_proxy_kinds()) {
      const double s = zero_cost_score(h, data, x, k, 4);
      CHECK((s == zero_cost_score(h, data, x, k, 4) || (std::isnan(s))));
      CHECK((std::isfinite(s) || is_degenerate(s)));
      if (k == ProxyKind::kSnip || k == ProxyKind::kGradNorm || k == ProxyKind::kFisher ||
          k == ProxyKind::kSynflow) {
        CHECK((s >= 0.0 || is_degenerate(s)));
      }
    }
  }
}

TEST_CASE("the predictor charges the zero-cost price and degrades when it cannot pay") {
  const Benchmark bench(unit::small_store());
  ZeroCostPredictor p(ProxyKind::kSynflow);
  BudgetAccount init;
  unit::init(p, bench, init, {}, 0.05);
  const Architecture a = unit::small_store().records()[0].arch;
  BudgetAccount enough(0.05);
  const Prediction ok = p.query(a, enough);
  CHECK(ok.cost_charged == 0.05);
  CHECK_FALSE(ok.degraded);
  CHECK(ok.score == zero_cost_score(bench.header(), bench.dataset(), a, ProxyKind::kSynflow,
                                    bench.header().seed));
  BudgetAccount poor(0.01);
  const Prediction none = p.query(a, poor);
  CHECK(none.degraded);
  CHECK(is_degenerate(none.score));
  CHECK(none.cost_charged == 0.0);
}

TEST_CASE("synflow or jacob_cov keeps up with flops on a generated benchmark") {
  StoreHeader h;
  h.seed = 3;
  BuildOptions o;
  o.n_archs = 200;
  const BenchmarkStore store = BenchmarkStore::build(h, o);
  const SyntheticDataset data = make_dataset(h.dataset);
  std::vector<double> truth;
  std::vector<std::vector<double>> scores(3);
  const ProxyKind kinds[] = {ProxyKind::kFlops, ProxyKind::kSynflow, ProxyKind::kJacobCov};
  for (const auto& r : store.records()) {
    truth.push_back(r.final_val_acc());
    for (int k = 0; k < 3; ++k) {
      scores[k].push_back(zero_cost_score(h, data, r.arch, kinds[k], h.seed));
    }
  }
  const double flops = kendall_tau(sanitize_scores(scores[0]), truth);
  const double best = std::max(kendall_tau(sanitize_scores(scores[1]), truth),
                               kendall_tau(sanitize_scores(scores[2]), truth));
  MESSAGE("flops KT " << flops << ", best of synflow/jacob_cov " << best);
  CHECK(best >= flops - 0.05);
}

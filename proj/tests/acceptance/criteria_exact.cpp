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

// Criteria checked against exact, independently computed answers.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <utility>

#include "acceptance.hpp"
#include "predbench/metrics.hpp"
#include "predbench/network.hpp"
#include "predbench/random.hpp"
#include "predbench/search_space.hpp"

namespace acceptance {

using namespace predbench;

namespace {

struct PairCounts {
  std::int64_t n0 = 0, tied_x = 0, tied_y = 0, s = 0;
};

// Every pair, one at a time.
PairCounts brute_force_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  PairCounts c;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++c.n0;
      const bool tx = x[i] == x[j], ty = y[i] == y[j];
      if (tx) ++c.tied_x;
      if (ty) ++c.tied_y;
      if (!tx && !ty) c.s += ((x[i] < x[j]) == (y[i] < y[j])) ? 1 : -1;
    }
  }
  return c;
}

// rank = 1 + (#smaller) + (#equal - 1) / 2
std::vector<double> counted_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

double textbook_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nan("");
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

std::vector<double> random_vector(Rng& rng, std::size_t n, bool with_ties) {
  std::vector<double> v(n);
  const std::size_t levels = 2 + uniform_index(rng, 6);
  for (auto& e : v) {
    e = with_ties ? static_cast<double>(uniform_index(rng, levels)) : uniform01(rng);
  }
  return v;
}

}  // namespace

Outcome metric_oracles(Context&) {
  Rng rng(derive_seed(1, {fnv1a("metric_oracles")}));
  std::size_t kt_mismatch = 0, sparse_mismatch = 0, spearman_checked = 0, sparse_checked = 0;
  double spearman_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 49);
    const bool ties = trial % 2 == 0;
    const auto x = random_vector(rng, n, ties);
    const auto y = random_vector(rng, n, ties && trial % 4 == 0);

    const PairCounts bf = brute_force_pairs(x, y);
    const KendallCounts kc = kendall_counts(x, y);
    const double dx = static_cast<double>(bf.n0 - bf.tied_x);
    const double dy = static_cast<double>(bf.n0 - bf.tied_y);
    const double bf_tau = dx > 0 && dy > 0 ? static_cast<double>(bf.s) / std::sqrt(dx * dy)
                                           : std::nan("");
    const double tau = kendall_tau(x, y);
    const bool same_tau = (std::isnan(bf_tau) && std::isnan(tau)) || bf_tau == tau;
    if (kc.n0 != bf.n0 || kc.tied_x != bf.tied_x || kc.tied_y != bf.tied_y || kc.s != bf.s ||
        !same_tau) {
      ++kt_mismatch;
    }

    const double ref = textbook_pearson(counted_ranks(x), counted_ranks(y));
    const double sp = spearman(x, y);
    if (std::isnan(ref) != std::isnan(sp)) {
      spearman_err = 1.0;
    } else if (!std::isnan(ref)) {
      spearman_err = std::max(spearman_err, std::abs(ref - sp));
      ++spearman_checked;
    }

    if (!ties) {
      ++sparse_checked;
      if (sparse_kendall_tau(x, y, 1e-12) != kendall_tau(x, y)) ++sparse_mismatch;
    }
  }
  const bool pass = kt_mismatch == 0 && spearman_err <= 1e-12 && sparse_mismatch == 0;
  return {pass, cat("kendall mismatches ", kt_mismatch, "/1000; max |spearman - rank-pearson| ",
                    spearman_err, " over ", spearman_checked, "; sparse(1e-12) mismatches ",
                    sparse_mismatch, "/", sparse_checked)};
}

namespace {

double relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  // Both gradients vanish: compare absolutely.
  if (scale < 1e-10) return std::sqrt(diff);
  return std::sqrt(diff) / scale;
}

}  // namespace

Outcome gradient_check(Context&) {
  const SearchSpace space;
  const double eps = 1e-4;
  Rng rng(derive_seed(2, {fnv1a("gradient_check")}));
  std::map<std::string, double> worst;
  for (const auto& op : space.ops()) worst[op] = -1.0;
  for (int net_i = 0; net_i < 100; ++net_i) {
    // The first five cells each use a single op, so every op is covered.
    Architecture arch = net_i < 5 ? Architecture(std::vector<std::uint8_t>(
                                        space.num_edges(), static_cast<std::uint8_t>(net_i)))
                                  : sample_uniform(space, rng);
    NetConfig cfg;
    cfg.width = 3 + uniform_index(rng, 4);
    cfg.cells = 1 + uniform_index(rng, 2);
    const std::size_t classes = 2 + uniform_index(rng, 2);
    Network net = Network::instantiate(space, arch, cfg, 2, classes, rng());
    const std::size_t batch = 6;
    std::vector<double> xs(batch * 2);
    std::vector<int> ys(batch);
    for (auto& v : xs) v = 2.0 * uniform01(rng) - 1.0;
    for (auto& c : ys) c = static_cast<int>(uniform_index(rng, classes));

    std::vector<double> grad;
    net.loss_and_gradient(xs, ys, grad);
    std::vector<double> fd(grad.size()), scratch;
    auto& params = net.mutable_params();
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double keep = params[j];
      params[j] = keep + eps;
      const double up = net.loss_and_gradient(xs, ys, scratch);
      params[j] = keep - eps;
      const double down = net.loss_and_gradient(xs, ys, scratch);
      params[j] = keep;
      fd[j] = (up - down) / (2.0 * eps);
    }
    const double whole = relative_error(grad, fd);
    const NetworkLayout& layout = net.layout();
    const std::size_t w = layout.width;
    for (const EdgeSlot& e : layout.edges) {
      const std::string& op = space.op_name(arch.op(e.edge));
      double err = whole;
      auto tensor_err = [&](std::size_t off, std::size_t len) {
        err = std::max(err, relative_error(std::span(grad).subspan(off, len),
                                           std::span(fd).subspan(off, len)));
      };
      if (e.kind == OpKind::kDense) tensor_err(e.w1, w * w);
      if (e.kind == OpKind::kDenseWide) {
        tensor_err(e.w1, 2 * w * w);
        tensor_err(e.w2, 2 * w * w);
      }
      worst[op] = std::max(worst[op], err);
    }
  }
  bool pass = true;
  std::string detail = "max relative error by op:";
  for (const auto& [op, err] : worst) {
    pass = pass && err >= 0.0 && err < 1e-3;
    detail += cat(" ", op, "=", err);
  }
  return {pass, detail + " (100 networks, eps 1e-4, tolerance 1e-3)"};
}

Outcome flops_params_rank(Context&) {
  const SearchSpace space;
  Rng rng(derive_seed(3, {fnv1a("flops_params")}));
  std::vector<double> flops, params;
  for (int i = 0; i < 500; ++i) {
    const auto layout =
        NetworkLayout::compile(space, sample_uniform(space, rng), NetConfig{}, 2, 3);
    flops.push_back(static_cast<double>(layout.flop_count));
    params.push_back(static_cast<double>(layout.param_count));
  }
  const double rho = spearman(flops, params);
  return {rho == 1.0, cat("Spearman(flops, params) = ", rho, " over 500 architectures")};
}

Outcome pareto_oracle(Context&) {
  Rng rng(derive_seed(10, {fnv1a("pareto_oracle")}));
  std::size_t mismatches = 0, cells = 0;
  for (int g = 0; g < 1000; ++g) {
    const std::size_t np = 1 + uniform_index(rng, 7);
    std::vector<std::string> names;
    while (names.size() < np) {
      std::string name(1 + uniform_index(rng, 3), 'a');
      for (auto& ch : name) ch = static_cast<char>('a' + uniform_index(rng, 4));
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
    BudgetGrid bg;
    const std::size_t ni = 1 + uniform_index(rng, 4), nq = 1 + uniform_index(rng, 5);
    for (std::size_t i = 0; i < ni; ++i) bg.init_levels.push_back(static_cast<double>(i));
    for (std::size_t q = 0; q < nq; ++q) bg.query_levels.push_back(0.5 * static_cast<double>(q + 1));
    ResultGrid grid(names, bg);
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t i = 0; i < ni; ++i) {
        for (std::size_t q = 0; q < nq; ++q) {
          // Coarse values so ties are common.
          grid.at(p, i, q, MetricKind::kKendallTau).mean =
              static_cast<double>(uniform_index(rng, 5)) / 4.0 - 0.5;
        }
      }
    }
    const ParetoResult got = pareto_best(grid, MetricKind::kKendallTau);
    std::vector<std::string> expected_set;
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t q = 0; q < nq; ++q) {
        ++cells;
        std::vector<std::size_t> order(np);
        for (std::size_t p = 0; p < np; ++p) order[p] = p;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return std::make_pair(-mean_kt(grid, a, i, q), names[a]) <
                 std::make_pair(-mean_kt(grid, b, i, q), names[b]);
        });
        const std::size_t best = order.front();
        if (got.winner[i][q] != best) ++mismatches;
        expected_set.push_back(names[best]);
      }
    }
    std::sort(expected_set.begin(), expected_set.end());
    expected_set.erase(std::unique(expected_set.begin(), expected_set.end()), expected_set.end());
    if (got.pareto_set != expected_set) ++mismatches;
  }
  return {mismatches == 0,
          cat("mismatches ", mismatches, " over 1000 grids (", cells, " cells)")};
}

}  // namespace acceptance

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

#include "predbench/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "predbench/error.hpp"

namespace predbench {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("metric inputs differ in length");
  if (x.size() < 2) throw InvalidArgument("metrics need at least two points");
}

// Sorts v in place and returns the number of inversions (pairs i<j with
// v[i] > v[j]).
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return inv;
}

// Pairs within runs of equal values in an already sorted sequence.
template <class Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& eq) {
  std::int64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && eq(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kPearson: return "pearson";
    case MetricKind::kSpearman: return "spearman";
    case MetricKind::kKendallTau: return "kendall_tau";
    case MetricKind::kSparseKendallTau: return "sparse_kendall_tau";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  for (MetricKind k : all_metric_kinds()) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

const std::array<MetricKind, kNumMetrics>& all_metric_kinds() {
  static const std::array<MetricKind, kNumMetrics> kinds = {
      MetricKind::kPearson, MetricKind::kSpearman, MetricKind::kKendallTau,
      MetricKind::kSparseKendallTau};
  return kinds;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return kUndefinedMetric;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j + 1);  // mean of i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double KendallCounts::tau_b() const {
  const double dx = static_cast<double>(n0 - tied_x);
  const double dy = static_cast<double>(n0 - tied_y);
  if (!(dx > 0.0) || !(dy > 0.0)) return kUndefinedMetric;
  return static_cast<double>(s) / std::sqrt(dx * dy);
}

KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  KendallCounts c;
  c.n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  c.tied_x = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]];
  });
  const std::int64_t tied_xy = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
  });
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  // Inversions among y (sorted by x, ties in x broken by y) are exactly the
  // discordant pairs.
  const std::int64_t discordant = merge_count(ys, buf, 0, n);
  c.tied_y = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });
  // concordant + discordant = n0 - tied_x - tied_y + tied_xy
  c.s = c.n0 - c.tied_x - c.tied_y + tied_xy - 2 * discordant;
  return c;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  return kendall_counts(x, y).tau_b();
}

double sparse_kendall_tau(std::span<const double> x, std::span<const double> y,
                          double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("sparse resolution must be positive");
  std::vector<double> rounded(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    rounded[i] = std::round(y[i] / resolution) * resolution;
  }
  return kendall_tau(x, rounded);
}

std::vector<double> sanitize_scores(std::span<const double> scores) {
  double lo = std::numeric_limits<double>::infinity();
  for (double s : scores) {
    if (std::isfinite(s)) lo = std::min(lo, s);
  }
  std::vector<double> out(scores.begin(), scores.end());
  const double floor = std::isfinite(lo) ? lo - std::max(1.0, std::abs(lo)) : 0.0;
  for (double& s : out) {
    if (!std::isfinite(s)) s = floor;
  }
  return out;
}

std::array<double, kNumMetrics> compute_metrics(std::span<const double> scores,
                                                std::span<const double> truth,
                                                double sparse_resolution) {
  const auto x = sanitize_scores(scores);
  return {pearson(x, truth), spearman(x, truth), kendall_tau(x, truth),
          sparse_kendall_tau(x, truth, sparse_resolution)};
}

}  // namespace predbench

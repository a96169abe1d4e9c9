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

#ifndef PREDBENCH_METRICS_HPP_
#define PREDBENCH_METRICS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace predbench {

// Returned when a metric is undefined (zero variance in either input).
inline constexpr double kUndefinedMetric = std::numeric_limits<double>::quiet_NaN();
inline bool is_undefined(double metric) { return std::isnan(metric); }

enum class MetricKind { kPearson, kSpearman, kKendallTau, kSparseKendallTau };
inline constexpr std::size_t kNumMetrics = 4;

std::string to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);
const std::array<MetricKind, kNumMetrics>& all_metric_kinds();

// Inputs must have equal length >= 2 (InvalidArgument otherwise).
double pearson(std::span<const double> x, std::span<const double> y);
// Pearson of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);
// Tau-b, O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y);
// Tau-b after rounding y to multiples of `resolution` (> 0).
double sparse_kendall_tau(std::span<const double> x, std::span<const double> y,
                          double resolution = 0.001);

// 1-based ranks, ties receive the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> v);

// Pair counts behind tau-b. n0 = n(n-1)/2; tied_x / tied_y count pairs tied
// in x / y (including joint ties); s = concordant - discordant.
struct KendallCounts {
  std::int64_t n0 = 0;
  std::int64_t tied_x = 0;
  std::int64_t tied_y = 0;
  std::int64_t s = 0;

  double tau_b() const;
};
KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y);

// Replaces degenerate (non-finite) scores with min - max(1, |min|) over the
// finite ones, so they tie at the bottom rank. All-degenerate input becomes
// all zeros.
std::vector<double> sanitize_scores(std::span<const double> scores);

// All four metrics in MetricKind order; `scores` are sanitized first.
std::array<double, kNumMetrics> compute_metrics(std::span<const double> scores,
                                                std::span<const double> truth,
                                                double sparse_resolution = 0.001);

}  // namespace predbench

#endif  // PREDBENCH_METRICS_HPP_

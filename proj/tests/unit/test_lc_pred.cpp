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


#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "predbench/error.hpp"
#include "predbench/lc_pred.hpp"
#include "predbench/metrics.hpp"
#include "support.hpp"

using namespace predbench;

namespace {

LearningCurve curve_of(std::vector<double> train_loss, std::vector<double> val_acc,
                       std::vector<double> val_loss) {
  LearningCurve c;
  c.train_loss = std::move(train_loss);
  c.val_acc = std::move(val_acc);
  c.val_loss = std::move(val_loss);
  return c;
}

std::vector<double> sample_model(double (*f)(double), std::size_t k) {
  std::vector<double> y;
  for (std::size_t t = 1; t <= k; ++t) y.push_back(f(static_cast<double>(t)));
  return y;
}

}  // namespace

TEST_CASE("early stopping reads the last epoch") {
  const LearningCurve c = curve_of({1.0, 0.5, 0.25}, {0.10, 0.20, 0.30}, {2.0, 1.5, 1.2});
  CHECK(early_stop_acc(c.prefix(2)) == 0.20);
  CHECK(early_stop_loss(c.prefix(2)) == -1.5);
}

TEST_CASE("sums of training losses") {
  const LearningCurve c = curve_of({1.0, 0.5, 0.25}, {0.1, 0.2, 0.3}, {1, 1, 1});
  CHECK(sotl(c) == -1.75);
  CHECK(sotl_e(c) == -0.25);
  CHECK(sotl(c.prefix(1)) == sotl_e(c.prefix(1)));

  Rng rng(2);
  LearningCurve r;
  for (int i = 0; i < 30; ++i) {
    r.train_loss.push_back(uniform01(rng));
    r.val_acc.push_back(uniform01(rng));
    r.val_loss.push_back(uniform01(rng));
  }
  for (std::size_t k = 2; k <= 30; ++k) {
    CHECK(sotl(r.prefix(k)) - sotl(r.prefix(k - 1)) == doctest::Approx(-r.train_loss[k - 1]).epsilon(1e-12));
  }
}

TEST_CASE("pow3 prefixes extrapolate to the generating model") {
  const auto y = sample_model([](double t) { return 0.9 - 0.5 / t; }, 10);
  for (LceVariant v : {LceVariant::kWeighted, LceVariant::kMean}) {
    const LceResult r = lce_extrapolate(y, 100, v, 3, {CurveModelKind::kPow3});
    CHECK(std::abs(r.score - 0.895) < 1e-3);
    CHECK_FALSE(r.fallback);
  }
  CHECK(std::abs(lce_extrapolate(y, 100, LceVariant::kWeighted, 3).score - 0.895) < 1e-3);
}

TEST_CASE("a constant curve extrapolates to itself") {
  const std::vector<double> y(12, 0.5);
  for (LceVariant v : {LceVariant::kWeighted, LceVariant::kMean}) {
    CHECK(std::abs(lce_extrapolate(y, 50, v, 1).score - 0.5) <= 1e-6);
  }
}

TEST_CASE("extrapolating to the last sample interpolates it") {
  const auto y = sample_model([](double t) { return 0.85 - 0.6 * std::exp(-0.3 * t); }, 20);
  const LceResult r = lce_extrapolate(y, 20, LceVariant::kWeighted, 4, {CurveModelKind::kExp3});
  CHECK(std::abs(r.score - y.back()) < 1e-3);
}

TEST_CASE("combining fits: inverse-MSE weights and plain mean") {
  Rng rng(6);
  std::vector<double> y;
  for (int t = 1; t <= 15; ++t) y.push_back(0.8 - 0.4 / t + 0.02 * (uniform01(rng) - 0.5));
  const LceResult w = lce_extrapolate(y, 40, LceVariant::kWeighted, 7);
  const LceResult m = lce_extrapolate(y, 40, LceVariant::kMean, 7);
  REQUIRE(w.fits.size() == 3);
  double num = 0, den = 0, sum = 0;
  std::size_t used = 0;
  for (const auto& f : w.fits) {
    if (!f.converged) continue;
    const double p = std::clamp(f.predict(40), 0.0, 1.25);
    num += p / (f.mse + 1e-12);
    den += 1 / (f.mse + 1e-12);
    sum += p;
    ++used;
  }
  REQUIRE(used > 0);
  CHECK(w.score == doctest::Approx(std::clamp(num / den, 0.0, 1.25)).epsilon(1e-12));
  CHECK(m.score == doctest::Approx(std::clamp(sum / used, 0.0, 1.25)).epsilon(1e-12));
  for (const auto& f : w.fits) {
    CHECK(std::isfinite(f.mse));
    CHECK(f.params[0] >= 0.0);
    CHECK(f.params[0] <= 1.25);
  }
}

TEST_CASE("model order does not matter") {
  const std::vector<double> y = {0.3, 0.45, 0.52, 0.58, 0.6, 0.63, 0.64, 0.66};
  const auto a = lce_extrapolate(y, 50, LceVariant::kWeighted, 2,
                                 {CurveModelKind::kPow3, CurveModelKind::kExp3, CurveModelKind::kLogPower});
  const auto b = lce_extrapolate(y, 50, LceVariant::kWeighted, 2,
                                 {CurveModelKind::kLogPower, CurveModelKind::kPow3, CurveModelKind::kExp3});
  CHECK(a.score == b.score);
}

TEST_CASE("extrapolation needs four points and falls back without models") {
  const std::vector<double> y = {0.2, 0.3, 0.35};
  CHECK_THROWS_AS(lce_extrapolate(y, 50, LceVariant::kWeighted), InsufficientData);
  const std::vector<double> z = {0.2, 0.3, 0.35, 0.37};
  const LceResult r = lce_extrapolate(z, 50, LceVariant::kWeighted, 0, {});
  CHECK(r.fallback);
  CHECK(r.score == 0.37);
}

TEST_CASE("curve models evaluate their formulas") {
  CHECK(curve_model_eval(CurveModelKind::kPow3, {0.9, 0.5, 1.0}, 100.0) == doctest::Approx(0.895));
  CHECK(curve_model_eval(CurveModelKind::kExp3, {0.9, 0.5, 0.1}, 10.0) ==
        doctest::Approx(0.9 - 0.5 * std::exp(-1.0)));
  CHECK(curve_model_eval(CurveModelKind::kLogPower, {0.8, 2.0, 1.0}, std::exp(1.0)) ==
        doctest::Approx(0.4));
}

TEST_CASE("learning-curve predictors spend their query budget") {
  const BenchmarkStore& store = unit::small_store();
  const Benchmark bench(store);
  const auto test = unit::archs_of(store, 0, 60);
  const auto truth = unit::truth_of(store, test);

  LcPredictor full(LcMethod::kEarlyStopAcc);
  BudgetAccount init;
  unit::init(full, bench, init, {}, 12.0);
  CHECK(kendall_tau(unit::score(full, test, 12.0), truth) == 1.0);

  LcPredictor half(LcMethod::kSotlE);
  unit::init(half, bench, init, {}, 6.5);
  BudgetAccount acc(6.5);
  const Prediction p = half.query(test[0], acc);
  CHECK(p.cost_charged == 6.0);
  CHECK(p.score == -store.at(test[0]).curve.train_loss[5]);

  BudgetAccount tiny(0.05);
  const Prediction none = half.query(test[0], tiny);
  CHECK(none.degraded);
  CHECK(none.cost_charged == 0.0);

  LcPredictor lce(LcMethod::kLce);
  unit::init(lce, bench, init, {}, 3.0);
  BudgetAccount three(3.0);
  const Prediction short_prefix = lce.query(test[0], three);
  CHECK(short_prefix.degraded);
  CHECK(is_degenerate(short_prefix.score));
  CHECK(short_prefix.cost_charged == 0.0);
  BudgetAccount eight(8.0);
  const Prediction fitted = lce.query(test[0], eight);
  CHECK(fitted.cost_charged == 8.0);
  CHECK(std::isfinite(fitted.score));
}

TEST_CASE("method names") {
  for (auto m : {LcMethod::kEarlyStopAcc, LcMethod::kEarlyStopLoss, LcMethod::kSotl,
                 LcMethod::kSotlE, LcMethod::kLce, LcMethod::kLceM}) {
    CHECK(parse_lc_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_lc_method("svr"), InvalidArgument);
}

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

#ifndef PREDBENCH_LC_PRED_HPP_
#define PREDBENCH_LC_PRED_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "predbench/predictor.hpp"
#include "predbench/trainer.hpp"

namespace predbench {

enum class LcMethod { kEarlyStopAcc, kEarlyStopLoss, kSotl, kSotlE, kLce, kLceM };

std::string to_string(LcMethod method);
LcMethod parse_lc_method(std::string_view name);

// Closed-form scores on a curve prefix (k >= 1 epochs).
double early_stop_acc(const LearningCurve& prefix);
double early_stop_loss(const LearningCurve& prefix);  // -val_loss[k]
double sotl(const LearningCurve& prefix);             // -sum train_loss[1..k]
double sotl_e(const LearningCurve& prefix);           // -train_loss[k]

// Three-parameter saturating curve families, params = {c, a, third}:
//   pow3       y = c - a t^-alpha
//   exp3       y = c - a exp(-b t)
//   log_power  y = c / (1 + (t / e^b)^-a)         (third = b, a is params[1])
enum class CurveModelKind { kPow3, kExp3, kLogPower };

std::string to_string(CurveModelKind kind);
const std::vector<CurveModelKind>& default_curve_models();

double curve_model_eval(CurveModelKind kind, const std::array<double, 3>& params, double t);

struct CurveFit {
  CurveModelKind kind = CurveModelKind::kPow3;
  std::array<double, 3> params{};
  double mse = 0.0;
  bool converged = false;

  double predict(double t) const { return curve_model_eval(kind, params, t); }
};

// Damped Gauss-Newton (Levenberg-Marquardt) fit of y[t-1] at t = 1..n with
// `restarts` seeded starting points; keeps the lowest-MSE converged fit.
// c is held inside [0, 1.25].
CurveFit fit_curve_model(CurveModelKind kind, std::span<const double> y,
                         std::uint64_t seed, std::size_t restarts = 5);

enum class LceVariant { kWeighted, kMean };

struct LceResult {
  double score = 0.0;
  bool fallback = false;
  std::vector<CurveFit> fits;  // in the canonical model order
};

inline constexpr std::size_t kMinLcePoints = 4;

// Extrapolates val_acc to `target_epoch`. kWeighted weighs each model by its
// inverse fit MSE, kMean averages. Falls back to the last observed value when
// no model converges; throws InsufficientData below kMinLcePoints epochs.
LceResult lce_extrapolate(std::span<const double> val_acc, std::size_t target_epoch,
                          LceVariant variant, std::uint64_t seed = 0,
                          std::vector<CurveModelKind> models = default_curve_models());

// Memo of LCE results keyed by (arch, k, variant); valid for one benchmark.
class LceCache {
 public:
  template <class Fn>
  LceResult get_or_compute(const Architecture& arch, std::size_t k, LceVariant variant,
                           Fn&& compute) {
    const std::uint64_t key = k * 2 + (variant == LceVariant::kMean ? 1 : 0);
    {
      std::lock_guard lock(mutex_);
      auto it = memo_.find(arch);
      if (it != memo_.end()) {
        auto jt = it->second.find(key);
        if (jt != it->second.end()) return jt->second;
      }
    }
    LceResult r = compute();
    std::lock_guard lock(mutex_);
    memo_[arch][key] = r;
    return r;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<Architecture, std::unordered_map<std::uint64_t, LceResult>> memo_;
};

// Spends as many epochs as the query account affords (at most E) on a curve
// prefix and scores it. With nothing affordable the score is degenerate; the
// extrapolating methods also decline (uncharged) below kMinLcePoints epochs.
class LcPredictor : public Predictor {
 public:
  explicit LcPredictor(LcMethod method, std::shared_ptr<LceCache> cache = nullptr);
  std::string name() const override { return to_string(method_); }

 protected:
  void do_initialize(const InitContext&) override {}
  Prediction do_query(const Architecture& arch, BudgetAccount& account) override;

 private:
  LcMethod method_;
  std::shared_ptr<LceCache> cache_;
};

}  // namespace predbench

#endif  // PREDBENCH_LC_PRED_HPP_

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

#include "predbench/lc_pred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "predbench/error.hpp"
#include "predbench/random.hpp"

namespace predbench {

namespace {

constexpr double kMaxC = 1.25;

struct MethodName {
  LcMethod method;
  const char* name;
};

constexpr MethodName kMethodNames[] = {
    {LcMethod::kEarlyStopAcc, "early_stop_acc"}, {LcMethod::kEarlyStopLoss, "early_stop_loss"},
    {LcMethod::kSotl, "sotl"},                   {LcMethod::kSotlE, "sotl_e"},
    {LcMethod::kLce, "lce"},                     {LcMethod::kLceM, "lce_m"},
};

// Value and gradient w.r.t. params at t.
double eval_with_grad(CurveModelKind kind, const std::array<double, 3>& p, double t,
                      std::array<double, 3>& g) {
  const double c = p[0], a = p[1], third = p[2];
  switch (kind) {
    case CurveModelKind::kPow3: {
      const double tp = std::pow(t, -third);
      g = {1.0, -tp, a * tp * std::log(t)};
      return c - a * tp;
    }
    case CurveModelKind::kExp3: {
      const double e = std::exp(-third * t);
      g = {1.0, -e, a * t * e};
      return c - a * e;
    }
    case CurveModelKind::kLogPower: {
      const double lt = std::log(t) - third;
      const double u = std::exp(-a * lt);
      const double inv = 1.0 / (1.0 + u);
      const double dy_du = -c * inv * inv;
      g = {inv, dy_du * (-lt * u), dy_du * (a * u)};
      return c * inv;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double sse(CurveModelKind kind, const std::array<double, 3>& p, std::span<const double> y) {
  double s = 0.0;
  std::array<double, 3> g{};
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = eval_with_grad(kind, p, static_cast<double>(i + 1), g) - y[i];
    s += r * r;
  }
  return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
}

// Solves the 3x3 SPD system m x = b by Gaussian elimination with partial
// pivoting; false if singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& x) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (!(std::abs(m[piv][col]) > 1e-300)) return false;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int k = col; k < 3; ++k) m[r][k] -= f * m[col][k];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < 3; ++k) s -= m[r][k] * x[k];
    x[r] = s / m[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

void project(CurveModelKind kind, std::array<double, 3>& p) {
  p[0] = std::clamp(p[0], 0.0, kMaxC);
  // Non-decreasing curves only (a >= 0), with exponents in a range where the
  // model stays finite on t <= ~1e4.
  p[1] = std::clamp(p[1], 0.0, 50.0);
  if (kind == CurveModelKind::kPow3) p[2] = std::clamp(p[2], 0.0, 20.0);
  if (kind == CurveModelKind::kExp3) p[2] = std::clamp(p[2], 0.0, 20.0);
  if (kind == CurveModelKind::kLogPower) p[2] = std::clamp(p[2], -50.0, 50.0);
}

CurveFit levenberg_marquardt(CurveModelKind kind, std::array<double, 3> p,
                             std::span<const double> y) {
  project(kind, p);
  double cur = sse(kind, p, y);
  double lambda = 1e-3;
  std::array<double, 3> g{};
  bool done = false;
  for (int iter = 0; iter < 300 && !done && std::isfinite(cur); ++iter) {
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = eval_with_grad(kind, p, static_cast<double>(i + 1), g) - y[i];
      for (int a = 0; a < 3; ++a) {
        jtr[a] += g[a] * r;
        for (int b = 0; b < 3; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    bool improved = false;
    while (lambda < 1e12) {
      auto m = jtj;
      for (int a = 0; a < 3; ++a) m[a][a] += lambda * (jtj[a][a] + 1e-12);
      std::array<double, 3> step{};
      std::array<double, 3> rhs{-jtr[0], -jtr[1], -jtr[2]};
      if (solve3(m, rhs, step)) {
        std::array<double, 3> cand{p[0] + step[0], p[1] + step[1], p[2] + step[2]};
        project(kind, cand);
        const double next = sse(kind, cand, y);
        if (next < cur) {
          const double gain = cur - next;
          p = cand;
          cur = next;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
          done = gain <= 1e-15 * std::max(cur, 1e-30) || cur < 1e-30;
          break;
        }
      }
      lambda *= 4.0;
    }
    done = done || !improved;
  }
  CurveFit fit;
  fit.kind = kind;
  fit.params = p;
  fit.mse = cur / static_cast<double>(y.size());
  fit.converged = std::isfinite(fit.mse);
  return fit;
}

std::array<double, 3> initial_guess(CurveModelKind kind, std::span<const double> y,
                                    Rng& rng) {
  const double y0 = y.front();
  const double ymax = *std::max_element(y.begin(), y.end());
  const double c = std::clamp(ymax + 0.2 * uniform01(rng), 0.0, kMaxC);
  switch (kind) {
    case CurveModelKind::kPow3: {
      const double alpha = 0.2 + 1.8 * uniform01(rng);
      return {c, c - y0, alpha};
    }
    case CurveModelKind::kExp3: {
      const double b = 0.05 + 0.95 * uniform01(rng);
      return {c, (c - y0) * std::exp(b), b};
    }
    case CurveModelKind::kLogPower: {
      const double a = 0.5 + 2.5 * uniform01(rng);
      const double b = std::log(static_cast<double>(y.size())) * uniform01(rng);
      return {c, a, b};
    }
  }
  return {c, 0.0, 0.0};
}

}  // namespace

std::string to_string(LcMethod method) {
  for (const auto& m : kMethodNames) {
    if (m.method == method) return m.name;
  }
  return "unknown";
}

LcMethod parse_lc_method(std::string_view name) {
  for (const auto& m : kMethodNames) {
    if (name == m.name) return m.method;
  }
  throw InvalidArgument("unknown learning-curve method '" + std::string(name) + "'");
}

double early_stop_acc(const LearningCurve& prefix) { return prefix.val_acc.back(); }
double early_stop_loss(const LearningCurve& prefix) { return -prefix.val_loss.back(); }

double sotl(const LearningCurve& prefix) {
  double s = 0.0;
  for (double l : prefix.train_loss) s += l;
  return -s;
}

double sotl_e(const LearningCurve& prefix) { return -prefix.train_loss.back(); }

std::string to_string(CurveModelKind kind) {
  switch (kind) {
    case CurveModelKind::kPow3: return "pow3";
    case CurveModelKind::kExp3: return "exp3";
    case CurveModelKind::kLogPower: return "log_power";
  }
  return "unknown";
}

const std::vector<CurveModelKind>& default_curve_models() {
  static const std::vector<CurveModelKind> models = {
      CurveModelKind::kPow3, CurveModelKind::kExp3, CurveModelKind::kLogPower};
  return models;
}

double curve_model_eval(CurveModelKind kind, const std::array<double, 3>& params, double t) {
  std::array<double, 3> g{};
  return eval_with_grad(kind, params, t, g);
}

CurveFit fit_curve_model(CurveModelKind kind, std::span<const double> y, std::uint64_t seed,
                         std::size_t restarts) {
  if (y.size() < 3) throw InsufficientData("curve fit needs at least 3 points");
  CurveFit best;
  best.kind = kind;
  best.mse = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(kind), r}));
    CurveFit fit = levenberg_marquardt(kind, initial_guess(kind, y, rng), y);
    if (fit.converged && fit.mse < best.mse) best = fit;
  }
  return best;
}

LceResult lce_extrapolate(std::span<const double> val_acc, std::size_t target_epoch,
                          LceVariant variant, std::uint64_t seed,
                          std::vector<CurveModelKind> models) {
  LceResult out;
  if (val_acc.empty()) throw InvalidArgument("empty learning curve");
  if (val_acc.size() < kMinLcePoints) {
    throw InsufficientData("curve extrapolation needs at least " +
                           std::to_string(kMinLcePoints) + " epochs");
  }
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  const double t = static_cast<double>(target_epoch);
  double num = 0.0, den = 0.0;
  for (CurveModelKind kind : models) {
    CurveFit fit = fit_curve_model(kind, val_acc, seed);
    const double pred = fit.converged ? fit.predict(t) : 0.0;
    if (fit.converged && std::isfinite(pred)) {
      const double w = variant == LceVariant::kWeighted ? 1.0 / (fit.mse + 1e-12) : 1.0;
      num += w * std::clamp(pred, 0.0, kMaxC);
      den += w;
    }
    out.fits.push_back(fit);
  }
  if (den > 0.0) {
    out.score = std::clamp(num / den, 0.0, kMaxC);
  } else {
    out.score = val_acc.back();
    out.fallback = true;
  }
  return out;
}

LcPredictor::LcPredictor(LcMethod method, std::shared_ptr<LceCache> cache)
    : method_(method), cache_(cache ? std::move(cache) : std::make_shared<LceCache>()) {}

Prediction LcPredictor::do_query(const Architecture& arch, BudgetAccount& account) {
  Prediction p;
  const std::size_t k = affordable_epochs(bench(), account);
  if (k == 0) {
    p.degraded = true;
    return p;
  }
  const bool extrapolates = method_ == LcMethod::kLce || method_ == LcMethod::kLceM;
  if (extrapolates && k < kMinLcePoints) {
    p.degraded = true;
    return p;
  }
  const LearningCurve prefix = bench().query_partial(arch, k, account);
  switch (method_) {
    case LcMethod::kEarlyStopAcc: p.score = early_stop_acc(prefix); break;
    case LcMethod::kEarlyStopLoss: p.score = early_stop_loss(prefix); break;
    case LcMethod::kSotl: p.score = sotl(prefix); break;
    case LcMethod::kSotlE: p.score = sotl_e(prefix); break;
    case LcMethod::kLce:
    case LcMethod::kLceM: {
      const LceVariant v = method_ == LcMethod::kLce ? LceVariant::kWeighted : LceVariant::kMean;
      const std::size_t E = bench().epochs();
      const LceResult r = cache_->get_or_compute(
          arch, k, v, [&] { return lce_extrapolate(prefix.val_acc, E, v); });
      p.score = r.score;
      p.fallback = r.fallback;
      break;
    }
  }
  if (!std::isfinite(p.score)) p.score = kDegenerateScore;
  return p;
}

}  // namespace predbench

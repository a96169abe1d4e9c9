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

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "predbench/error.hpp"
#include "predbench/model_pred.hpp"

namespace predbench {

namespace {

double hp_or(const Hyperparams& hp, const std::string& key, double fallback) {
  auto it = hp.find(key);
  return it == hp.end() ? fallback : it->second;
}

std::size_t hp_count(const Hyperparams& hp, const std::string& key, double fallback) {
  const double v = hp_or(hp, key, fallback);
  return v <= 0.0 ? 0 : static_cast<std::size_t>(std::llround(v));
}

struct Standardizer {
  double mean = 0.0;
  double scale = 1.0;

  explicit Standardizer(std::span<const double> y) {
    const double n = static_cast<double>(y.size());
    mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    scale = sd > 1e-12 ? sd : 1.0;
  }
};

// Cholesky of `a`, adding jitter 1e-10, 1e-9, ..., 1e-4 to the diagonal
// until it succeeds.
Eigen::LLT<Eigen::MatrixXd> robust_cholesky(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  for (double jitter = 1e-10; jitter <= 1.0001e-4; jitter *= 10.0) {
    Eigen::MatrixXd b = a;
    b.diagonal().array() += jitter;
    llt.compute(b);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw NumericalFailure(std::string(what) + ": matrix not positive definite after jitter 1e-4");
}

// Bayesian linear regression with an isotropic Gaussian prior (precision
// alpha) and Gaussian noise (precision beta), on standardized targets with an
// appended bias feature.
class BayesLinear : public Regressor {
 public:
  BayesLinear(const Matrix& x, std::span<const double> y, const Hyperparams& hp)
      : norm_(y) {
    const double alpha = hp_or(hp, "alpha", 1.0);
    const double beta = hp_or(hp, "beta", 10.0);
    const std::size_t d = x.cols + 1;
    Eigen::MatrixXd phi(x.rows, d);
    Eigen::VectorXd t(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
      for (std::size_t j = 0; j < x.cols; ++j) phi(i, j) = x.at(i, j);
      phi(i, x.cols) = 1.0;
      t(i) = (y[i] - norm_.mean) / norm_.scale;
    }
    Eigen::MatrixXd a = beta * phi.transpose() * phi;
    a.diagonal().array() += alpha;
    const auto llt = robust_cholesky(a, "bayes_linear");
    mean_w_ = beta * llt.solve(phi.transpose() * t);
  }

  double predict(std::span<const double> x) const override {
    double s = mean_w_(static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) s += mean_w_(static_cast<Eigen::Index>(j)) * x[j];
    return s * norm_.scale + norm_.mean;
  }

 private:
  Standardizer norm_;
  Eigen::VectorXd mean_w_;
};

// Zero-mean GP on standardized targets, unit signal variance, RBF kernel.
class GaussianProcess : public Regressor {
 public:
  GaussianProcess(const Matrix& x, std::span<const double> y, const Hyperparams& hp)
      : norm_(y), x_(x) {
    const double ls = hp_or(hp, "length_scale", 2.0);
    const double noise = hp_or(hp, "noise", 1e-2);
    if (!(ls > 0.0) || !(noise >= 0.0)) throw InvalidArgument("gp: bad length scale or noise");
    inv2l2_ = 1.0 / (2.0 * ls * ls);
    const auto n = static_cast<Eigen::Index>(x.rows);
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        k(i, j) = k(j, i) = kernel(x.row(i), x.row(j));
      }
    }
    k.diagonal().array() += noise;
    Eigen::VectorXd t(n);
    for (Eigen::Index i = 0; i < n; ++i) t(i) = (y[i] - norm_.mean) / norm_.scale;
    const auto llt = robust_cholesky(k, "gaussian_process");
    alpha_ = llt.solve(t);
  }

  double predict(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < x_.rows; ++i) {
      s += alpha_(static_cast<Eigen::Index>(i)) * kernel(x_.row(i), x);
    }
    return s * norm_.scale + norm_.mean;
  }

 private:
  double kernel(std::span<const double> a, std::span<const double> b) const {
    double d2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d2 += (a[j] - b[j]) * (a[j] - b[j]);
    return std::exp(-d2 * inv2l2_);
  }

  Standardizer norm_;
  Matrix x_;
  double inv2l2_ = 1.0;
  Eigen::VectorXd alpha_;
};

struct TreeParams {
  std::size_t max_depth = 1000;
  std::size_t min_samples_leaf = 1;
  double max_features = 1.0;
};

// CART regression tree on squared error.
class RegressionTree {
 public:
  void fit(const Matrix& x, std::span<const double> y, std::vector<std::size_t> idx,
           const TreeParams& params, Rng& rng) {
    nodes_.clear();
    params_ = params;
    const std::size_t d = x.cols;
    n_try_ = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(params.max_features * static_cast<double>(d))), 1,
        std::max<std::size_t>(d, 1));
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), 0);
    grow(x, y, idx, 0, rng);
  }

  double predict(std::span<const double> x) const {
    std::size_t n = 0;
    while (nodes_[n].feature >= 0) {
      n = x[static_cast<std::size_t>(nodes_[n].feature)] <= nodes_[n].threshold
              ? nodes_[n].left
              : nodes_[n].right;
    }
    return nodes_[n].value;
  }

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    double value = 0.0;
  };

  std::size_t grow(const Matrix& x, std::span<const double> y, std::vector<std::size_t>& idx,
                   std::size_t depth, Rng& rng) {
    const std::size_t self = nodes_.size();
    nodes_.push_back({});
    double sum = 0.0;
    for (auto i : idx) sum += y[i];
    const double n = static_cast<double>(idx.size());
    nodes_[self].value = sum / n;
    if (depth >= params_.max_depth || idx.size() < 2 * params_.min_samples_leaf) return self;

    // Partial Fisher-Yates picks the candidate features for this node.
    for (std::size_t k = 0; k < n_try_; ++k) {
      std::swap(features_[k], features_[k + uniform_index(rng, features_.size() - k)]);
    }
    std::vector<std::size_t> candidates(features_.begin(), features_.begin() + n_try_);
    std::sort(candidates.begin(), candidates.end());

    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order = idx;
    const double base = sum * sum / n;
    for (std::size_t f : candidates) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double xa = x.at(a, f), xb = x.at(b, f);
        return xa != xb ? xa < xb : a < b;
      });
      double left = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        left += y[order[k]];
        const double xk = x.at(order[k], f), xn = x.at(order[k + 1], f);
        if (xk == xn) continue;
        const std::size_t nl = k + 1, nr = order.size() - nl;
        if (nl < params_.min_samples_leaf || nr < params_.min_samples_leaf) continue;
        const double right = sum - left;
        const double gain = left * left / static_cast<double>(nl) +
                            right * right / static_cast<double>(nr) - base;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (xk + xn);
        }
      }
    }
    if (best_feature < 0) return self;
    std::vector<std::size_t> li, ri;
    for (auto i : idx) {
      (x.at(i, static_cast<std::size_t>(best_feature)) <= best_threshold ? li : ri).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    nodes_[self].feature = best_feature;
    nodes_[self].threshold = best_threshold;
    const std::size_t l = grow(x, y, li, depth + 1, rng);
    const std::size_t r = grow(x, y, ri, depth + 1, rng);
    nodes_[self].left = l;
    nodes_[self].right = r;
    return self;
  }

  TreeParams params_;
  std::size_t n_try_ = 1;
  std::vector<std::size_t> features_;
  std::vector<Node> nodes_;
};

class RandomForest : public Regressor {
 public:
  RandomForest(const Matrix& x, std::span<const double> y, const Hyperparams& hp,
               std::uint64_t seed) {
    TreeParams tp;
    tp.max_depth = hp_count(hp, "max_depth", 1000);
    tp.min_samples_leaf = std::max<std::size_t>(1, hp_count(hp, "min_samples_leaf", 1));
    tp.max_features = hp_or(hp, "max_features", 0.5);
    const std::size_t n_trees = std::max<std::size_t>(1, hp_count(hp, "n_trees", 64));
    const bool bootstrap = hp_or(hp, "bootstrap", 1.0) != 0.0;
    Rng rng(seed);
    trees_.resize(n_trees);
    for (auto& tree : trees_) {
      std::vector<std::size_t> idx(x.rows);
      if (bootstrap) {
        for (auto& i : idx) i = uniform_index(rng, x.rows);
      } else {
        std::iota(idx.begin(), idx.end(), 0);
      }
      tree.fit(x, y, std::move(idx), tp, rng);
    }
  }

  double predict(std::span<const double> x) const override {
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(x);
    return s / static_cast<double>(trees_.size());
  }

 private:
  std::vector<RegressionTree> trees_;
};

// Gradient boosting on squared error: start at the target mean, each tree
// fits the current residuals and is shrunk by the learning rate.
class GradientBoostedTrees : public Regressor {
 public:
  GradientBoostedTrees(const Matrix& x, std::span<const double> y, const Hyperparams& hp,
                       std::uint64_t seed) {
    TreeParams tp;
    tp.max_depth = hp_count(hp, "max_depth", 3);
    tp.min_samples_leaf = std::max<std::size_t>(1, hp_count(hp, "min_samples_leaf", 1));
    tp.max_features = hp_or(hp, "feature_fraction", 1.0);
    const std::size_t n_est = hp_count(hp, "n_estimators", 100);
    lr_ = hp_or(hp, "learning_rate", 0.1);
    const double subsample = hp_or(hp, "subsample", 1.0);
    const std::size_t n = x.rows;
    base_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> pred(n, base_), resid(n);
    Rng rng(seed);
    trees_.resize(n_est);
    const std::size_t m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(subsample * static_cast<double>(n))), 1, n);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (auto& tree : trees_) {
      for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - pred[i];
      std::vector<std::size_t> idx = all;
      if (m < n) {
        for (std::size_t k = 0; k < m; ++k) std::swap(idx[k], idx[k + uniform_index(rng, n - k)]);
        idx.resize(m);
        std::sort(idx.begin(), idx.end());
      }
      tree.fit(x, resid, std::move(idx), tp, rng);
      for (std::size_t i = 0; i < n; ++i) pred[i] += lr_ * tree.predict(x.row(i));
    }
  }

  double predict(std::span<const double> x) const override {
    double s = base_;
    for (const auto& t : trees_) s += lr_ * t.predict(x);
    return s;
  }

 private:
  double base_ = 0.0;
  double lr_ = 0.1;
  std::vector<RegressionTree> trees_;
};

// Fully connected ReLU regressor trained with Adam on standardized targets.
class Mlp : public Regressor {
 public:
  Mlp(const Matrix& x, std::span<const double> y, const Hyperparams& hp, std::uint64_t seed)
      : norm_(y) {
    const std::size_t layers = std::max<std::size_t>(1, hp_count(hp, "num_layers", 2));
    const std::size_t width = std::max<std::size_t>(1, hp_count(hp, "layer_width", 32));
    const double lr = hp_or(hp, "learning_rate", 1e-2);
    const std::size_t epochs = std::max<std::size_t>(1, hp_count(hp, "epochs", 150));
    const std::size_t batch = std::max<std::size_t>(1, hp_count(hp, "batch_size", 32));
    const double l2 = hp_or(hp, "weight_decay", 0.0);

    sizes_.push_back(x.cols);
    for (std::size_t l = 0; l < layers; ++l) sizes_.push_back(width);
    sizes_.push_back(1);
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      w_off_.push_back(total);
      total += sizes_[l] * sizes_[l + 1];
      b_off_.push_back(total);
      total += sizes_[l + 1];
    }
    params_.assign(total, 0.0);
    Rng rng(derive_seed(seed, {fnv1a("mlp_init")}));
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      std::normal_distribution<double> nd(0.0, std::sqrt(2.0 / static_cast<double>(sizes_[l])));
      for (std::size_t k = 0; k < sizes_[l] * sizes_[l + 1]; ++k) params_[w_off_[l] + k] = nd(rng);
    }

    std::vector<double> t(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) t[i] = (y[i] - norm_.mean) / norm_.scale;

    std::vector<double> grad(total), m(total, 0.0), v(total, 0.0);
    std::vector<std::vector<double>> acts(sizes_.size()), deltas(sizes_.size());
    for (std::size_t l = 0; l < sizes_.size(); ++l) {
      acts[l].resize(sizes_[l]);
      deltas[l].resize(sizes_[l]);
    }
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle(derive_seed(seed, {fnv1a("mlp_shuffle")}));
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    std::size_t step = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
      std::shuffle(order.begin(), order.end(), shuffle);
      for (std::size_t start = 0; start < order.size(); start += batch) {
        const std::size_t end = std::min(order.size(), start + batch);
        std::fill(grad.begin(), grad.end(), 0.0);
        const double scale = 1.0 / static_cast<double>(end - start);
        for (std::size_t s = start; s < end; ++s) {
          const std::size_t i = order[s];
          const double out = forward(x.row(i), acts);
          deltas.back()[0] = 2.0 * (out - t[i]) * scale;
          backward(acts, deltas, grad);
        }
        ++step;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
        for (std::size_t k = 0; k < total; ++k) {
          const double g = grad[k] + l2 * params_[k];
          m[k] = b1 * m[k] + (1.0 - b1) * g;
          v[k] = b2 * v[k] + (1.0 - b2) * g * g;
          params_[k] -= lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps);
        }
      }
    }
    if (!std::all_of(params_.begin(), params_.end(), [](double p) { return std::isfinite(p); })) {
      throw NumericalFailure("mlp: training diverged");
    }
  }

  double predict(std::span<const double> x) const override {
    std::vector<std::vector<double>> acts(sizes_.size());
    for (std::size_t l = 0; l < sizes_.size(); ++l) acts[l].resize(sizes_[l]);
    return forward(x, acts) * norm_.scale + norm_.mean;
  }

 private:
  double forward(std::span<const double> x, std::vector<std::vector<double>>& acts) const {
    std::copy(x.begin(), x.end(), acts[0].begin());
    const std::size_t last = sizes_.size() - 1;
    for (std::size_t l = 0; l < last; ++l) {
      const std::size_t in = sizes_[l], out = sizes_[l + 1];
      const double* w = params_.data() + w_off_[l];
      const double* b = params_.data() + b_off_[l];
      for (std::size_t o = 0; o < out; ++o) {
        double s = b[o];
        const double* wr = w + o * in;
        for (std::size_t j = 0; j < in; ++j) s += wr[j] * acts[l][j];
        acts[l + 1][o] = (l + 1 < last && s < 0.0) ? 0.0 : s;
      }
    }
    return acts[last][0];
  }

  // deltas.back() holds dL/d(output); accumulates parameter gradients.
  void backward(const std::vector<std::vector<double>>& acts,
                std::vector<std::vector<double>>& deltas, std::vector<double>& grad) const {
    for (std::size_t l = sizes_.size() - 1; l > 0; --l) {
      const std::size_t in = sizes_[l - 1], out = sizes_[l];
      const double* w = params_.data() + w_off_[l - 1];
      double* gw = grad.data() + w_off_[l - 1];
      double* gb = grad.data() + b_off_[l - 1];
      auto& din = deltas[l - 1];
      std::fill(din.begin(), din.end(), 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        double d = deltas[l][o];
        if (l < sizes_.size() - 1 && acts[l][o] <= 0.0) d = 0.0;
        if (d == 0.0) continue;
        gb[o] += d;
        for (std::size_t j = 0; j < in; ++j) {
          gw[o * in + j] += d * acts[l - 1][j];
          din[j] += d * w[o * in + j];
        }
      }
    }
  }

  Standardizer norm_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> w_off_, b_off_;
  std::vector<double> params_;
};

}  // namespace

std::unique_ptr<Regressor> train_regressor(ModelKind kind, const Matrix& x,
                                           std::span<const double> y,
                                           const Hyperparams& hp, std::uint64_t seed) {
  if (x.rows != y.size()) throw InvalidArgument("feature rows != targets");
  if (x.rows == 0) throw InsufficientData("no training rows");
  switch (kind) {
    case ModelKind::kBayesLinear: return std::make_unique<BayesLinear>(x, y, hp);
    case ModelKind::kGaussianProcess: return std::make_unique<GaussianProcess>(x, y, hp);
    case ModelKind::kRandomForest: return std::make_unique<RandomForest>(x, y, hp, seed);
    case ModelKind::kGradientBoostedTrees:
      return std::make_unique<GradientBoostedTrees>(x, y, hp, seed);
    case ModelKind::kFeedforwardEnsemble: return std::make_unique<Mlp>(x, y, hp, seed);
  }
  throw InvalidArgument("unhandled model kind");
}

}  // namespace predbench

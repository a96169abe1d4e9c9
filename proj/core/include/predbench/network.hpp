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

#ifndef PREDBENCH_NETWORK_HPP_
#define PREDBENCH_NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "predbench/search_space.hpp"

namespace predbench {

// Edge transforms on W-wide feature vectors.
//   none          y = 0
//   skip_connect  y = x
//   dense         y = tanh(A x),               A: W x W
//   dense_wide    y = tanh(B tanh(A x)),       A: 2W x W, B: W x 2W
//   tanh          y = tanh(x)
// Parametric ops carry no bias, so a dense_wide edge costs exactly four
// dense edges in both parameters and multiply-adds.
enum class OpKind { kNone, kSkip, kDense, kDenseWide, kTanh };

OpKind op_kind(std::string_view name);
bool is_parametric(OpKind kind);

enum class InitScheme { kLecunNormal, kXavierUniform };

struct NetConfig {
  std::size_t width = 8;
  std::size_t cells = 1;
  InitScheme init = InitScheme::kLecunNormal;
  double init_gain = 1.0;

  std::string describe() const;
  static NetConfig parse(std::string_view description);
  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

struct ParamTensor {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  std::size_t fan_in = 0;
};

struct EdgeSlot {
  std::size_t cell = 0;
  std::size_t edge = 0;
  std::size_t src = 0;
  std::size_t dst = 0;
  OpKind kind = OpKind::kNone;
  std::size_t w1 = 0;  // offset of A
  std::size_t w2 = 0;  // offset of B (dense_wide only)
};

// Static shape of a compiled cell network: a stem (input_dim -> W, tanh),
// `cells` stacked copies of the cell, and a linear head (W -> classes).
// Node values are sums of incoming edge outputs.
struct NetworkLayout {
  std::size_t input_dim = 2;
  std::size_t num_classes = 2;
  std::size_t width = 8;
  std::size_t cells = 1;
  std::size_t num_nodes = 4;
  std::size_t stem_w = 0, stem_b = 0, head_w = 0, head_b = 0;
  std::vector<EdgeSlot> edges;
  std::vector<ParamTensor> tensors;
  std::size_t param_count = 0;
  std::size_t flop_count = 0;

  static NetworkLayout compile(const SearchSpace& space, const Architecture& arch,
                               const NetConfig& config, std::size_t input_dim,
                               std::size_t num_classes);
};

// Per-unit activation values and loss gradients for one traced layer, laid
// out batch-major (batch x width).
struct ActivationTrace {
  std::string name;
  std::size_t width = 0;
  std::vector<double> values;
  std::vector<double> grads;
};

// Everything the zero-cost proxies read from one minibatch pass.
struct GradientSnapshot {
  std::size_t batch_size = 0;
  double loss = 0.0;
  std::vector<double> params;
  std::vector<double> gradients;
  std::vector<ActivationTrace> activations;
  // One row per input: d logits / d input, flattened class-major
  // (num_classes * input_dim entries).
  std::vector<std::vector<double>> jacobian_rows;
  std::vector<double> batch_x;
  std::vector<int> batch_y;
};

class Network {
 public:
  static Network instantiate(const SearchSpace& space, const Architecture& arch,
                             const NetConfig& config, std::size_t input_dim,
                             std::size_t num_classes, std::uint64_t seed);

  const NetworkLayout& layout() const { return layout_; }
  std::size_t param_count() const { return layout_.param_count; }
  std::size_t flop_count() const { return layout_.flop_count; }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& mutable_params() { return params_; }

  std::vector<double> logits(std::span<const double> x) const;

  // Mean softmax cross-entropy over the batch; `grad` receives its gradient.
  double loss_and_gradient(std::span<const double> xs, std::span<const int> ys,
                           std::vector<double>& grad) const;

  // Exact Hessian-vector product of the mean loss, by forward-mode
  // differentiation of the backward pass.
  std::vector<double> hessian_vector_product(std::span<const double> xs,
                                             std::span<const int> ys,
                                             std::span<const double> v) const;

  // Linearized pass used by SynFlow: every nonlinearity replaced by the
  // identity, parameters replaced by |theta|, input of all ones, objective
  // R = sum of logits. Returns R and writes dR/d|theta| into `grad`.
  double linearized_objective(std::vector<double>& grad) const;

  GradientSnapshot snapshot(std::span<const double> xs,
                            std::span<const int> ys) const;

  struct Evaluation {
    double mean_loss = 0.0;
    double accuracy = 0.0;
  };
  Evaluation evaluate(std::span<const double> xs, std::span<const int> ys) const;

 private:
  Network(NetworkLayout layout, std::vector<double> params)
      : layout_(std::move(layout)), params_(std::move(params)) {}

  NetworkLayout layout_;
  std::vector<double> params_;
};

}  // namespace predbench

#endif  // PREDBENCH_NETWORK_HPP_

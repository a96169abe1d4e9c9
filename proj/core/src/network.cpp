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

#include "predbench/network.hpp"

#include <cmath>
#include <sstream>

#include "network_engine.hpp"
#include "predbench/error.hpp"
#include "predbench/random.hpp"
#include "predbench/text.hpp"

namespace predbench {

using detail::Dual;
using detail::Engine;

OpKind op_kind(std::string_view name) {
  if (name == "none" || name == "zeroize") return OpKind::kNone;
  if (name == "skip_connect") return OpKind::kSkip;
  if (name == "dense") return OpKind::kDense;
  if (name == "dense_wide") return OpKind::kDenseWide;
  if (name == "tanh") return OpKind::kTanh;
  throw InvalidArgument("no network transform for op '" + std::string(name) + "'");
}

bool is_parametric(OpKind kind) {
  return kind == OpKind::kDense || kind == OpKind::kDenseWide;
}

std::string NetConfig::describe() const {
  std::ostringstream os;
  os << "width=" << width << ";cells=" << cells << ";init="
     << (init == InitScheme::kLecunNormal ? "lecun_normal" : "xavier_uniform")
     << ";gain=" << format_double(init_gain);
  return os.str();
}

NetConfig NetConfig::parse(std::string_view description) {
  NetConfig cfg;
  for (const auto& [key, value] : parse_fields(description)) {
    if (key == "width") cfg.width = parse_size(value);
    else if (key == "cells") cfg.cells = parse_size(value);
    else if (key == "init") {
      if (value == "lecun_normal") cfg.init = InitScheme::kLecunNormal;
      else if (value == "xavier_uniform") cfg.init = InitScheme::kXavierUniform;
      else throw FormatError("unknown init scheme: " + value);
    } else if (key == "gain") cfg.init_gain = parse_double(value);
    else throw FormatError("unknown network field: " + key);
  }
  return cfg;
}

NetworkLayout NetworkLayout::compile(const SearchSpace& space,
                                     const Architecture& arch,
                                     const NetConfig& config,
                                     std::size_t input_dim,
                                     std::size_t num_classes) {
  arch.validate(space);
  if (config.width == 0 || config.cells == 0) {
    throw InvalidArgument("network width and cell count must be positive");
  }
  NetworkLayout L;
  L.input_dim = input_dim;
  L.num_classes = num_classes;
  L.width = config.width;
  L.cells = config.cells;
  L.num_nodes = space.num_nodes();
  const std::size_t W = config.width;
  std::size_t offset = 0;
  auto add = [&](std::string name, std::size_t size, std::size_t fan_in) {
    L.tensors.push_back({std::move(name), offset, size, fan_in});
    offset += size;
    return offset - size;
  };
  L.stem_w = add("stem.w", W * input_dim, input_dim);
  L.stem_b = add("stem.b", W, 0);
  L.flop_count += W * input_dim;
  for (std::size_t c = 0; c < config.cells; ++c) {
    for (std::size_t e = 0; e < space.num_edges(); ++e) {
      EdgeSlot slot;
      slot.cell = c;
      slot.edge = e;
      slot.src = space.edges()[e].first;
      slot.dst = space.edges()[e].second;
      slot.kind = op_kind(space.op_name(arch.op(e)));
      const std::string prefix =
          "cell" + std::to_string(c) + ".edge" + std::to_string(e) + ".";
      if (slot.kind == OpKind::kDense) {
        slot.w1 = add(prefix + "dense.A", W * W, W);
        L.flop_count += W * W;
      } else if (slot.kind == OpKind::kDenseWide) {
        slot.w1 = add(prefix + "dense_wide.A", 2 * W * W, W);
        slot.w2 = add(prefix + "dense_wide.B", 2 * W * W, 2 * W);
        L.flop_count += 4 * W * W;
      }
      L.edges.push_back(slot);
    }
  }
  L.head_w = add("head.w", num_classes * W, W);
  L.head_b = add("head.b", num_classes, 0);
  L.flop_count += num_classes * W;
  L.param_count = offset;
  return L;
}

Network Network::instantiate(const SearchSpace& space, const Architecture& arch,
                             const NetConfig& config, std::size_t input_dim,
                             std::size_t num_classes, std::uint64_t seed) {
  NetworkLayout layout =
      NetworkLayout::compile(space, arch, config, input_dim, num_classes);
  std::vector<double> params(layout.param_count, 0.0);
  Rng rng(seed);
  for (std::size_t t = 0; t < layout.tensors.size(); ++t) {
    const ParamTensor& tensor = layout.tensors[t];
    if (tensor.fan_in == 0) continue;  // biases start at zero
    const std::size_t fan_out = tensor.size / tensor.fan_in;
    if (config.init == InitScheme::kLecunNormal) {
      std::normal_distribution<double> dist(
          0.0, config.init_gain / std::sqrt(static_cast<double>(tensor.fan_in)));
      for (std::size_t i = 0; i < tensor.size; ++i) params[tensor.offset + i] = dist(rng);
    } else {
      const double limit =
          config.init_gain *
          std::sqrt(6.0 / static_cast<double>(tensor.fan_in + fan_out));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (std::size_t i = 0; i < tensor.size; ++i) params[tensor.offset + i] = dist(rng);
    }
  }
  return Network(std::move(layout), std::move(params));
}

std::vector<double> Network::logits(std::span<const double> x) const {
  if (x.size() != layout_.input_dim) throw InvalidArgument("input dimension mismatch");
  Engine<double> engine(layout_);
  return engine.forward(params_.data(), x.data(), false);
}

double Network::loss_and_gradient(std::span<const double> xs,
                                  std::span<const int> ys,
                                  std::vector<double>& grad) const {
  const std::size_t d = layout_.input_dim;
  const std::size_t n = ys.size();
  if (n == 0 || xs.size() != n * d) throw InvalidArgument("batch shape mismatch");
  grad.assign(params_.size(), 0.0);
  Engine<double> engine(layout_);
  std::vector<double> dlogits(layout_.num_classes);
  const double scale = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& logits = engine.forward(params_.data(), xs.data() + i * d, false);
    total += detail::softmax_xent(logits, ys[i], scale, dlogits.data());
    engine.backward(params_.data(), dlogits.data(), grad.data(), nullptr, false);
  }
  return total * scale;
}

std::vector<double> Network::hessian_vector_product(std::span<const double> xs,
                                                    std::span<const int> ys,
                                                    std::span<const double> v) const {
  const std::size_t d = layout_.input_dim;
  const std::size_t n = ys.size();
  if (n == 0 || xs.size() != n * d) throw InvalidArgument("batch shape mismatch");
  if (v.size() != params_.size()) throw InvalidArgument("direction size mismatch");
  std::vector<Dual> p(params_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = Dual(params_[i], v[i]);
  std::vector<Dual> grad(params_.size());
  std::vector<Dual> x(d);
  std::vector<Dual> dlogits(layout_.num_classes);
  Engine<Dual> engine(layout_);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x[j] = Dual(xs[i * d + j]);
    const auto& logits = engine.forward(p.data(), x.data(), false);
    detail::softmax_xent(logits, ys[i], scale, dlogits.data());
    engine.backward(p.data(), dlogits.data(), grad.data(), nullptr, false);
  }
  std::vector<double> hv(params_.size());
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] = grad[i].d;
  return hv;
}

double Network::linearized_objective(std::vector<double>& grad) const {
  std::vector<double> abs_params(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) abs_params[i] = std::abs(params_[i]);
  std::vector<double> ones(layout_.input_dim, 1.0);
  Engine<double> engine(layout_);
  const auto& logits = engine.forward(abs_params.data(), ones.data(), true);
  double r = 0.0;
  for (double z : logits) r += z;
  std::vector<double> dlogits(layout_.num_classes, 1.0);
  grad.assign(params_.size(), 0.0);
  engine.backward(abs_params.data(), dlogits.data(), grad.data(), nullptr, true);
  return r;
}

GradientSnapshot Network::snapshot(std::span<const double> xs,
                                   std::span<const int> ys) const {
  const std::size_t d = layout_.input_dim;
  const std::size_t n = ys.size();
  const std::size_t W = layout_.width;
  const std::size_t C = layout_.num_classes;
  if (n == 0 || xs.size() != n * d) throw InvalidArgument("batch shape mismatch");

  GradientSnapshot snap;
  snap.batch_size = n;
  snap.params = params_;
  snap.gradients.assign(params_.size(), 0.0);
  snap.batch_x.assign(xs.begin(), xs.end());
  snap.batch_y.assign(ys.begin(), ys.end());

  snap.activations.push_back({"stem", W, {}, {}});
  std::vector<std::size_t> traced_slots;
  for (std::size_t s = 0; s < layout_.edges.size(); ++s) {
    if (!is_parametric(layout_.edges[s].kind)) continue;
    traced_slots.push_back(s);
    snap.activations.push_back(
        {"cell" + std::to_string(layout_.edges[s].cell) + ".edge" +
             std::to_string(layout_.edges[s].edge),
         W, {}, {}});
  }
  for (auto& a : snap.activations) {
    a.values.reserve(n * W);
    a.grads.reserve(n * W);
  }

  Engine<double> engine(layout_);
  std::vector<double> dlogits(C);
  std::vector<double> scratch(params_.size());
  std::vector<double> dx(d);
  const double scale = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = xs.data() + i * d;
    const auto& logits = engine.forward(params_.data(), x, false);
    total += detail::softmax_xent(logits, ys[i], scale, dlogits.data());
    engine.backward(params_.data(), dlogits.data(), snap.gradients.data(), nullptr, false);

    auto& stem = snap.activations[0];
    const double* h0 = engine.stem_out();
    const double* g0 = engine.node_grad(0, 0);
    stem.values.insert(stem.values.end(), h0, h0 + W);
    stem.grads.insert(stem.grads.end(), g0, g0 + W);
    for (std::size_t t = 0; t < traced_slots.size(); ++t) {
      const EdgeSlot& e = layout_.edges[traced_slots[t]];
      const double* y = engine.edge_out(traced_slots[t]);
      const double* g = engine.node_grad(e.cell, e.dst);
      auto& trace = snap.activations[t + 1];
      trace.values.insert(trace.values.end(), y, y + W);
      trace.grads.insert(trace.grads.end(), g, g + W);
    }

    // Jacobian of the logits w.r.t. this input, one class at a time. The
    // forward state is still valid; backward does not modify it.
    std::vector<double> row(C * d);
    std::vector<double> unit(C, 0.0);
    for (std::size_t k = 0; k < C; ++k) {
      unit.assign(C, 0.0);
      unit[k] = 1.0;
      engine.backward(params_.data(), unit.data(), scratch.data(), dx.data(), false);
      for (std::size_t j = 0; j < d; ++j) row[k * d + j] = dx[j];
    }
    snap.jacobian_rows.push_back(std::move(row));
  }
  snap.loss = total * scale;
  return snap;
}

Network::Evaluation Network::evaluate(std::span<const double> xs,
                                      std::span<const int> ys) const {
  const std::size_t d = layout_.input_dim;
  const std::size_t n = ys.size();
  if (n == 0 || xs.size() != n * d) throw InvalidArgument("batch shape mismatch");
  Engine<double> engine(layout_);
  std::vector<double> dlogits(layout_.num_classes);
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& logits = engine.forward(params_.data(), xs.data() + i * d, false);
    loss += detail::softmax_xent(logits, ys[i], 1.0, dlogits.data());
    std::size_t best = 0;
    for (std::size_t k = 1; k < logits.size(); ++k) {
      if (logits[k] > logits[best]) best = k;
    }
    correct += static_cast<int>(best) == ys[i];
  }
  return {loss / static_cast<double>(n),
          static_cast<double>(correct) / static_cast<double>(n)};
}

}  // namespace predbench

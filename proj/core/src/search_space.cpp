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

#include "predbench/search_space.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "predbench/error.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

void collect_paths(const SearchSpace& space, std::size_t node,
                   std::vector<std::size_t>& prefix,
                   std::vector<std::vector<std::size_t>>& out) {
  const std::size_t last = space.num_nodes() - 1;
  if (node == last) {
    out.push_back(prefix);
    return;
  }
  const auto& edges = space.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].first != node) continue;
    prefix.push_back(e);
    collect_paths(space, edges[e].second, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

SearchSpace::SearchSpace()
    : SearchSpace(kDefaultNodes,
                  {"none", "skip_connect", "dense", "dense_wide", "tanh"}) {}

SearchSpace::SearchSpace(std::size_t num_nodes, std::vector<std::string> ops)
    : num_nodes_(num_nodes), ops_(std::move(ops)) {
  if (num_nodes_ < 2) throw InvalidArgument("search space needs >= 2 nodes");
  if (ops_.empty() || ops_.size() > 255) {
    throw InvalidArgument("search space needs between 1 and 255 ops");
  }
  for (std::size_t dst = 1; dst < num_nodes_; ++dst) {
    for (std::size_t src = 0; src < dst; ++src) edges_.emplace_back(src, dst);
  }
  std::vector<std::size_t> prefix;
  collect_paths(*this, 0, prefix, paths_);
  std::stable_sort(paths_.begin(), paths_.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
}

std::uint64_t SearchSpace::cardinality() const {
  std::uint64_t n = 1;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (n > std::numeric_limits<std::uint64_t>::max() / ops_.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    n *= ops_.size();
  }
  return n;
}

std::size_t SearchSpace::path_encoding_length() const {
  std::size_t total = 0;
  for (const auto& p : paths_) {
    std::size_t block = 1;
    for (std::size_t i = 0; i < p.size(); ++i) block *= ops_.size();
    total += block;
  }
  return total;
}

std::string SearchSpace::describe() const {
  std::ostringstream os;
  os << "nodes=" << num_nodes_ << ";ops=";
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (i) os << ',';
    os << ops_[i];
  }
  return os.str();
}

SearchSpace SearchSpace::parse(std::string_view description) {
  std::size_t nodes = 0;
  std::vector<std::string> ops;
  for (auto part : split(description, ';')) {
    auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("bad search space field: " + std::string(part));
    }
    auto key = part.substr(0, eq);
    auto value = part.substr(eq + 1);
    if (key == "nodes") {
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), nodes);
      if (ec != std::errc()) throw FormatError("bad node count");
    } else if (key == "ops") {
      for (auto op : split(value, ',')) ops.emplace_back(op);
    } else {
      throw FormatError("unknown search space field: " + std::string(key));
    }
  }
  return SearchSpace(nodes, std::move(ops));
}

std::string Architecture::str() const {
  std::string out;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (i) out += '|';
    out += std::to_string(ops_[i]);
  }
  return out;
}

Architecture Architecture::parse(std::string_view text) {
  std::vector<std::uint8_t> ops;
  for (auto part : split(text, '|')) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || p != part.data() + part.size() || v > 255) {
      throw InvalidArgument("bad architecture string: " + std::string(text));
    }
    ops.push_back(static_cast<std::uint8_t>(v));
  }
  return Architecture(std::move(ops));
}

std::uint64_t Architecture::index(const SearchSpace& space) const {
  validate(space);
  std::uint64_t idx = 0;
  for (auto op : ops_) idx = idx * space.num_ops() + op;
  return idx;
}

Architecture Architecture::from_index(const SearchSpace& space,
                                      std::uint64_t index) {
  if (index >= space.cardinality()) {
    throw InvalidArgument("architecture index out of range");
  }
  std::vector<std::uint8_t> ops(space.num_edges());
  for (std::size_t e = ops.size(); e-- > 0;) {
    ops[e] = static_cast<std::uint8_t>(index % space.num_ops());
    index /= space.num_ops();
  }
  return Architecture(std::move(ops));
}

void Architecture::validate(const SearchSpace& space) const {
  if (ops_.size() != space.num_edges()) {
    throw InvalidArgument("architecture " + str() + " has " +
                          std::to_string(ops_.size()) + " edges, space has " +
                          std::to_string(space.num_edges()));
  }
  for (auto op : ops_) {
    if (op >= space.num_ops()) {
      throw InvalidArgument("architecture " + str() + " uses op index " +
                            std::to_string(op) + " outside the space");
    }
  }
}

std::string to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::kAdjacencyOneHot: return "adjacency_one_hot";
    case EncodingKind::kPath: return "path";
  }
  return "unknown";
}

EncodingKind parse_encoding_kind(std::string_view name) {
  if (name == "adjacency_one_hot" || name == "adjacency") {
    return EncodingKind::kAdjacencyOneHot;
  }
  if (name == "path") return EncodingKind::kPath;
  throw InvalidArgument("unknown encoding kind: " + std::string(name));
}

Architecture sample_uniform(const SearchSpace& space, Rng& rng) {
  std::vector<std::uint8_t> ops(space.num_edges());
  for (auto& op : ops) {
    op = static_cast<std::uint8_t>(uniform_index(rng, space.num_ops()));
  }
  return Architecture(std::move(ops));
}

FeatureVector encode(const SearchSpace& space, const Architecture& arch,
                     EncodingKind kind) {
  arch.validate(space);
  FeatureVector fv;
  fv.kind = kind;
  const std::size_t n_ops = space.num_ops();
  switch (kind) {
    case EncodingKind::kAdjacencyOneHot: {
      // The topology is fixed, so the adjacency part is constant and only
      // the per-edge one-hot op blocks carry information.
      fv.values.assign(space.num_edges() * n_ops, 0.0);
      for (std::size_t e = 0; e < space.num_edges(); ++e) {
        fv.values[e * n_ops + arch.op(e)] = 1.0;
      }
      return fv;
    }
    case EncodingKind::kPath: {
      fv.values.assign(space.path_encoding_length(), 0.0);
      std::size_t offset = 0;
      for (const auto& path : space.paths()) {
        std::size_t code = 0;
        std::size_t block = 1;
        for (std::size_t e : path) {
          code = code * n_ops + arch.op(e);
          block *= n_ops;
        }
        fv.values[offset + code] = 1.0;
        offset += block;
      }
      return fv;
    }
  }
  throw InvalidArgument("unknown encoding kind");
}

Architecture mutate(const SearchSpace& space, const Architecture& arch,
                    std::size_t max_attrs, Rng& rng, MutationCountMode mode) {
  arch.validate(space);
  if (max_attrs < 1 || max_attrs > space.num_edges()) {
    throw InvalidArgument("max_attrs must be in [1, " +
                          std::to_string(space.num_edges()) + "], got " +
                          std::to_string(max_attrs));
  }
  if (space.num_ops() < 2) {
    throw InvalidArgument("cannot mutate in a single-op space");
  }
  const std::size_t k = mode == MutationCountMode::kUniform
                            ? 1 + uniform_index(rng, max_attrs)
                            : max_attrs;
  std::vector<std::size_t> edges(space.num_edges());
  std::iota(edges.begin(), edges.end(), 0);
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + uniform_index(rng, edges.size() - i);
    std::swap(edges[i], edges[j]);
  }
  std::vector<std::uint8_t> ops = arch.ops();
  for (std::size_t i = 0; i < k; ++i) {
    auto& op = ops[edges[i]];
    auto shift = 1 + uniform_index(rng, space.num_ops() - 1);
    op = static_cast<std::uint8_t>((op + shift) % space.num_ops());
  }
  return Architecture(std::move(ops));
}

std::size_t edit_distance(const Architecture& a, const Architecture& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("edit_distance over architectures from different spaces");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a.op(i) != b.op(i);
  return d;
}

}  // namespace predbench

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

#ifndef PREDBENCH_SEARCH_SPACE_HPP_
#define PREDBENCH_SEARCH_SPACE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "predbench/random.hpp"

namespace predbench {

// A cell is a complete DAG over `num_nodes` nodes; every edge i->j (i<j)
// carries exactly one operation. Node 0 is the cell input and the last node
// is the cell output.
class SearchSpace {
 public:
  static constexpr std::size_t kDefaultNodes = 4;

  SearchSpace();
  SearchSpace(std::size_t num_nodes, std::vector<std::string> ops);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_ops() const { return ops_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<std::string>& ops() const { return ops_; }
  const std::string& op_name(std::size_t op) const { return ops_.at(op); }

  // Edges in canonical order: grouped by target node, then by source node,
  // i.e. (0,1) (0,2) (1,2) (0,3) (1,3) (2,3) for four nodes.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

  // |ops|^edges. Saturates at UINT64_MAX.
  std::uint64_t cardinality() const;

  // Input-to-output paths as edge-index lists, shortest first.
  const std::vector<std::vector<std::size_t>>& paths() const { return paths_; }

  std::size_t path_encoding_length() const;

  // "nodes=4;ops=none,skip_connect,..." -- stable, used in store headers.
  std::string describe() const;
  static SearchSpace parse(std::string_view description);

  friend bool operator==(const SearchSpace& a, const SearchSpace& b) {
    return a.num_nodes_ == b.num_nodes_ && a.ops_ == b.ops_;
  }

 private:
  std::size_t num_nodes_;
  std::vector<std::string> ops_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> paths_;
};

class Architecture {
 public:
  Architecture() = default;
  explicit Architecture(std::vector<std::uint8_t> ops) : ops_(std::move(ops)) {}

  const std::vector<std::uint8_t>& ops() const { return ops_; }
  std::uint8_t op(std::size_t edge) const { return ops_.at(edge); }
  std::size_t size() const { return ops_.size(); }

  // Compact op-index string, e.g. "3|1|0|4|2|0".
  std::string str() const;
  static Architecture parse(std::string_view text);

  // Mixed-radix rank in [0, |ops|^edges).
  std::uint64_t index(const SearchSpace& space) const;
  static Architecture from_index(const SearchSpace& space, std::uint64_t index);

  // Throws InvalidArgument unless the architecture fits `space`.
  void validate(const SearchSpace& space) const;

  auto operator<=>(const Architecture&) const = default;
  bool operator==(const Architecture&) const = default;

 private:
  std::vector<std::uint8_t> ops_;
};

struct ArchitectureHash {
  std::size_t operator()(const Architecture& a) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto op : a.ops()) h = mix64(h ^ op);
    return static_cast<std::size_t>(h);
  }
};

enum class EncodingKind { kAdjacencyOneHot, kPath };

std::string to_string(EncodingKind kind);
// Accepts "adjacency_one_hot"/"adjacency" and "path"; throws InvalidArgument.
EncodingKind parse_encoding_kind(std::string_view name);

struct FeatureVector {
  std::vector<double> values;
  EncodingKind kind = EncodingKind::kAdjacencyOneHot;
};

Architecture sample_uniform(const SearchSpace& space, Rng& rng);

FeatureVector encode(const SearchSpace& space, const Architecture& arch,
                     EncodingKind kind);

// How the number of changed edges is drawn.
enum class MutationCountMode { kUniform, kMax };

// Changes between 1 and `max_attrs` distinct edges, each to a different op.
Architecture mutate(const SearchSpace& space, const Architecture& arch,
                    std::size_t max_attrs, Rng& rng,
                    MutationCountMode mode = MutationCountMode::kUniform);

std::size_t edit_distance(const Architecture& a, const Architecture& b);

}  // namespace predbench

template <>
struct std::hash<predbench::Architecture> : predbench::ArchitectureHash {};

#endif  // PREDBENCH_SEARCH_SPACE_HPP_

// Copyright 2026 The rigsim Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/params.hpp"

namespace rigsim {

using VertexId = std::uint32_t;

// U holds individuals, W holds communities. The two sides use separate
// 0-based index spaces.
enum class Side { kU, kW };

constexpr Side opposite(Side s) noexcept {
  return s == Side::kU ? Side::kW : Side::kU;
}

inline std::string_view to_string(Side s) { return s == Side::kU ? "U" : "W"; }

inline Side parse_side(std::string_view s) {
  if (s == "U" || s == "u") return Side::kU;
  if (s == "W" || s == "w") return Side::kW;
  throw ConfigError("side must be U or W");
}

// Compressed adjacency: neighbors of vertex v are
// targets[offsets[v], offsets[v+1]).
struct Csr {
  std::vector<std::uint64_t> offsets{0};
  std::vector<VertexId> targets;

  std::size_t vertex_count() const { return offsets.size() - 1; }
  std::span<const VertexId> operator[](std::size_t v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
  std::size_t degree(std::size_t v) const {
    return offsets[v + 1] - offsets[v];
  }

  // Builds the CSR from per-source adjacency lists.
  static Csr from_lists(const std::vector<std::vector<VertexId>>& lists);
  // Reverse adjacency over `target_count` vertices. Targets of the result
  // come out sorted because sources are visited in ascending order.
  Csr transposed(std::size_t target_count) const;

  bool operator==(const Csr&) const = default;
};

inline Csr Csr::from_lists(const std::vector<std::vector<VertexId>>& lists) {
  Csr csr;
  csr.offsets.assign(lists.size() + 1, 0);
  for (std::size_t v = 0; v < lists.size(); ++v) {
    csr.offsets[v + 1] = csr.offsets[v] + lists[v].size();
  }
  csr.targets.reserve(csr.offsets.back());
  for (const auto& l : lists) csr.targets.insert(csr.targets.end(), l.begin(), l.end());
  return csr;
}

inline Csr Csr::transposed(std::size_t target_count) const {
  Csr out;
  out.offsets.assign(target_count + 1, 0);
  for (VertexId t : targets) ++out.offsets[t + 1];
  for (std::size_t i = 0; i < target_count; ++i) {
    out.offsets[i + 1] += out.offsets[i];
  }
  out.targets.resize(targets.size());
  std::vector<std::uint64_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (std::size_t s = 0; s < vertex_count(); ++s) {
    for (VertexId t : (*this)[s]) {
      out.targets[cursor[t]++] = static_cast<VertexId>(s);
    }
  }
  return out;
}

// Realization of K_p(n, m). Immutable once built; adjacency is symmetric and
// every list is strictly increasing.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Takes the community-side adjacency (members of each w, sorted) and
  // derives the individual side.
  BipartiteGraph(Count n, Count m, Csr members)
      : n_(n), m_(m), adj_w_(std::move(members)) {
    if (adj_w_.vertex_count() != m) {
      throw ConfigError("community adjacency must have m lists");
    }
    adj_u_ = adj_w_.transposed(n);
  }

  // From explicit (w, u) membership lists.
  static BipartiteGraph from_memberships(
      Count n, Count m, const std::vector<std::vector<VertexId>>& members) {
    return BipartiteGraph(n, m, Csr::from_lists(members));
  }

  Count n() const { return n_; }
  Count m() const { return m_; }
  Count side_size(Side s) const { return s == Side::kU ? n_ : m_; }
  std::size_t edge_count() const { return adj_w_.targets.size(); }

  std::span<const VertexId> communities_of(VertexId u) const { return adj_u_[u]; }
  std::span<const VertexId> members_of(VertexId w) const { return adj_w_[w]; }
  // Neighbors of vertex v living on side s.
  std::span<const VertexId> neighbors(Side s, VertexId v) const {
    return s == Side::kU ? adj_u_[v] : adj_w_[v];
  }

  const Csr& adj_u() const { return adj_u_; }
  const Csr& adj_w() const { return adj_w_; }

  // Same graph with the roles of U and W exchanged.
  BipartiteGraph transposed() const {
    BipartiteGraph t;
    t.n_ = m_;
    t.m_ = n_;
    t.adj_u_ = adj_w_;
    t.adj_w_ = adj_u_;
    return t;
  }

  bool operator==(const BipartiteGraph&) const = default;

 private:
  Count n_ = 0;
  Count m_ = 0;
  Csr adj_u_;
  Csr adj_w_;
};

// Undirected simple graph (no loops, no multi-edges), sorted neighbor lists.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  // Edges are (a, b) pairs in any order; loops are rejected, duplicates
  // merged.
  static SimpleGraph from_edges(Count n,
                                std::vector<std::pair<VertexId, VertexId>> edges);

  Count n() const { return n_; }
  std::size_t edge_count() const { return adj_.targets.size() / 2; }
  std::span<const VertexId> neighbors(VertexId v) const { return adj_[v]; }
  const Csr& adjacency() const { return adj_; }

  bool operator==(const SimpleGraph&) const = default;

 private:
  Count n_ = 0;
  Csr adj_;
};

inline SimpleGraph SimpleGraph::from_edges(
    Count n, std::vector<std::pair<VertexId, VertexId>> edges) {
  for (auto& e : edges) {
    if (e.first == e.second) throw ConfigError("self-loop in simple graph");
    if (e.first >= n || e.second >= n) throw ConfigError("vertex out of range");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  SimpleGraph g;
  g.n_ = n;
  g.adj_.offsets.assign(n + 1, 0);
  for (const auto& [a, b] : edges) {
    ++g.adj_.offsets[a + 1];
    ++g.adj_.offsets[b + 1];
  }
  for (Count i = 0; i < n; ++i) g.adj_.offsets[i + 1] += g.adj_.offsets[i];
  g.adj_.targets.resize(edges.size() * 2);
  std::vector<std::uint64_t> cursor(g.adj_.offsets.begin(), g.adj_.offsets.end() - 1);
  // With edges sorted, each list receives its smaller neighbors (as the high
  // endpoint) before its larger ones, both in ascending order.
  for (const auto& [a, b] : edges) {
    g.adj_.targets[cursor[a]++] = b;
    g.adj_.targets[cursor[b]++] = a;
  }
  return g;
}

}  // namespace rigsim

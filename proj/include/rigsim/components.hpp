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
#include <cstdint>
#include <numeric>
#include <ostream>
#include <vector>

#include "rigsim/graph.hpp"
#include "rigsim/sampling.hpp"

namespace rigsim {

// Disjoint sets with union by size and path compression.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Returns false if a and b were already joined.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t set_size(std::size_t x) noexcept { return size_[find(x)]; }
  std::size_t element_count() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct ComponentRecord {
  std::uint64_t id = 0;      // 1-based rank after sorting
  std::uint64_t anchor = 0;  // smallest vertex id (U ids first, then n + w)
  std::uint64_t size_u = 0;
  std::uint64_t size_w = 0;
  // Edge count in the graph the component lives in. When `edges_exact` is
  // false it is a lower bound and `edges_upper` the matching upper bound.
  std::uint64_t edges = 0;
  std::uint64_t edges_upper = 0;
  bool edges_exact = true;
  bool edges_known = true;
  std::int64_t surplus = 0;  // edges - vertices + 1

  std::uint64_t vertices() const { return size_u + size_w; }
  bool operator==(const ComponentRecord&) const = default;
};

// Ordering key of a component list.
enum class SizeKey { kSizeU, kTotal };

struct ComponentList {
  SizeKey key = SizeKey::kSizeU;
  std::vector<ComponentRecord> records;

  std::size_t size() const { return records.size(); }
  const ComponentRecord& operator[](std::size_t i) const { return records[i]; }
};

namespace detail {

inline void finalize(ComponentList& list) {
  const bool by_total = list.key == SizeKey::kTotal;
  std::sort(list.records.begin(), list.records.end(),
            [by_total](const ComponentRecord& a, const ComponentRecord& b) {
              const auto ka = by_total ? a.vertices() : a.size_u;
              const auto kb = by_total ? b.vertices() : b.size_u;
              if (ka != kb) return ka > kb;
              return a.anchor < b.anchor;
            });
  for (std::size_t i = 0; i < list.records.size(); ++i) {
    auto& r = list.records[i];
    r.id = i + 1;
    if (r.edges_upper < r.edges) r.edges_upper = r.edges;
    r.surplus = static_cast<std::int64_t>(r.edges) -
                static_cast<std::int64_t>(r.vertices()) + 1;
  }
}

}  // namespace detail

// Components of K_p(n, m) over U and W, keyed by total size. Vertex u has
// union-find index u, community w has index n + w.
inline ComponentList components_bipartite(const BipartiteGraph& bip) {
  const std::size_t n = bip.n();
  const std::size_t total = n + bip.m();
  UnionFind uf(total);
  for (std::size_t w = 0; w < bip.m(); ++w) {
    for (VertexId u : bip.members_of(static_cast<VertexId>(w))) uf.unite(u, n + w);
  }
  std::vector<std::int64_t> slot(total, -1);
  ComponentList list{SizeKey::kTotal, {}};
  for (std::size_t v = 0; v < total; ++v) {
    const std::size_t root = uf.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(list.records.size());
      list.records.push_back({});
      list.records.back().anchor = v;
    }
    auto& rec = list.records[static_cast<std::size_t>(slot[root])];
    if (v < n) {
      ++rec.size_u;
      rec.edges += bip.adj_u().degree(v);
    } else {
      ++rec.size_w;
    }
  }
  detail::finalize(list);
  return list;
}

// Components of a simple graph (the intersection graph or an ERRG). size_w
// is 0.
inline ComponentList components_simple(const SimpleGraph& g) {
  const std::size_t n = g.n();
  UnionFind uf(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (VertexId x : g.neighbors(static_cast<VertexId>(v))) {
      if (x > v) uf.unite(v, x);
    }
  }
  std::vector<std::int64_t> slot(n, -1);
  ComponentList list{SizeKey::kSizeU, {}};
  std::vector<std::uint64_t> degree_sum;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = uf.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(list.records.size());
      list.records.push_back({});
      list.records.back().anchor = v;
      degree_sum.push_back(0);
    }
    const auto s = static_cast<std::size_t>(slot[root]);
    ++list.records[s].size_u;
    degree_sum[s] += g.neighbors(static_cast<VertexId>(v)).size();
  }
  for (std::size_t i = 0; i < list.records.size(); ++i) {
    list.records[i].edges = degree_sum[i] / 2;
    list.records[i].edges_upper = list.records[i].edges;
  }
  detail::finalize(list);
  return list;
}

// Components of the intersection graph computed on the bipartite graph
// itself: members of each community are merged, then W is dropped. Edge
// counts are exact, counting each individual's distinct co-members with a
// stamp array (O(sum_w d_w^2) time, O(n) memory). If that work exceeds the
// pair cap, edges become the interval [max(size_u - 1, largest clique),
// clique-sum].
inline ComponentList components_rig(const BipartiteGraph& bip,
                                    const ResourceCaps& caps = {}) {
  const std::size_t n = bip.n();
  UnionFind uf(n);
  for (std::size_t w = 0; w < bip.m(); ++w) {
    const auto members = bip.members_of(static_cast<VertexId>(w));
    for (std::size_t i = 1; i < members.size(); ++i) uf.unite(members[0], members[i]);
  }
  std::vector<std::int64_t> slot(n, -1);
  ComponentList list{SizeKey::kSizeU, {}};
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = uf.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(list.records.size());
      list.records.push_back({});
      list.records.back().anchor = v;
    }
    ++list.records[static_cast<std::size_t>(slot[root])].size_u;
  }
  auto record_of = [&](VertexId u) -> ComponentRecord& {
    return list.records[static_cast<std::size_t>(slot[uf.find(u)])];
  };

  const double mass = clique_pair_mass(bip);
  if (2.0 * mass <= caps.max_pair_writes) {
    std::vector<std::uint64_t> neighbor_count(list.records.size(), 0);
    std::vector<std::uint32_t> stamp(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
      const auto mark = static_cast<std::uint32_t>(u + 1);
      stamp[u] = mark;
      std::uint64_t distinct = 0;
      for (VertexId w : bip.communities_of(static_cast<VertexId>(u))) {
        for (VertexId x : bip.members_of(w)) {
          if (stamp[x] != mark) {
            stamp[x] = mark;
            ++distinct;
          }
        }
      }
      neighbor_count[static_cast<std::size_t>(slot[uf.find(u)])] += distinct;
    }
    for (std::size_t i = 0; i < list.records.size(); ++i) {
      list.records[i].edges = neighbor_count[i] / 2;
      list.records[i].edges_upper = list.records[i].edges;
    }
  } else {
    for (auto& r : list.records) {
      r.edges_exact = false;
      r.edges = r.size_u - 1;
    }
    for (std::size_t w = 0; w < bip.m(); ++w) {
      const auto members = bip.members_of(static_cast<VertexId>(w));
      if (members.empty()) continue;
      const std::uint64_t d = members.size();
      auto& r = record_of(members[0]);
      r.edges_upper += d * (d - 1) / 2;
      r.edges = std::max<std::uint64_t>(r.edges, d * (d - 1) / 2);
    }
  }
  detail::finalize(list);
  return list;
}

// First min(k, size) records.
inline ComponentList largest_k(const ComponentList& list, std::size_t k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  ComponentList out{list.key, {}};
  const auto take = std::min(k, list.records.size());
  out.records.assign(list.records.begin(),
                     list.records.begin() + static_cast<std::ptrdiff_t>(take));
  return out;
}

// CSV rows `component_id,size_u,size_w,edges,surplus`. Unknown edge counts
// are written as empty fields.
inline void write_components_csv(std::ostream& os, const ComponentList& list,
                                 bool header = true) {
  if (header) os << "component_id,size_u,size_w,edges,surplus\n";
  for (const auto& r : list.records) {
    os << r.id << ',' << r.size_u << ',' << r.size_w << ',';
    if (r.edges_known) os << r.edges << ',' << r.surplus;
    else os << ',';
    os << '\n';
  }
}

}  // namespace rigsim

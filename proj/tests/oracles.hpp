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

// Brute-force reference implementations used only by the tests. They work on
// dense membership matrices and plain BFS so they share no code with the
// library algorithms they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "rigsim/graph.hpp"

namespace oracle {

using rigsim::BipartiteGraph;
using rigsim::VertexId;

// member[u][w] for every pair.
inline std::vector<std::vector<char>> membership(const BipartiteGraph& b) {
  std::vector<std::vector<char>> mat(b.n(), std::vector<char>(b.m(), 0));
  for (std::size_t w = 0; w < b.m(); ++w) {
    for (VertexId u : b.members_of(static_cast<VertexId>(w))) mat[u][w] = 1;
  }
  return mat;
}

// All pairs (v1 < v2) sharing a community, scanning every w.
inline std::set<std::pair<VertexId, VertexId>> intersection_pairs(const BipartiteGraph& b) {
  const auto mat = membership(b);
  std::set<std::pair<VertexId, VertexId>> out;
  for (std::size_t a = 0; a < b.n(); ++a) {
    for (std::size_t c = a + 1; c < b.n(); ++c) {
      for (std::size_t w = 0; w < b.m(); ++w) {
        if (mat[a][w] && mat[c][w]) {
          out.emplace(static_cast<VertexId>(a), static_cast<VertexId>(c));
          break;
        }
      }
    }
  }
  return out;
}

// (size_u, size_w, bipartite edges, rig edges) of one component.
using ComponentKey = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

// Components of K_p(n, m) by BFS over the dense matrix, with the number of
// intersection-graph pairs inside each. Components without individuals are
// skipped when `with_u_only`.
inline std::multiset<ComponentKey> bipartite_components(const BipartiteGraph& b,
                                                        bool with_u_only) {
  const auto mat = membership(b);
  const auto pairs = intersection_pairs(b);
  const std::size_t n = b.n(), m = b.m();
  std::vector<int> label(n + m, -1);
  std::multiset<ComponentKey> out;
  int next = 0;
  for (std::size_t s = 0; s < n + m; ++s) {
    if (label[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = next;
    std::vector<std::size_t> us;
    std::uint64_t nw = 0, edges = 0;
    while (!q.empty()) {
      const auto x = q.front();
      q.pop();
      if (x < n) {
        us.push_back(x);
        for (std::size_t w = 0; w < m; ++w) {
          if (!mat[x][w]) continue;
          ++edges;
          if (label[n + w] < 0) {
            label[n + w] = next;
            q.push(n + w);
          }
        }
      } else {
        ++nw;
        for (std::size_t u = 0; u < n; ++u) {
          if (mat[u][x - n] && label[u] < 0) {
            label[u] = next;
            q.push(u);
          }
        }
      }
    }
    std::uint64_t rig = 0;
    for (const auto& [a, c] : pairs) rig += label[a] == next;
    ++next;
    if (with_u_only && us.empty()) continue;
    out.emplace(us.size(), nw, edges, rig);
  }
  return out;
}

// Sizes of intersection-graph components by BFS over the brute-force pairs,
// each with its edge count.
inline std::multiset<std::pair<std::uint64_t, std::uint64_t>> rig_components(
    const BipartiteGraph& b) {
  const auto pairs = intersection_pairs(b);
  const std::size_t n = b.n();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [a, c] : pairs) {
    adj[a].push_back(c);
    adj[c].push_back(a);
  }
  std::vector<int> label(n, -1);
  std::multiset<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    label[s] = 1;
    std::uint64_t size = 0, degree = 0;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      ++size;
      degree += adj[x].size();
      for (auto y : adj[x]) {
        if (label[y] < 0) {
          label[y] = 1;
          stack.push_back(y);
        }
      }
    }
    out.emplace(size, degree / 2);
  }
  return out;
}

// Increment of the exploration at step k recomputed from the explored
// sequence v_1..v_k alone: the new members of v_k's communities outside
// Q(k-1), minus those already found, minus one.
inline std::int64_t radius_two_increment(const BipartiteGraph& b, rigsim::Side side,
                                         const std::vector<std::int64_t>& visited,
                                         std::size_t k) {
  const auto opp = rigsim::opposite(side);
  std::set<VertexId> q, found;
  found.insert(static_cast<VertexId>(visited[1]));
  for (std::size_t j = 1; j < k; ++j) {
    const auto v = static_cast<VertexId>(visited[j]);
    found.insert(v);
    for (VertexId w : b.neighbors(side, v)) {
      q.insert(w);
      for (VertexId x : b.neighbors(opp, w)) found.insert(x);
    }
  }
  const auto v = static_cast<VertexId>(visited[k]);
  std::set<VertexId> fresh;
  for (VertexId w : b.neighbors(side, v)) {
    if (q.count(w)) continue;
    for (VertexId x : b.neighbors(opp, w)) {
      if (x != v && !found.count(x)) fresh.insert(x);
    }
  }
  return static_cast<std::int64_t>(fresh.size()) - 1;
}

// Binomial pmf and cdf through log-gamma.
inline double binomial_pmf(std::uint64_t n, double p, std::uint64_t k) {
  if (k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) +
                  kd * std::log(p) + (nd - kd) * std::log1p(-p));
}

inline double binomial_cdf(std::uint64_t n, double p, std::uint64_t k) {
  double s = 0.0;
  for (std::uint64_t i = 0; i <= std::min(k, n); ++i) s += binomial_pmf(n, p, i);
  return std::min(1.0, s);
}

}  // namespace oracle

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
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/graph.hpp"
#include "rigsim/params.hpp"
#include "rigsim/random.hpp"

namespace rigsim {

// Guards against materializing objects that would not fit in memory.
struct ResourceCaps {
  // Cap on the expected edge count of a sampled graph.
  double max_expected_edges = 2.0e8;
  // Cap on co-membership pair writes (sum over communities of d(d-1)/2).
  double max_pair_writes = 1.0e8;
};

namespace detail {

inline void check_id_space(Count size, const char* what) {
  if (size >= std::numeric_limits<VertexId>::max()) {
    throw ResourceError(std::string(what) + " exceeds the 32-bit vertex id space");
  }
}

}  // namespace detail

// Samples K_p(n, m). Each community w draws its size d_w ~ Bin(n, p) and then
// d_w distinct members, all from its own stream derive_seed(seed, w), so the
// result is independent of evaluation order. O(n + m + edges).
inline BipartiteGraph sample_bipartite(Count n, Count m, double p,
                                       std::uint64_t seed,
                                       const ResourceCaps& caps = {}) {
  if (n < 1 || m < 1) throw ConfigError("n and m must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  detail::check_id_space(n, "n");
  detail::check_id_space(m, "m");
  const double expected = static_cast<double>(n) * static_cast<double>(m) * p;
  if (expected > caps.max_expected_edges) {
    throw ResourceError("expected edge count " + std::to_string(expected) +
                        " exceeds cap");
  }
  Csr members;
  members.offsets.assign(m + 1, 0);
  members.targets.reserve(static_cast<std::size_t>(expected * 1.1) + 16);
  for (Count w = 0; w < m; ++w) {
    SplitMix64 gen(derive_seed(seed, w));
    const auto d = static_cast<std::uint64_t>(
        draw_binomial(gen, static_cast<std::int64_t>(n), p));
    const auto chosen = sample_distinct(gen, d, n);
    members.targets.insert(members.targets.end(), chosen.begin(), chosen.end());
    members.offsets[w + 1] = members.targets.size();
  }
  return BipartiteGraph(n, m, std::move(members));
}

inline BipartiteGraph sample_bipartite(const Params& params, std::uint64_t seed,
                                       const ResourceCaps& caps = {}) {
  params.validate();
  return sample_bipartite(params.n, params.m, params.p, seed, caps);
}

// Erdos-Renyi G(n, p) by geometric skipping over the lexicographic pair
// enumeration (w < v), O(n + edges).
inline SimpleGraph sample_errg(Count n, double p, std::uint64_t seed,
                               const ResourceCaps& caps = {}) {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  detail::check_id_space(n, "n");
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (pairs * p > caps.max_expected_edges) {
    throw ResourceError("expected edge count exceeds cap");
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(static_cast<std::size_t>(pairs * p * 1.1) + 16);
  if (p >= 1.0) {
    for (Count v = 1; v < n; ++v) {
      for (Count w = 0; w < v; ++w) {
        edges.emplace_back(static_cast<VertexId>(w), static_cast<VertexId>(v));
      }
    }
  } else if (p > 0.0) {
    SplitMix64 gen(derive_seed(seed, 0));
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
      const double r = uniform_unit(gen);
      const double skip = std::floor(std::log1p(-r) / log_q);
      // A skip past every remaining pair ends the enumeration.
      if (skip >= pairs) break;
      w += 1 + static_cast<std::int64_t>(skip);
      while (w >= v && v < nn) {
        w -= v;
        ++v;
      }
      if (v < nn) {
        edges.emplace_back(static_cast<VertexId>(w), static_cast<VertexId>(v));
      }
    }
  }
  return SimpleGraph::from_edges(n, std::move(edges));
}

// Sum over communities of d_w (d_w - 1) / 2: the number of co-membership
// pair writes, an upper bound on the intersection graph's edge count.
inline double clique_pair_mass(const BipartiteGraph& bip) {
  double total = 0.0;
  for (Count w = 0; w < bip.m(); ++w) {
    const double d = static_cast<double>(bip.adj_w().degree(w));
    total += 0.5 * d * (d - 1.0);
  }
  return total;
}

// Intersection graph on U: {v1, v2} is an edge iff some community contains
// both. O(sum_w d_w^2).
inline SimpleGraph intersection_graph(const BipartiteGraph& bip,
                                      const ResourceCaps& caps = {}) {
  const double mass = clique_pair_mass(bip);
  if (mass > caps.max_pair_writes) {
    throw ResourceError("intersection graph needs " + std::to_string(mass) +
                        " pair writes, above cap");
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(static_cast<std::size_t>(mass));
  for (Count w = 0; w < bip.m(); ++w) {
    const auto members = bip.members_of(static_cast<VertexId>(w));
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        edges.emplace_back(members[i], members[j]);
      }
    }
  }
  return SimpleGraph::from_edges(bip.n(), std::move(edges));
}

struct DegreeStats {
  std::uint64_t max_w = 0;  // largest community
  std::uint64_t max_u = 0;  // most memberships of one individual
  std::vector<std::uint64_t> histogram_w;  // histogram_w[d] = #communities of size d
  std::vector<std::uint64_t> histogram_u;
};

inline DegreeStats community_size_stats(const BipartiteGraph& bip) {
  DegreeStats stats;
  auto fill = [](const Csr& adj, std::uint64_t& max_degree,
                 std::vector<std::uint64_t>& hist) {
    for (std::size_t v = 0; v < adj.vertex_count(); ++v) {
      max_degree = std::max<std::uint64_t>(max_degree, adj.degree(v));
    }
    hist.assign(max_degree + 1, 0);
    for (std::size_t v = 0; v < adj.vertex_count(); ++v) ++hist[adj.degree(v)];
  };
  fill(bip.adj_w(), stats.max_w, stats.histogram_w);
  fill(bip.adj_u(), stats.max_u, stats.histogram_u);
  return stats;
}

}  // namespace rigsim

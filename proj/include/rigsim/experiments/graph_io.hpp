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

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/graph.hpp"

namespace rigsim {

// Text dump: `rig-bip v1 n m edges`, then one `w u` line per edge sorted by
// (w, u).
inline void write_graph_dump(std::ostream& os, const BipartiteGraph& bip) {
  os << "rig-bip v1 " << bip.n() << ' ' << bip.m() << ' ' << bip.edge_count() << '\n';
  for (std::size_t w = 0; w < bip.m(); ++w) {
    for (VertexId u : bip.members_of(static_cast<VertexId>(w))) os << w << ' ' << u << '\n';
  }
}

inline BipartiteGraph read_graph_dump(std::istream& in) {
  std::string magic, version;
  Count n = 0, m = 0, edges = 0;
  if (!(in >> magic >> version >> n >> m >> edges) || magic != "rig-bip" || version != "v1") {
    throw ConfigError("not a rig-bip v1 dump");
  }
  if (n < 1 || m < 1) throw ConfigError("dump: empty side");
  std::vector<std::vector<VertexId>> lists(m);
  std::uint64_t w = 0, u = 0;
  std::pair<std::uint64_t, std::uint64_t> prev{0, 0};
  for (Count e = 0; e < edges; ++e) {
    if (!(in >> w >> u)) throw ConfigError("dump: truncated edge list");
    if (w >= m || u >= n) throw ConfigError("dump: vertex out of range");
    if (e > 0 && !(prev < std::make_pair(w, u))) throw ConfigError("dump: edges not sorted");
    prev = {w, u};
    lists[w].push_back(static_cast<VertexId>(u));
  }
  std::string rest;
  if (in >> rest) throw ConfigError("dump: trailing data");
  return BipartiteGraph::from_memberships(n, m, lists);
}

}  // namespace rigsim

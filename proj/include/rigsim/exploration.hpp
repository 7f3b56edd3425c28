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

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rigsim/graph.hpp"
#include "rigsim/params.hpp"
#include "rigsim/random.hpp"
#include "rigsim/stats.hpp"

namespace rigsim {

enum class Termination {
  kStartSideExhausted,  // every start-side vertex is dead
  kBudget,              // step budget reached
  kOppositeExhausted,   // opposite side fully discovered, stop requested
};

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kStartSideExhausted: return "complete";
    case Termination::kBudget: return "budget";
    case Termination::kOppositeExhausted: return "opposite_exhausted";
  }
  return "unknown";
}

// What to do once every opposite-side vertex has been discovered while
// start-side vertices remain. Those vertices are necessarily isolated, so
// continuing yields exact excursions.
enum class OppositeExhaustion { kContinue, kStopTruncated };

struct ExplorationOptions {
  std::uint64_t step_budget = std::numeric_limits<std::uint64_t>::max();
  OppositeExhaustion on_opposite_exhausted = OppositeExhaustion::kContinue;
  // Largest number of distinct pairs kept for exact edge deduplication
  // (start side W). Past it E follows the clique-sum upper bound.
  std::size_t max_edge_pairs = 50'000'000;
  // Edge probability used for the conditional-moment columns. Defaults to
  // the realized edge density of the graph.
  std::optional<double> p;
};

// Conditional mean and variance of the walk increment X(k) given the prefix,
// in terms of the start side (size `start_size`) and opposite side.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// mean = p^2 (N_o - Q)(N_s - D+) - 1,
// var  = p^3 (1-p) (N_s - D+)^2 (N_o - Q) + p^2 (1-p) (N_s - D+)(N_o - Q).
inline Moments conditional_moments(double p, Count start_size, Count opposite_size,
                                   std::int64_t q, std::int64_t dplus) {
  if (q < 0 || dplus < 0 || static_cast<Count>(q) > opposite_size ||
      static_cast<Count>(dplus) > start_size) {
    throw ConfigError("conditional_moments: Q or D+ out of range");
  }
  const double a = static_cast<double>(start_size) - static_cast<double>(dplus);
  const double b = static_cast<double>(opposite_size) - static_cast<double>(q);
  const double p2 = p * p;
  Moments mo;
  mo.mean = p2 * a * b - 1.0;
  mo.variance = p2 * p * (1.0 - p) * a * a * b + p2 * (1.0 - p) * a * b;
  return mo;
}

// Per-step record of the two-step exploration. Index k runs over 0..steps();
// X, cond_mean and cond_var are meaningful for k >= 1 and hold 0 at k = 0.
struct ExplorationTrace {
  Side start_side = Side::kU;
  Count start_size = 0;
  Count opposite_size = 0;
  double p = 0.0;

  std::vector<std::int64_t> S;      // adapted walk
  std::vector<std::int64_t> R;      // reflected walk
  std::vector<std::int64_t> A;      // active count
  std::vector<std::int64_t> D;      // dead count (= k)
  std::vector<std::int64_t> Q;      // opposite-side vertices found
  std::vector<std::int64_t> Dplus;  // D + A
  std::vector<std::int64_t> E;      // intersection-graph edges explored
  std::vector<std::int64_t> X;      // increments
  std::vector<double> cond_mean;
  std::vector<double> cond_var;
  // Vertex explored at step k (visited[0] = v0 = visited[1]); -1 when the
  // engine does not track identities.
  std::vector<std::int64_t> visited;
  std::vector<std::uint64_t> excursion_boundaries;  // T_1, T_2, ...

  Termination termination = Termination::kBudget;
  bool edges_tracked = true;  // false: E is all zeros and meaningless
  bool edges_exact = true;    // false: E switched to the clique-sum bound

  std::size_t steps() const { return S.empty() ? 0 : S.size() - 1; }
  bool complete() const { return termination == Termination::kStartSideExhausted; }
};

namespace detail {

// Appends steps to a trace and maintains the derived fields.
class TraceRecorder {
 public:
  TraceRecorder(ExplorationTrace& trace, std::int64_t start_vertex) : t_(trace) {
    t_.S = {1};
    t_.R = {1};
    t_.A = {1};
    t_.D = {0};
    t_.Q = {0};
    t_.Dplus = {1};
    t_.E = {0};
    t_.X = {0};
    t_.cond_mean = {0.0};
    t_.cond_var = {0.0};
    t_.visited = {start_vertex};
  }

  Moments moments_before_step() const {
    return conditional_moments(t_.p, t_.start_size, t_.opposite_size, t_.Q.back(),
                               t_.Dplus.back());
  }

  void record(std::int64_t vertex, std::int64_t found, std::int64_t q,
              std::int64_t active, std::int64_t edges, const Moments& mo) {
    const std::int64_t k = static_cast<std::int64_t>(t_.S.size());
    min_before_ = std::min(min_before_, t_.S.back());
    const std::int64_t x = found - 1;
    const std::int64_t s = t_.S.back() + x;
    t_.X.push_back(x);
    t_.S.push_back(s);
    t_.R.push_back(s - min_before_ + 1);
    t_.A.push_back(active);
    t_.D.push_back(k);
    t_.Q.push_back(q);
    t_.Dplus.push_back(k + active);
    t_.E.push_back(edges);
    t_.cond_mean.push_back(mo.mean);
    t_.cond_var.push_back(mo.variance);
    t_.visited.push_back(vertex);
    const auto completed = static_cast<std::int64_t>(t_.excursion_boundaries.size());
    if (s == -completed) t_.excursion_boundaries.push_back(static_cast<std::uint64_t>(k));
    assert(t_.R.back() == active);
  }

 private:
  ExplorationTrace& t_;
  std::int64_t min_before_ = std::numeric_limits<std::int64_t>::max();
};

inline bool should_stop(ExplorationTrace& t, const ExplorationOptions& opt,
                        std::int64_t dead, std::int64_t q) {
  if (static_cast<Count>(dead) == t.start_size) {
    t.termination = Termination::kStartSideExhausted;
    return true;
  }
  if (static_cast<std::uint64_t>(dead) >= opt.step_budget) {
    t.termination = Termination::kBudget;
    return true;
  }
  if (opt.on_opposite_exhausted == OppositeExhaustion::kStopTruncated &&
      static_cast<Count>(q) == t.opposite_size) {
    t.termination = Termination::kOppositeExhausted;
    return true;
  }
  return false;
}

}  // namespace detail

// Two-step exploration of a realized bipartite graph. At every step the
// explored vertex is uniform over the active set (or over the undiscovered
// start-side vertices when none is active); its new communities join Q and
// their undiscovered members become active. E counts the intersection-graph
// edges of the subgraph induced by the dead and opposite sets.
inline ExplorationTrace explore(const BipartiteGraph& bip, Side start_side,
                                std::uint64_t seed,
                                const ExplorationOptions& options = {}) {
  if (options.step_budget < 1) throw ConfigError("step budget must be >= 1");
  const Side opp = opposite(start_side);
  ExplorationTrace trace;
  trace.start_side = start_side;
  trace.start_size = bip.side_size(start_side);
  trace.opposite_size = bip.side_size(opp);

  enum : std::uint8_t { kFresh = 0, kActive = 1, kDead = 2 };
  const std::size_t ns = trace.start_size;
  std::vector<std::uint8_t> status(ns, kFresh);
  std::vector<std::uint8_t> in_q(trace.opposite_size, 0);
  constexpr auto kNoSlot = std::numeric_limits<std::uint32_t>::max();
  std::vector<VertexId> pool(ns);
  std::vector<std::uint32_t> pool_slot(ns);
  for (std::size_t v = 0; v < ns; ++v) {
    pool[v] = static_cast<VertexId>(v);
    pool_slot[v] = static_cast<std::uint32_t>(v);
  }
  auto pool_remove = [&](VertexId v) {
    const std::uint32_t slot = pool_slot[v];
    const VertexId last = pool.back();
    pool[slot] = last;
    pool_slot[last] = slot;
    pool.pop_back();
    pool_slot[v] = kNoSlot;
  };
  std::vector<VertexId> active;

  SplitMix64 gen(derive_seed(seed, 0));
  const VertexId v0 = pool[uniform_index(gen, pool.size())];
  pool_remove(v0);
  status[v0] = kActive;
  active.push_back(v0);

  trace.p = options.p.value_or(static_cast<double>(bip.edge_count()) /
                               (static_cast<double>(bip.n()) *
                                static_cast<double>(bip.m())));
  if (!(trace.p >= 0.0 && trace.p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  detail::TraceRecorder rec(trace, v0);

  std::int64_t q_count = 0;
  std::int64_t edges = 0;
  std::vector<std::uint64_t> stamp(start_side == Side::kU ? ns : 0, 0);
  std::unordered_set<std::uint64_t> pairs;
  const Count no = trace.opposite_size;

  for (std::uint64_t k = 1;; ++k) {
    const Moments mo = rec.moments_before_step();
    VertexId v;
    if (!active.empty()) {
      const auto i = uniform_index(gen, active.size());
      v = active[i];
      active[i] = active.back();
      active.pop_back();
    } else {
      v = pool[uniform_index(gen, pool.size())];
      assert(status[v] == kFresh);
      pool_remove(v);
    }
    status[v] = kDead;

    std::int64_t found = 0;
    for (VertexId w : bip.neighbors(start_side, v)) {
      if (in_q[w]) continue;
      in_q[w] = 1;
      ++q_count;
      for (VertexId x : bip.neighbors(opp, w)) {
        if (status[x] == kFresh) {
          status[x] = kActive;
          active.push_back(x);
          pool_remove(x);
          ++found;
        }
      }
    }

    if (start_side == Side::kU) {
      // New edges join v to earlier dead vertices sharing a community.
      for (VertexId w : bip.neighbors(start_side, v)) {
        for (VertexId x : bip.neighbors(opp, w)) {
          if (x != v && status[x] == kDead && stamp[x] != k) {
            stamp[x] = k;
            ++edges;
          }
        }
      }
    } else {
      // v is a community; its members now all lie in Q. Count pairs not
      // already covered by an earlier dead community.
      const auto members = bip.neighbors(start_side, v);
      if (trace.edges_exact) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (pairs.insert(static_cast<std::uint64_t>(members[i]) * no + members[j])
                    .second) {
              ++edges;
            }
          }
        }
        if (pairs.size() > options.max_edge_pairs) {
          trace.edges_exact = false;
          pairs = {};
        }
      } else {
        const auto d = static_cast<std::int64_t>(members.size());
        edges += d * (d - 1) / 2;
      }
    }

    rec.record(v, found, q_count, static_cast<std::int64_t>(active.size()), edges, mo);
    if (detail::should_stop(trace, options, static_cast<std::int64_t>(k), q_count)) break;
  }
  return trace;
}

// The same process without a stored graph: every edge is revealed only when
// the exploration first looks at it. Given the prefix, undiscovered vertices
// on each side are exchangeable, so only counts are needed:
//   new opposite vertices Z ~ Bin(N_o - Q, p),
//   new active vertices    ~ Bin(N_s - D - A, 1 - (1 - p)^Z).
// The law of (S, A, D, Q) is identical to explore() on a sampled K_p graph.
// Vertex identities and E are not tracked. O(steps) time and memory.
inline ExplorationTrace explore_on_the_fly(Count start_size, Count opposite_size,
                                           double p, Side start_side,
                                           std::uint64_t seed,
                                           const ExplorationOptions& options = {}) {
  if (start_size < 1 || opposite_size < 1) throw ConfigError("sides must be non-empty");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  if (options.step_budget < 1) throw ConfigError("step budget must be >= 1");
  ExplorationTrace trace;
  trace.start_side = start_side;
  trace.start_size = start_size;
  trace.opposite_size = opposite_size;
  trace.p = p;
  trace.edges_tracked = false;
  detail::TraceRecorder rec(trace, -1);

  SplitMix64 gen(derive_seed(seed, 0));
  const double log_keep = std::log1p(-std::min(p, 1.0 - 1e-300));
  const auto ns = static_cast<std::int64_t>(start_size);
  const auto no = static_cast<std::int64_t>(opposite_size);
  std::int64_t active = 1;
  std::int64_t dead = 0;
  std::int64_t q = 0;
  for (std::uint64_t k = 1;; ++k) {
    const Moments mo = rec.moments_before_step();
    if (active > 0) --active;  // else: restart from an undiscovered vertex
    ++dead;
    const std::int64_t z = draw_binomial(gen, no - q, p);
    q += z;
    std::int64_t found = 0;
    if (z > 0) {
      const double hit = p >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(z) * log_keep);
      found = draw_binomial(gen, ns - dead - active, hit);
    }
    active += found;
    rec.record(-1, found, q, active, 0, mo);
    if (detail::should_stop(trace, options, dead, q)) break;
  }
  return trace;
}

inline ExplorationTrace explore_on_the_fly(const Params& params, Side start_side,
                                           std::uint64_t seed,
                                           const ExplorationOptions& options = {}) {
  params.validate();
  const Count ns = start_side == Side::kU ? params.n : params.m;
  const Count no = start_side == Side::kU ? params.m : params.n;
  return explore_on_the_fly(ns, no, params.p, start_side, seed, options);
}

struct ExcursionRecord {
  std::uint64_t index = 0;    // N, 1-based
  std::uint64_t t_start = 0;  // T_{N-1}
  std::uint64_t t_end = 0;    // T_N
  std::int64_t delta_q = 0;
  std::int64_t delta_e = 0;
  std::int64_t start_vertex = -1;

  std::uint64_t length() const { return t_end - t_start; }
};

struct ExcursionList {
  std::vector<ExcursionRecord> records;
  // True when the trace ran to completion, so the records cover every
  // component holding a start-side vertex.
  bool complete = false;
};

// Completed excursions of the walk: T_N is the first k with S[k] = 1 - N.
inline ExcursionList excursions(const ExplorationTrace& trace) {
  ExcursionList out;
  out.complete = trace.complete();
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < trace.excursion_boundaries.size(); ++i) {
    const std::uint64_t end = trace.excursion_boundaries[i];
    ExcursionRecord r;
    r.index = i + 1;
    r.t_start = prev;
    r.t_end = end;
    r.delta_q = trace.Q[end] - trace.Q[prev];
    r.delta_e = trace.E[end] - trace.E[prev];
    r.start_vertex = trace.visited[prev + 1];
    out.records.push_back(r);
    prev = end;
  }
  return out;
}

// Doob decomposition S = Y + M with predictable drift Y (cumulative
// conditional means) and quadratic-variation process L (cumulative
// conditional variances). Sums are compensated.
struct DoobDecomposition {
  std::vector<double> Y;
  std::vector<double> L;
  std::vector<double> M;
};

inline DoobDecomposition doob_decomposition(const ExplorationTrace& trace) {
  DoobDecomposition dd;
  const std::size_t len = trace.S.size();
  dd.Y.resize(len);
  dd.L.resize(len);
  dd.M.resize(len);
  CompensatedSum y;
  CompensatedSum l;
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) {
      y.add(trace.cond_mean[k]);
      l.add(trace.cond_var[k]);
    }
    dd.Y[k] = y.value();
    dd.L[k] = l.value();
    dd.M[k] = static_cast<double>(trace.S[k]) - dd.Y[k];
  }
  return dd;
}

// CSV `k,S,R,A,Q,Dplus,E,X,cond_mean,cond_var`.
inline void write_trace_csv(std::ostream& os, const ExplorationTrace& t) {
  os << "k,S,R,A,Q,Dplus,E,X,cond_mean,cond_var\n";
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < t.S.size(); ++k) {
    os << k << ',' << t.S[k] << ',' << t.R[k] << ',' << t.A[k] << ',' << t.Q[k]
       << ',' << t.Dplus[k] << ',';
    if (t.edges_tracked) os << t.E[k];
    os << ',' << t.X[k] << ',' << t.cond_mean[k] << ',' << t.cond_var[k] << '\n';
  }
  os.precision(old);
}

// CSV `N,T_start,T_end,length,delta_Q,delta_E`.
inline void write_excursions_csv(std::ostream& os, const ExcursionList& list,
                                 bool edges_tracked = true) {
  os << "N,T_start,T_end,length,delta_Q,delta_E\n";
  for (const auto& r : list.records) {
    os << r.index << ',' << r.t_start << ',' << r.t_end << ',' << r.length() << ','
       << r.delta_q << ',';
    if (edges_tracked) os << r.delta_e;
    os << '\n';
  }
}

}  // namespace rigsim

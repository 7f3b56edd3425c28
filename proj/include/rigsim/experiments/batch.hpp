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

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "rigsim/components.hpp"
#include "rigsim/errors.hpp"
#include "rigsim/exploration.hpp"
#include "rigsim/experiments/config.hpp"
#include "rigsim/random.hpp"
#include "rigsim/sampling.hpp"
#include "rigsim/scaling.hpp"
#include "rigsim/stats.hpp"

#ifndef RIGSIM_GIT_DESCRIBE
#define RIGSIM_GIT_DESCRIBE "unknown"
#endif

namespace rigsim {

inline constexpr std::string_view kBuildDescribe = RIGSIM_GIT_DESCRIBE;

// Components read off the excursions of a complete trace. The excursion of
// a start-side vertex covers its whole bipartite component, so lengths give
// the start-side counts and the Q increments the opposite-side counts.
// Vertices never reached (opposite side only) become singletons. For the
// rig model, W is dropped as in components_rig.
inline ComponentList excursion_components(const ExplorationTrace& trace, Model model) {
  if (!trace.complete()) throw ConfigError("excursion components need a complete trace");
  if (model == Model::kErrg) throw ConfigError("errg has no exploration");
  const bool from_u = trace.start_side == Side::kU;
  const bool rig = model == Model::kRig;
  const bool edges_ok = rig && trace.edges_tracked && trace.edges_exact;
  ComponentList list{rig ? SizeKey::kSizeU : SizeKey::kTotal, {}};
  const auto ex = excursions(trace);
  for (const auto& e : ex.records) {
    ComponentRecord r;
    const auto len = e.length();
    const auto dq = static_cast<std::uint64_t>(e.delta_q);
    r.size_u = from_u ? len : dq;
    r.size_w = from_u ? dq : len;
    // Ties are broken by start vertex when known, else by exploration order.
    r.anchor = e.start_vertex >= 0 ? static_cast<std::uint64_t>(e.start_vertex) : e.index;
    if (rig) {
      if (r.size_u == 0) continue;  // a community with no members
      r.size_w = 0;
      r.edges_known = edges_ok;
      if (edges_ok) r.edges = r.edges_upper = static_cast<std::uint64_t>(e.delta_e);
    } else {
      r.edges_known = false;
    }
    list.records.push_back(r);
  }
  const Count unreached = trace.opposite_size - static_cast<Count>(trace.Q.back());
  if (rig ? !from_u : true) {
    for (Count i = 0; i < unreached; ++i) {
      ComponentRecord r;
      (from_u ? r.size_w : r.size_u) = 1;
      r.anchor = std::numeric_limits<std::uint32_t>::max() + i;
      r.edges_known = rig;
      list.records.push_back(r);
    }
  }
  detail::finalize(list);
  return list;
}

// Multipliers applied to |C_i| and |E(C_i)| of a batch. rig: n^(-2/3) for
// alpha >= 1, else n^(-1/2-alpha/6) and n^(-1+alpha/3). bipartite:
// n^(-1/6-alpha/2) on total size (sides swapped when alpha < 1). errg:
// n^(-2/3). alpha is the realized log m / log n.
struct BatchScaling {
  double size = 1.0;
  double edges = std::numeric_limits<double>::quiet_NaN();
};

inline BatchScaling batch_scaling(const ExperimentConfig& c) {
  BatchScaling s;
  const Count n = c.n;
  const Count m = c.resolved_m();
  const double nd = static_cast<double>(n);
  if (c.model == Model::kErrg) {
    s.size = 1.0 / two_thirds_power(nd);
    return s;
  }
  if (n < 2 || m < 2) return s;
  const double a = realized_alpha(n, m);
  if (c.model == Model::kRig) {
    if (a >= 1.0) {
      s.size = 1.0 / two_thirds_power(nd);
    } else {
      const auto e = component_exponents(n, m, ComponentRegime::kRigII);
      s.size = std::pow(nd, -e.size);
      s.edges = std::pow(nd, -e.edges);
    }
  } else if (a >= 1.0) {
    s.size = std::pow(nd, -(1.0 / 6.0 + a / 2.0));
  } else {
    s.size = std::pow(static_cast<double>(m), -(1.0 / 6.0 + 1.0 / (2.0 * a)));
  }
  return s;
}

// Sup statistics of one trace over the configured horizon.
struct TraceStats {
  std::optional<double> drift;  // needs lambda
  double variance = 0.0;
  double opposite = 0.0;
  std::optional<double> edge;  // needs a trace that tracks E
};

struct ReplicaResult {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  ComponentList top;
  std::vector<double> rescaled_sizes;
  std::vector<double> rescaled_edges;  // NaN where unknown
  std::optional<TraceStats> stats;
  std::vector<double> walk;  // n^(-1/3) S on the grid 0, 0.01, ..., horizon
};

struct BatchResult {
  ExperimentConfig config;
  Engine engine = Engine::kGraph;
  std::vector<ReplicaResult> replicas;
  double wall_time_s = 0.0;
  unsigned threads = 1;

  bool complete() const {
    for (const auto& r : replicas) {
      if (!r.ok) return false;
    }
    return true;
  }

  // Rescaled |C_rank| over successful replicas (0 when a replica has fewer
  // components).
  std::vector<double> sizes(std::size_t rank) const {
    std::vector<double> v;
    for (const auto& r : replicas) {
      if (r.ok) v.push_back(rank <= r.rescaled_sizes.size() ? r.rescaled_sizes[rank - 1] : 0.0);
    }
    return v;
  }

  std::vector<double> edges(std::size_t rank) const {
    std::vector<double> v;
    for (const auto& r : replicas) {
      if (r.ok && rank <= r.rescaled_edges.size()) v.push_back(r.rescaled_edges[rank - 1]);
    }
    return v;
  }
};

inline constexpr double kWalkGridStep = 0.01;

namespace detail {

inline TraceStats trace_stats(const ExplorationTrace& t, const ExperimentConfig& c) {
  TraceStats s;
  const Count ns = t.start_size;
  if (c.lambda) s.drift = drift_statistic(t, ns, c.horizon, *c.lambda);
  s.variance = variance_statistic(t, ns, c.horizon);
  s.opposite = opposite_statistic(t, c.horizon);
  if (t.edges_tracked) s.edge = edge_statistic(t, c.horizon);
  return s;
}

inline std::vector<double> walk_values(const ExplorationTrace& t, double horizon) {
  const double ns = static_cast<double>(t.start_size);
  const double scale = two_thirds_power(ns);
  std::vector<double> out;
  for (double s : make_grid(horizon, kWalkGridStep)) {
    const auto k = std::min<std::uint64_t>(time_index(s * scale), t.steps());
    out.push_back(static_cast<double>(t.S[k]) / std::cbrt(ns));
  }
  return out;
}

}  // namespace detail

// One replica. Its seed is derive_seed(master_seed, index); the graph uses
// stream 0 of that seed and the exploration stream 1.
inline ReplicaResult run_replica(const ExperimentConfig& c, std::uint64_t index) {
  ReplicaResult out;
  out.index = index;
  out.seed = derive_seed(c.master_seed, index);
  const double p = c.resolved_p();
  const Count n = c.n;
  const Count m = c.resolved_m();
  ExplorationOptions opts;
  opts.p = p;
  opts.step_budget = c.step_budget();

  ComponentList list;
  std::optional<ExplorationTrace> trace;
  try {
    if (c.model == Model::kErrg) {
      list = components_simple(sample_errg(n, p, derive_seed(out.seed, 0), c.caps));
    } else if (c.resolved_engine() == Engine::kGraph) {
      const auto bip = sample_bipartite(n, m, p, derive_seed(out.seed, 0), c.caps);
      list = c.model == Model::kRig ? components_rig(bip, c.caps) : components_bipartite(bip);
      if (c.diagnostics) trace = explore(bip, c.start_side, derive_seed(out.seed, 1), opts);
    } else {
      // Components come from a complete run on the smaller side, which is
      // the cheaper one; the law of the partition does not depend on it.
      const Side side = n <= m ? Side::kU : Side::kW;
      const Count ns = side == Side::kU ? n : m;
      const Count no = side == Side::kU ? m : n;
      const auto full = explore_on_the_fly(ns, no, p, side, derive_seed(out.seed, 2));
      list = excursion_components(full, c.model);
      if (c.diagnostics) {
        const Count ds = c.start_side == Side::kU ? n : m;
        const Count dn = c.start_side == Side::kU ? m : n;
        trace = explore_on_the_fly(ds, dn, p, c.start_side, derive_seed(out.seed, 1), opts);
      }
    }
  } catch (const ResourceError& e) {
    out.ok = false;
    out.error = e.what();
    return out;
  }

  out.top = largest_k(list, c.top_k);
  const auto scaling = batch_scaling(c);
  const bool total = c.model == Model::kBipartite;
  for (const auto& r : out.top.records) {
    out.rescaled_sizes.push_back(
        scaling.size * static_cast<double>(total ? r.vertices() : r.size_u));
    out.rescaled_edges.push_back(r.edges_known && r.edges_exact
                                     ? scaling.edges * static_cast<double>(r.edges)
                                     : std::numeric_limits<double>::quiet_NaN());
  }
  if (trace) {
    out.stats = detail::trace_stats(*trace, c);
    out.walk = detail::walk_values(*trace, c.horizon);
  }
  return out;
}

// Runs all replicas over a work queue of `threads` workers. Results are
// stored by replica index, so every output is independent of scheduling.
inline BatchResult run_batch(const ExperimentConfig& c, unsigned threads = 0) {
  c.validate();
  BatchResult result;
  result.config = c;
  result.engine = c.model == Model::kErrg ? Engine::kGraph : c.resolved_engine();
  result.threads = std::max(1u, threads ? threads : c.threads);
  result.replicas.resize(c.replicas);
  const auto t0 = std::chrono::steady_clock::now();

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= c.replicas) return;
      try {
        result.replicas[i] = run_replica(c, i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = c.replicas;
      }
    }
  };
  if (result.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const auto count = std::min<std::uint64_t>(result.threads, c.replicas);
    for (std::uint64_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

namespace detail {

inline std::string csv_real(double x) {
  return std::isnan(x) ? std::string() : format_real(x);
}

inline void summary_row(std::ostream& os, const std::string& name,
                        const std::vector<double>& xs) {
  std::vector<double> v;
  for (double x : xs) {
    if (!std::isnan(x)) v.push_back(x);
  }
  if (v.empty()) return;
  const auto s = summarize(v);
  os << name << ',' << s.count << ',' << format_real(s.mean) << ','
     << format_real(s.median) << ',' << format_real(s.q05) << ','
     << format_real(s.q25) << ',' << format_real(s.q75) << ','
     << format_real(s.q95) << '\n';
}

}  // namespace detail

// `replica,seed,rank,size_u,size_w,edges,surplus,rescaled_size,rescaled_edges`
// in replica order. Failed replicas have no rows.
inline void write_replicas_csv(std::ostream& os, const BatchResult& b) {
  os << "replica,seed,rank,size_u,size_w,edges,surplus,rescaled_size,rescaled_edges\n";
  for (const auto& r : b.replicas) {
    if (!r.ok) continue;
    for (std::size_t i = 0; i < r.top.size(); ++i) {
      const auto& c = r.top[i];
      os << r.index << ',' << r.seed << ',' << c.id << ',' << c.size_u << ','
         << c.size_w << ',';
      if (c.edges_known && c.edges_exact) os << c.edges << ',' << c.surplus;
      else os << ',';
      os << ',' << detail::format_real(r.rescaled_sizes[i]) << ','
         << detail::csv_real(r.rescaled_edges[i]) << '\n';
    }
  }
}

// Aggregate `quantity,count,mean,median,q05,q25,q75,q95`.
inline void write_summary_csv(std::ostream& os, const BatchResult& b) {
  os << "quantity,count,mean,median,q05,q25,q75,q95\n";
  for (std::size_t k = 1; k <= b.config.top_k; ++k) {
    detail::summary_row(os, "size_rank" + std::to_string(k), b.sizes(k));
  }
  for (std::size_t k = 1; k <= b.config.top_k; ++k) {
    detail::summary_row(os, "edges_rank" + std::to_string(k), b.edges(k));
  }
  std::vector<double> drift, variance, opposite, edge;
  for (const auto& r : b.replicas) {
    if (!r.ok || !r.stats) continue;
    if (r.stats->drift) drift.push_back(*r.stats->drift);
    variance.push_back(r.stats->variance);
    opposite.push_back(r.stats->opposite);
    if (r.stats->edge) edge.push_back(*r.stats->edge);
  }
  detail::summary_row(os, "drift", drift);
  detail::summary_row(os, "variance", variance);
  detail::summary_row(os, "opposite", opposite);
  detail::summary_row(os, "edge", edge);
}

// `replica,seed,drift,variance,opposite,edge`.
inline void write_diagnostics_csv(std::ostream& os, const BatchResult& b) {
  os << "replica,seed,drift,variance,opposite,edge\n";
  for (const auto& r : b.replicas) {
    if (!r.ok || !r.stats) continue;
    const auto& s = *r.stats;
    os << r.index << ',' << r.seed << ','
       << (s.drift ? detail::format_real(*s.drift) : std::string()) << ','
       << detail::format_real(s.variance) << ',' << detail::format_real(s.opposite) << ','
       << (s.edge ? detail::format_real(*s.edge) : std::string()) << '\n';
  }
}

inline nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  std::istringstream in(c.to_text());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

inline nlohmann::json manifest_json(const BatchResult& b) {
  const auto& c = b.config;
  nlohmann::json j;
  j["config"] = config_json(c);
  nlohmann::json resolved;
  resolved["m"] = c.resolved_m();
  resolved["p"] = c.resolved_p();
  resolved["engine"] = std::string(to_string(b.engine));
  if (c.model != Model::kErrg) {
    resolved["regime"] = std::string(to_string(c.resolved_regime()));
    if (c.n >= 2) resolved["realized_alpha"] = realized_alpha(c.n, c.resolved_m());
  }
  if (c.step_budget_T) resolved["step_budget"] = c.step_budget();
  j["resolved"] = resolved;
  j["build"] = std::string(kBuildDescribe);
  j["threads"] = b.threads;
  j["wall_time_s"] = b.wall_time_s;
  j["status"] = b.complete() ? "complete" : "incomplete";
  nlohmann::json reps = nlohmann::json::array();
  std::vector<std::uint64_t> incomplete;
  for (const auto& r : b.replicas) {
    nlohmann::json e{{"index", r.index}, {"seed", r.seed}, {"ok", r.ok}};
    if (!r.ok) {
      e["error"] = r.error;
      incomplete.push_back(r.index);
    }
    reps.push_back(e);
  }
  j["replicas"] = reps;
  j["incomplete_replicas"] = incomplete;
  return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

// Writes replicas.csv, summary.csv, diagnostics.csv (when traced) and
// manifest.json under `dir`, optionally with a file-name prefix.
inline void write_batch_outputs(const BatchResult& b, const std::filesystem::path& dir,
                                const std::string& prefix = "") {
  write_text_file(dir / (prefix + "replicas.csv"),
                  render([&](std::ostream& os) { write_replicas_csv(os, b); }));
  write_text_file(dir / (prefix + "summary.csv"),
                  render([&](std::ostream& os) { write_summary_csv(os, b); }));
  if (b.config.diagnostics) {
    write_text_file(dir / (prefix + "diagnostics.csv"),
                    render([&](std::ostream& os) { write_diagnostics_csv(os, b); }));
  }
  write_text_file(dir / (prefix + "manifest.json"), manifest_json(b).dump(2) + "\n");
}

}  // namespace rigsim

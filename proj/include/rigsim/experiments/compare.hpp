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

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/experiments/batch.hpp"
#include "rigsim/experiments/config.hpp"
#include "rigsim/random.hpp"
#include "rigsim/stats.hpp"

namespace rigsim {

struct RankComparison {
  std::size_t rank = 0;
  KsResult ks;
};

struct ComparisonReport {
  std::vector<RankComparison> ranks;
  // Matched reference.
  Count errg_size = 0;
  double errg_p = 0.0;
  std::string matching;
  // alpha < 1 only: rescaled |E(C_i)| against the reference sizes / 2, and
  // the mean of rescaled |E(C_1)| / rescaled |C_1| (limit 1/2).
  std::vector<RankComparison> edge_ranks;
  std::optional<double> edge_size_ratio;

  std::size_t passing(double level) const {
    std::size_t k = 0;
    for (const auto& r : ranks) k += r.ks.p_value > level;
    return k;
  }
};

// Rank-by-rank two-sample KS between two finished batches.
inline ComparisonReport compare_batches(const BatchResult& a, const BatchResult& b,
                                        std::size_t k) {
  if (a.replicas.size() != b.replicas.size()) {
    throw ConfigError("compared batches have different replica counts");
  }
  if (k < 1) throw ConfigError("k must be >= 1");
  ComparisonReport report;
  for (std::size_t i = 1; i <= k; ++i) {
    report.ranks.push_back({i, ks_two_sample(a.sizes(i), b.sizes(i))});
  }
  return report;
}

// Reference model for a rig or bipartite config: an ERRG at
// (1 + 2 lambda s^(-1/3)) / s with s = n when alpha > 1 and s = m when
// alpha < 1. Same replica count; the master seed is a derived stream.
inline ExperimentConfig errg_reference(const ExperimentConfig& c) {
  if (c.model == Model::kErrg) throw ConfigError("reference of an errg batch");
  if (!c.lambda) throw ConfigError("the reference match needs lambda");
  ExperimentConfig e;
  e.model = Model::kErrg;
  e.n = c.resolved_regime() == Regime::kAlphaGt1 ? c.n : c.resolved_m();
  e.lambda = c.lambda;
  e.replicas = c.replicas;
  e.master_seed = derive_seed(c.master_seed, 0x65727267);  // "errg"
  e.top_k = c.top_k;
  e.threads = c.threads;
  e.out_dir = c.out_dir;
  e.caps = c.caps;
  return e;
}

inline ComparisonReport compare_results(const BatchResult& rig, const BatchResult& errg,
                                        std::size_t k) {
  auto report = compare_batches(rig, errg, k);
  const auto& c = rig.config;
  report.errg_size = errg.config.n;
  report.errg_p = errg.config.resolved_p();
  report.matching = "errg on " + std::to_string(report.errg_size) + " vertices (" +
                    (c.resolved_regime() == Regime::kAlphaGt1 ? "n" : "m") +
                    "), p = (1 + 2 lambda s^(-1/3)) / s, sizes times s^(-2/3)";
  if (c.model == Model::kRig && c.resolved_regime() == Regime::kAlphaLt1) {
    for (std::size_t i = 1; i <= k; ++i) {
      const auto e = rig.edges(i);
      bool known = e.size() == rig.sizes(i).size() && !e.empty();
      for (double x : e) known = known && !std::isnan(x);
      if (!known) break;
      auto half = errg.sizes(i);
      for (double& x : half) x /= 2.0;
      report.edge_ranks.push_back({i, ks_two_sample(e, half)});
    }
    std::vector<double> ratio;
    for (const auto& r : rig.replicas) {
      if (!r.ok || r.rescaled_sizes.empty() || std::isnan(r.rescaled_edges[0])) continue;
      ratio.push_back(r.rescaled_edges[0] / r.rescaled_sizes[0]);
    }
    if (!ratio.empty()) report.edge_size_ratio = mean(ratio);
  }
  return report;
}

struct ComparisonRun {
  BatchResult rig;
  BatchResult errg;
  ComparisonReport report;
};

inline ComparisonRun compare_to_errg(const ExperimentConfig& c, std::size_t k,
                                     unsigned threads = 0) {
  ComparisonRun run;
  run.rig = run_batch(c, threads);
  run.errg = run_batch(errg_reference(c), threads);
  run.report = compare_results(run.rig, run.errg, k);
  return run;
}

// `kind,rank,ks,p_value,n1,n2,exact`.
inline void write_comparison_csv(std::ostream& os, const ComparisonReport& r) {
  os << "kind,rank,ks,p_value,n1,n2,exact\n";
  auto rows = [&](const char* kind, const std::vector<RankComparison>& v) {
    for (const auto& x : v) {
      os << kind << ',' << x.rank << ',' << detail::format_real(x.ks.statistic) << ','
         << detail::format_real(x.ks.p_value) << ',' << x.ks.n1 << ',' << x.ks.n2 << ','
         << (x.ks.exact ? "true" : "false") << '\n';
    }
  };
  rows("size", r.ranks);
  rows("edges_vs_half_size", r.edge_ranks);
}

}  // namespace rigsim

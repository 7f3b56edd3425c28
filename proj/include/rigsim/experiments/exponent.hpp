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

#include <ostream>
#include <utility>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/experiments/batch.hpp"
#include "rigsim/experiments/config.hpp"
#include "rigsim/scaling.hpp"
#include "rigsim/stats.hpp"

namespace rigsim {

struct ExponentPoint {
  Count n = 0;
  Count m = 0;
  Summary c1;  // raw |C_1|
};

struct ExponentRun {
  std::vector<ExponentPoint> points;
  ExponentFit fit;
};

// Median |C_1| along a grid of n (m follows alpha, or the grid is read as m
// with n = m^(1/alpha) when `grid_on_m`), then the log-log slope against n.
inline ExponentRun run_exponent(const ExperimentConfig& base, const std::vector<Count>& grid,
                                bool grid_on_m = false, unsigned threads = 0) {
  if (!base.alpha) throw ConfigError("exponent runs need alpha");
  ExponentRun run;
  std::vector<std::pair<double, double>> medians;
  for (Count g : grid) {
    ExperimentConfig c = base;
    c.top_k = 1;
    c.diagnostics = false;
    if (grid_on_m) {
      c.n = communities_for(g, 1.0 / *base.alpha);
      c.alpha.reset();
      c.m = g;
    } else {
      c.n = g;
    }
    const auto batch = run_batch(c, threads);
    std::vector<double> raw;
    for (const auto& r : batch.replicas) {
      if (r.ok) raw.push_back(static_cast<double>(r.top[0].size_u));
    }
    if (raw.empty()) throw ResourceError("every replica failed at grid point " + std::to_string(g));
    ExponentPoint pt{c.n, c.resolved_m(), summarize(raw)};
    medians.emplace_back(static_cast<double>(pt.n), pt.c1.median);
    run.points.push_back(pt);
  }
  run.fit = exponent_fit(medians);
  return run;
}

// `n,median_C1,q05,q95`.
inline void write_exponent_csv(std::ostream& os, const ExponentRun& run) {
  using detail::format_real;
  os << "n,median_C1,q05,q95\n";
  for (const auto& p : run.points) {
    os << p.n << ',' << format_real(p.c1.median) << ',' << format_real(p.c1.q05) << ','
       << format_real(p.c1.q95) << '\n';
  }
}

}  // namespace rigsim

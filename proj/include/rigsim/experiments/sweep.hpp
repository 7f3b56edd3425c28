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
#include <ostream>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/experiments/batch.hpp"
#include "rigsim/experiments/config.hpp"
#include "rigsim/stats.hpp"

namespace rigsim {

struct SweepRow {
  double mu = 0.0;
  Summary c1;  // raw |C_1|
  double ratio_n = 0.0;       // median / n
  double ratio_sqrt_nm = 0.0; // median / sqrt(n m)
  double ratio_log_n = 0.0;   // median / log n
  double iqr_over_median = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Indices i with median(i) < median(i - 1); reported, not fatal.
  std::vector<std::size_t> monotonic_violations;
};

// |C_1| across off-critical multipliers p = mu p_c. The base config's lambda
// or mu is replaced by each grid value; the master seed is shared.
inline SweepResult phase_sweep(const ExperimentConfig& base, const std::vector<double>& mu_grid,
                               unsigned threads = 0) {
  if (mu_grid.empty()) throw ConfigError("empty mu grid");
  SweepResult out;
  for (double mu : mu_grid) {
    ExperimentConfig c = base;
    c.lambda.reset();
    c.mu = mu;
    c.top_k = 1;
    c.diagnostics = false;
    const auto batch = run_batch(c, threads);
    std::vector<double> raw;
    for (const auto& r : batch.replicas) {
      if (r.ok) raw.push_back(static_cast<double>(
          c.model == Model::kBipartite ? r.top[0].vertices() : r.top[0].size_u));
    }
    if (raw.empty()) throw ResourceError("every replica failed at mu = " + detail::format_real(mu));
    SweepRow row;
    row.mu = mu;
    row.c1 = summarize(raw);
    const double n = static_cast<double>(c.n);
    const double m = static_cast<double>(c.resolved_m());
    row.ratio_n = row.c1.median / n;
    row.ratio_sqrt_nm = row.c1.median / std::sqrt(n * m);
    row.ratio_log_n = n > 1.0 ? row.c1.median / std::log(n) : 0.0;
    row.iqr_over_median = (row.c1.q75 - row.c1.q25) / row.c1.median;
    if (!out.rows.empty() && row.c1.median < out.rows.back().c1.median) {
      out.monotonic_violations.push_back(out.rows.size());
    }
    out.rows.push_back(row);
  }
  return out;
}

// `mu,replicas,median_C1,q25,q75,mean,ratio_n,ratio_sqrt_nm,ratio_log_n,iqr_over_median`.
inline void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  using detail::format_real;
  os << "mu,replicas,median_C1,q25,q75,mean,ratio_n,ratio_sqrt_nm,ratio_log_n,"
        "iqr_over_median\n";
  for (const auto& r : s.rows) {
    os << format_real(r.mu) << ',' << r.c1.count << ',' << format_real(r.c1.median) << ','
       << format_real(r.c1.q25) << ',' << format_real(r.c1.q75) << ','
       << format_real(r.c1.mean) << ',' << format_real(r.ratio_n) << ','
       << format_real(r.ratio_sqrt_nm) << ',' << format_real(r.ratio_log_n) << ','
       << format_real(r.iqr_over_median) << '\n';
  }
}

}  // namespace rigsim

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

// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any FAIL.
// Thresholds are fixed here and must not be tuned to the outcome.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rigsim/experiments/batch.hpp"
#include "rigsim/experiments/compare.hpp"
#include "rigsim/experiments/exponent.hpp"
#include "rigsim/experiments/sweep.hpp"

namespace {

using namespace rigsim;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// Traces seen by any criterion, for the R = A check.
std::uint64_t g_traces = 0, g_ra_steps = 0, g_ra_violations = 0;

void record_reflection(const ExplorationTrace& t) {
  ++g_traces;
  const auto r = reflect(std::span<const std::int64_t>(t.S));
  for (std::size_t k = 0; k < t.A.size(); ++k) {
    ++g_ra_steps;
    if (r[k] != t.A[k] || t.R[k] != t.A[k]) ++g_ra_violations;
  }
}

// 1. Excursion components against union-find and the BFS oracle.
Outcome oracle_equivalence() {
  SplitMix64 rng(0xacc1);
  const double factors[] = {0.2, 1.0, 5.0};
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const Count n = 1 + uniform_index(rng, 200);
    const Count m = 1 + uniform_index(rng, 200);
    const double p = std::min(1.0, factors[i % 3] * critical_p(n, m));
    const auto b = sample_bipartite(n, m, p, derive_seed(0xacc1, i));
    const auto bfs = oracle::bipartite_components(b, false);
    std::multiset<std::pair<std::uint64_t, std::uint64_t>> want_bip;
    for (const auto& [u, w, e, rig] : bfs) want_bip.emplace(u, w);
    const auto want_rig = oracle::rig_components(b);
    std::multiset<std::pair<std::uint64_t, std::uint64_t>> uf_bip, uf_rig;
    for (const auto& r : components_bipartite(b).records) uf_bip.emplace(r.size_u, r.size_w);
    for (const auto& r : components_rig(b).records) uf_rig.emplace(r.size_u, r.edges);
    mismatches += uf_bip != want_bip;
    mismatches += uf_rig != want_rig;
    for (Side side : {Side::kU, Side::kW}) {
      const auto t = explore(b, side, derive_seed(0xacc2, i));
      record_reflection(t);
      std::multiset<std::pair<std::uint64_t, std::uint64_t>> ex_bip, ex_rig;
      for (const auto& r : excursion_components(t, Model::kBipartite).records) {
        ex_bip.emplace(r.size_u, r.size_w);
      }
      for (const auto& r : excursion_components(t, Model::kRig).records) {
        ex_rig.emplace(r.size_u, r.edges);
      }
      mismatches += ex_bip != uf_bip;
      mismatches += ex_rig != uf_rig;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 200 instances, both start sides"};
}

// 3. Intersection graph and its components against all-pairs brute force.
Outcome intersection_correctness() {
  SplitMix64 rng(0xacc3);
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const Count n = 1 + uniform_index(rng, 60);
    const Count m = 1 + uniform_index(rng, 60);
    const double p = std::min(1.0, (0.2 + 0.2 * (i % 10)) * critical_p(n, m));
    const auto b = sample_bipartite(n, m, p, derive_seed(0xacc3, i));
    const auto g = intersection_graph(b);
    std::set<std::pair<VertexId, VertexId>> got;
    for (std::size_t v = 0; v < g.n(); ++v) {
      for (auto x : g.neighbors(static_cast<VertexId>(v))) {
        if (x > v) got.emplace(static_cast<VertexId>(v), x);
      }
    }
    mismatches += got != oracle::intersection_pairs(b);
    std::multiset<std::pair<std::uint64_t, std::uint64_t>> rig, simple;
    for (const auto& r : components_rig(b).records) rig.emplace(r.size_u, r.edges);
    for (const auto& r : components_simple(g).records) simple.emplace(r.size_u, r.edges);
    const auto want = oracle::rig_components(b);
    mismatches += rig != want;
    mismatches += simple != want;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 200 instances"};
}

// 4. |dB_1(v)| ~ Bin(m, p) on both sides.
Outcome degree_laws() {
  const Count n = 1000, m = 1000;
  const double p = critical_p(n, m);
  std::vector<double> du, dw;
  for (int r = 0; r < 1000; ++r) {
    const auto b = sample_bipartite(n, m, p, derive_seed(0xacc4, r));
    du.push_back(static_cast<double>(b.adj_u().degree(0)));
    dw.push_back(static_cast<double>(b.adj_w().degree(0)));
  }
  bool pass = true;
  std::ostringstream os;
  auto check = [&](const char* name, const std::vector<double>& d, double trials) {
    const double mu = trials * p, var = trials * p * (1 - p);
    const double k = static_cast<double>(d.size());
    const double mu4 = var * (1 + 3 * (trials - 2) * p * (1 - p));
    const double se_mean = std::sqrt(var / k);
    const double se_var = std::sqrt((mu4 - var * var * (k - 3) / (k - 1)) / k);
    const double zm = (mean(d) - mu) / se_mean, zv = (sample_variance(d) - var) / se_var;
    pass = pass && std::abs(zm) < 4 && std::abs(zv) < 4;
    os << name << " mean z=" << fmt(zm, 3) << " var z=" << fmt(zv, 3) << "; ";
  };
  check("U", du, static_cast<double>(m));
  check("W", dw, static_cast<double>(n));
  return {pass, os.str() + "bound 4 SE"};
}

std::vector<ExplorationTrace> alpha2_traces(Count n, double lambda, std::uint64_t seed, int replicas) {
  const Count m = n * n;
  const double p = window_p(n, m, lambda, Regime::kAlphaGt1);
  ExplorationOptions o;
  o.step_budget = static_cast<std::uint64_t>(std::ceil(2 * two_thirds_power(n))) + 1;
  std::vector<ExplorationTrace> out;
  for (int r = 0; r < replicas; ++r) {
    out.push_back(explore_on_the_fly(n, m, p, Side::kU, derive_seed(seed, r), o));
    record_reflection(out.back());
  }
  return out;
}

// 5 and 7: paired-seed comparisons of n = 10^3 against n = 10^4.
struct PairedWins {
  int drift = 0, opposite = 0, total = 0;
  std::string detail;
};

PairedWins paired_comparisons() {
  constexpr int kPairs = 20, kBatch = 50;
  PairedWins w;
  std::ostringstream os;
  for (double lambda : {-1.0, 0.0, 1.0}) {
    int d = 0, q = 0;
    for (int s = 0; s < kPairs; ++s) {
      const auto seed = derive_seed(0xacc5, static_cast<std::uint64_t>(s));
      const auto small = alpha2_traces(1000, lambda, seed, kBatch);
      const auto large = alpha2_traces(10000, lambda, seed, kBatch);
      d += drift_diagnostic(large, 10000, 1.0, lambda).summary.mean <
           drift_diagnostic(small, 1000, 1.0, lambda).summary.mean;
      // Q-concentration is reported at lambda = 0 only.
      if (lambda == 0.0) {
        q += opposite_concentration(large, 1.0).summary.mean <
             opposite_concentration(small, 1.0).summary.mean;
      }
    }
    os << "lambda=" << lambda << ": " << d << "/" << kPairs << "; ";
    w.drift += d;
    if (lambda == 0.0) w.opposite = q;
  }
  w.total = 3 * kPairs;
  w.detail = os.str();
  return w;
}

// No-depletion closed form at lambda = 0: deviation k^2/(2n), statistic 1/2.
bool synthetic_drift_exact() {
  for (Count n : {1000u, 8000u}) {
    const Count m = n * n;
    const double p = critical_p(n, m);
    const auto kmax = static_cast<std::size_t>(two_thirds_power(n)) + 2;
    ExplorationTrace t;
    t.start_side = Side::kU;
    t.start_size = n;
    t.opposite_size = m;
    t.p = p;
    const auto mom = conditional_moments(p, n, m, 0, 0);
    for (std::size_t k = 0; k <= kmax; ++k) {
      t.S.push_back(1);
      t.Q.push_back(0);
      t.cond_mean.push_back(k == 0 ? 0.0 : mom.mean);
      t.cond_var.push_back(k == 0 ? 0.0 : mom.variance);
    }
    t.termination = Termination::kBudget;
    const auto d = doob_decomposition(t);
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(two_thirds_power(nd)); ++k) {
      const double kd = static_cast<double>(k);
      if (std::abs(d.Y[k]) > 1e-9) return false;
      if (std::abs(std::abs(d.Y[k] + kd * kd / (2 * nd)) - kd * kd / (2 * nd)) > 1e-9) return false;
    }
    if (std::abs(drift_statistic(t, n, 1.0, 0.0) - 0.5) > 1e-9) return false;
  }
  return true;
}

// 6. Linear variance at n = 10^4.
Outcome variance_condition() {
  const auto traces = alpha2_traces(10000, 0.0, 0xacc6, 200);
  const double v = variance_diagnostic(traces, 10000, 1.0).summary.mean;
  return {v < 0.05, "mean |L/n^(2/3) - t| = " + fmt(v) + " (bound 0.05)"};
}

// 8. Explored-edge concentration from the community side.
Outcome edge_concentration_check() {
  const Count n = 250000, m = 500;
  const double p = critical_p(n, m);
  std::vector<ExplorationTrace> traces;
  for (int r = 0; r < 100; ++r) {
    const auto b = sample_bipartite(n, m, p, derive_seed(0xacc8, r));
    ExplorationOptions o;
    o.p = p;
    traces.push_back(explore(b, Side::kW, derive_seed(0xacc9, r), o));
    record_reflection(traces.back());
  }
  const double v = edge_concentration(traces, 1.0).summary.mean;
  return {v < 0.1, "mean sup statistic = " + fmt(v) + " (bound 0.1)"};
}

// 9. RIG against matched ERRG, ranks 1..3.
Outcome errg_match_check() {
  int good = 0;
  std::ostringstream os;
  for (double lambda : {-1.0, 0.0, 1.0}) {
    const auto c = ExperimentConfig::parse("n = 4000\nalpha = 2\nreplicas = 500\nmaster_seed = 9009\nlambda = " +
                                           detail::format_real(lambda) + "\n");
    const auto run = compare_to_errg(c, 3);
    os << "lambda=" << lambda << " p=";
    for (const auto& r : run.report.ranks) {
      good += r.ks.p_value > 0.01;
      os << fmt(r.ks.p_value, 3) << (r.rank < 3 ? "," : "; ");
    }
  }
  return {good >= 8, std::to_string(good) + "/9 cells with p > 0.01 (need 8); " + os.str()};
}

// 10. Edges against size of the largest component for alpha = 1/2.
Outcome edge_size_ratio() {
  const auto c = ExperimentConfig::parse(
      "n = 250000\nm = 500\nlambda = 0\nreplicas = 200\nmaster_seed = 1010\ntop_k = 1\n");
  const auto b = run_batch(c);
  std::vector<double> ratio;
  for (const auto& r : b.replicas) {
    if (r.ok && std::isfinite(r.rescaled_edges[0])) ratio.push_back(r.rescaled_edges[0] / r.rescaled_sizes[0]);
  }
  const double v = mean(ratio);
  const bool pass = ratio.size() == 200 && v >= 0.45 && v <= 0.55;
  return {pass, "mean ratio = " + fmt(v) + " over " + std::to_string(ratio.size()) +
                    " replicas (band [0.45, 0.55])"};
}

// 11. Log-log slope of median |C_1|.
Outcome critical_exponent() {
  const auto hi = run_exponent(
      ExperimentConfig::parse("n = 1000\nalpha = 2\nlambda = 0\nreplicas = 300\nmaster_seed = 1111\n"),
      {2000, 4000, 8000, 16000, 32000, 64000});
  const auto lo = run_exponent(
      ExperimentConfig::parse("n = 1000\nalpha = 0.5\nlambda = 0\nreplicas = 300\nmaster_seed = 1112\n"),
      {100, 200, 400, 800, 1600, 3200}, true);
  const bool pass = hi.fit.rho_hat >= 0.62 && hi.fit.rho_hat <= 0.72 && lo.fit.rho_hat >= 0.53 &&
                    lo.fit.rho_hat <= 0.64;
  return {pass, "alpha=2 rho_hat=" + fmt(hi.fit.rho_hat) + " (band [0.62, 0.72]); alpha=1/2 rho_hat=" +
                    fmt(lo.fit.rho_hat) + " (band [0.53, 0.64])"};
}

// 12. Sub- and supercritical behaviour of |C_1|.
Outcome phase_sweep_check() {
  const auto s = phase_sweep(
      ExperimentConfig::parse("n = 4000\nalpha = 2\nmu = 1\nreplicas = 300\nmaster_seed = 1212\n"),
      {0.5, 1.5});
  const auto& sub = s.rows[0];
  const auto& sup = s.rows[1];
  const bool pass = sub.ratio_log_n < 10 && sup.ratio_n > 0.1 && sup.iqr_over_median < 0.5;
  return {pass, "mu=0.5 median/log n=" + fmt(sub.ratio_log_n) + " (< 10); mu=1.5 median/n=" +
                    fmt(sup.ratio_n) + " (> 0.1), IQR/median=" + fmt(sup.iqr_over_median) + " (< 0.5)"};
}

// 13. Aggregate CSVs independent of the thread count.
Outcome determinism() {
  const char* configs[] = {
      "n = 2000\nalpha = 2\nlambda = 0\nreplicas = 60\ndiagnostics = true\nstep_budget_T = 1\n",
      "n = 20000\nm = 300\nlambda = 1\nreplicas = 60\ndiagnostics = true\nstart_side = W\n",
      "n = 500\nm = 700\nmu = 1.2\nreplicas = 60\nmodel = bipartite\n",
  };
  int identical = 0;
  for (const char* text : configs) {
    const auto c = ExperimentConfig::parse(text);
    const auto a = render([&](std::ostream& os) { write_summary_csv(os, run_batch(c, 1)); });
    const auto b = render([&](std::ostream& os) { write_summary_csv(os, run_batch(c, 2)); });
    const auto d = render([&](std::ostream& os) { write_summary_csv(os, run_batch(c, 3)); });
    identical += a == b && b == d && !a.empty();
  }
  return {identical == 3, std::to_string(identical) + "/3 configs byte-identical at 1, 2 and 3 threads"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << id << "] " << name << ": "
              << o.detail << " (" << fmt(secs, 3) << " s)" << std::endl;
  };

  report(1, "excursions equal union-find components", oracle_equivalence);
  report(3, "intersection graph equals brute force", intersection_correctness);
  report(4, "degree laws", degree_laws);

  PairedWins wins;
  double paired_secs = 0.0;
  {
    const auto t0 = std::chrono::steady_clock::now();
    wins = paired_comparisons();
    paired_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  report(5, "drift condition proxy", [&] {
    const bool synth = synthetic_drift_exact();
    const bool pass = synth && wins.drift * 10 >= wins.total * 9;
    return Outcome{pass, std::to_string(wins.drift) + "/" + std::to_string(wins.total) +
                             " paired wins (need 90%); " + wins.detail +
                             (synth ? "synthetic k^2/(2n) exact" : "synthetic check FAILED") +
                             "; pairs took " + fmt(paired_secs, 3) + " s"};
  });
  report(6, "linear variance condition", variance_condition);
  report(7, "opposite-set concentration", [&] {
    return Outcome{wins.opposite * 10 >= 20 * 9,
                   std::to_string(wins.opposite) + "/20 paired wins at lambda=0 (need 90%)"};
  });
  report(8, "explored-edge concentration", edge_concentration_check);
  report(9, "matched ERRG component law", errg_match_check);
  report(10, "edge/size ratio of C_1", edge_size_ratio);
  report(11, "critical exponent", critical_exponent);
  report(12, "phase sweep", phase_sweep_check);
  report(13, "thread-count determinism", determinism);
  report(2, "reflected walk equals active count", [] {
    return Outcome{g_ra_violations == 0 && g_traces > 0,
                   std::to_string(g_ra_violations) + " violations over " + std::to_string(g_ra_steps) +
                       " steps of " + std::to_string(g_traces) + " traces"};
  });
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}

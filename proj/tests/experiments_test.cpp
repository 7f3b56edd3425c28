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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sys/wait.h>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>

#include "json.hpp"
#include "oracles.hpp"
#include "rigsim/experiments/batch.hpp"
#include "rigsim/experiments/compare.hpp"
#include "rigsim/experiments/config.hpp"
#include "rigsim/experiments/exponent.hpp"
#include "rigsim/experiments/svg.hpp"
#include "rigsim/experiments/sweep.hpp"

namespace fs = std::filesystem;

namespace rigsim {
namespace {

boost::property_tree::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml(in, tree);
  return tree;
}

std::vector<std::string> polyline_points(const boost::property_tree::ptree& tree) {
  std::vector<std::string> out;
  for (const auto& [name, child] : tree.get_child("svg")) {
    if (name == "polyline") out.push_back(child.get<std::string>("<xmlattr>.points"));
  }
  return out;
}

TEST(Config, ParseAndRoundTrip) {
  const auto c = ExperimentConfig::parse(
      "# critical batch\n"
      "model = rig\n"
      "n = 4000   # individuals\n"
      "alpha = 2\n"
      "lambda = -1\n"
      "replicas = 20\n"
      "master_seed = 99\n"
      "start_side = W\n"
      "step_budget_T = 2.5\n");
  EXPECT_EQ(c.n, 4000u);
  EXPECT_EQ(c.resolved_m(), 16000000u);
  EXPECT_EQ(c.resolved_regime(), Regime::kAlphaGt1);
  EXPECT_EQ(c.start_side, Side::kW);
  EXPECT_DOUBLE_EQ(c.resolved_p(), window_p(4000, 16000000, -1.0, Regime::kAlphaGt1));
  EXPECT_EQ(c.step_budget(), static_cast<std::uint64_t>(std::ceil(2.5 * two_thirds_power(16000000.0))));
  EXPECT_EQ(c.resolved_engine(), Engine::kOnTheFly);
  const auto again = ExperimentConfig::parse(c.to_text());
  EXPECT_EQ(again.to_text(), c.to_text());
}

TEST(Config, ExactlyOneOf) {
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nm = 100\nalpha = 1\nlambda = 0\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nlambda = 0\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nm = 10\nlambda = 0\nmu = 1\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nm = 10\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nm = 10\nmu = 1\nreplicas = 0\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nm = 10\nmu = 1\nbogus = 3\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = ten\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("n = 100\nm = 1000\nlambda = -20\n"), DomainError);
  EXPECT_NO_THROW(ExperimentConfig::parse("model = errg\nn = 100\nlambda = 0\n"));
  EXPECT_THROW(ExperimentConfig::parse("model = errg\nn = 100\nm = 5\nlambda = 0\n"), ConfigError);
}

TEST(Batch, TinyReplicaMatchesHandRun) {
  const auto c = ExperimentConfig::parse("n = 10\nm = 10\nmu = 3\nreplicas = 1\nmaster_seed = 5\ntop_k = 20\n");
  const auto b = run_batch(c);
  ASSERT_EQ(b.replicas.size(), 1u);
  const auto seed = derive_seed(5, 0);
  EXPECT_EQ(b.replicas[0].seed, seed);
  const auto bip = sample_bipartite(10, 10, c.resolved_p(), derive_seed(seed, 0));
  const auto want = components_rig(bip);
  EXPECT_EQ(b.replicas[0].top.records, want.records);
}

TEST(Batch, DeterministicAcrossThreadCounts) {
  for (const char* text :
       {"n = 2000\nalpha = 2\nlambda = 0\nreplicas = 40\ndiagnostics = true\nstep_budget_T = 1\n",
        "n = 300\nm = 200\nlambda = 1\nreplicas = 40\ndiagnostics = true\nstart_side = W\n",
        "model = errg\nn = 1000\nlambda = 0\nreplicas = 40\n"}) {
    const auto c = ExperimentConfig::parse(text);
    const auto one = run_batch(c, 1);
    const auto four = run_batch(c, 4);
    auto csv = [](const BatchResult& b) {
      std::ostringstream os;
      write_summary_csv(os, b);
      return os.str();
    };
    EXPECT_EQ(csv(one), csv(four));
  }
}

TEST(Batch, ExcursionEngineMatchesGraphEngine) {
  // Components from a complete exploration equal union-find on the graph.
  for (int r = 0; r < 20; ++r) {
    const auto b = sample_bipartite(120, 80, 2 * critical_p(120, 80), derive_seed(51, r));
    for (Side side : {Side::kU, Side::kW}) {
      const auto t = explore(b, side, r);
      const auto rig = excursion_components(t, Model::kRig);
      const auto want = components_rig(b);
      ASSERT_EQ(rig.size(), want.size());
      std::multiset<std::pair<std::uint64_t, std::uint64_t>> a, c;
      for (const auto& x : rig.records) a.emplace(x.size_u, x.edges);
      for (const auto& x : want.records) c.emplace(x.size_u, x.edges);
      EXPECT_EQ(a, c);
      const auto bip = excursion_components(t, Model::kBipartite);
      std::multiset<std::pair<std::uint64_t, std::uint64_t>> d, e;
      for (const auto& x : bip.records) d.emplace(x.size_u, x.size_w);
      for (const auto& x : components_bipartite(b).records) e.emplace(x.size_u, x.size_w);
      EXPECT_EQ(d, e);
    }
  }
}

TEST(Batch, ResourceCapMarksReplicasIncomplete) {
  auto c = ExperimentConfig::parse("n = 1000\nm = 1000\nmu = 1\nreplicas = 3\nengine = graph\n");
  c.caps.max_expected_edges = 10;
  const auto b = run_batch(c);
  EXPECT_FALSE(b.complete());
  const auto j = manifest_json(b);
  EXPECT_EQ(j["status"], "incomplete");
  EXPECT_EQ(j["incomplete_replicas"].size(), 3u);
}

TEST(Batch, OutputsAndManifest) {
  const auto dir = fs::temp_directory_path() / "rigsim_batch_test";
  fs::remove_all(dir);
  const auto c = ExperimentConfig::parse("n = 500\nalpha = 1.5\nlambda = 0\nreplicas = 5\ndiagnostics = true\n");
  write_batch_outputs(run_batch(c), dir);
  for (const char* f : {"replicas.csv", "summary.csv", "diagnostics.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["status"], "complete");
  EXPECT_EQ(j["replicas"].size(), 5u);
  EXPECT_EQ(j["replicas"][2]["seed"].get<std::uint64_t>(), derive_seed(c.master_seed, 2));
  EXPECT_TRUE(j.contains("build"));
  EXPECT_EQ(j["config"]["n"], "500");
  std::ifstream rows(dir / "replicas.csv");
  std::string header;
  std::getline(rows, header);
  EXPECT_EQ(header, "replica,seed,rank,size_u,size_w,edges,surplus,rescaled_size,rescaled_edges");
  fs::remove_all(dir);
}

TEST(Compare, SelfComparison) {
  const auto c = ExperimentConfig::parse("n = 1000\nalpha = 2\nlambda = 0\nreplicas = 60\n");
  const auto b = run_batch(c);
  const auto r = compare_batches(b, b, 3);
  for (const auto& x : r.ranks) {
    EXPECT_DOUBLE_EQ(x.ks.statistic, 0.0);
    EXPECT_DOUBLE_EQ(x.ks.p_value, 1.0);
  }
  auto other = c;
  other.replicas = 30;
  EXPECT_THROW(compare_batches(b, run_batch(other), 3), ConfigError);
}

TEST(Compare, ReferenceUsesDrivingSide) {
  const auto gt = ExperimentConfig::parse("n = 4000\nalpha = 2\nlambda = 1\nreplicas = 10\n");
  EXPECT_EQ(errg_reference(gt).n, 4000u);
  EXPECT_DOUBLE_EQ(errg_reference(gt).resolved_p(), errg_match(4000, 1.0));
  const auto lt = ExperimentConfig::parse("n = 250000\nm = 500\nlambda = 0\nreplicas = 10\n");
  EXPECT_EQ(errg_reference(lt).n, 500u);
  EXPECT_THROW(errg_reference(ExperimentConfig::parse("n = 100\nm = 100\nmu = 1\n")), ConfigError);
}

TEST(Compare, RegimeTwoReportsEdges) {
  const auto c = ExperimentConfig::parse("n = 40000\nm = 200\nlambda = 0\nreplicas = 40\n");
  const auto run = compare_to_errg(c, 2);
  ASSERT_TRUE(run.report.edge_size_ratio.has_value());
  EXPECT_EQ(run.report.edge_ranks.size(), 2u);
  EXPECT_EQ(run.report.errg_size, 200u);
  for (const auto& x : run.report.ranks) {
    EXPECT_GE(x.ks.p_value, 0.0);
    EXPECT_LE(x.ks.p_value, 1.0);
  }
}

TEST(Sweep, ZeroMuGivesSingletons) {
  const auto c = ExperimentConfig::parse("n = 300\nalpha = 2\nmu = 1\nreplicas = 20\n");
  const auto s = phase_sweep(c, {0.0, 0.5, 1.0, 2.0});
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_DOUBLE_EQ(s.rows[0].c1.median, 1.0);
  EXPECT_DOUBLE_EQ(s.rows[0].c1.q95, 1.0);
  EXPECT_GT(s.rows[3].c1.median, s.rows[1].c1.median);
  std::ostringstream os;
  write_sweep_csv(os, s);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "mu,replicas,median_C1,q25,q75,mean,ratio_n,ratio_sqrt_nm,ratio_log_n,iqr_over_median");
}

TEST(Exponent, RunnerAndCsv) {
  const auto c = ExperimentConfig::parse("n = 100\nalpha = 2\nlambda = 0\nreplicas = 30\n");
  const auto run = run_exponent(c, {500, 1000, 2000, 4000});
  EXPECT_EQ(run.points.size(), 4u);
  EXPECT_GT(run.fit.rho_hat, 0.3);
  EXPECT_LT(run.fit.rho_hat, 1.0);
  std::ostringstream os;
  write_exponent_csv(os, run);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "n,median_C1,q05,q95");
  const auto onm = run_exponent(ExperimentConfig::parse("n = 100\nalpha = 0.5\nlambda = 0\nreplicas = 10\n"),
                                {50, 100, 200, 400}, true);
  EXPECT_EQ(onm.points[1].m, 100u);
  EXPECT_EQ(onm.points[1].n, 10000u);
}

TEST(Svg, EmptySeriesIsWellFormed) {
  const auto svg = walk_figure(WalkBand{}, 0.0);
  EXPECT_NO_THROW(parse_xml(svg));
  EXPECT_NO_THROW(parse_xml(SvgPlot("t", "x", "y").render()));
}

TEST(Svg, ParabolaOverlayCoincides) {
  WalkBand band;
  for (int i = 0; i <= 100; ++i) {
    const double s = 0.02 * i;
    band.grid.push_back(s);
    band.mean.push_back(2.0 * 0.5 * s - s * s / 2.0);
    band.q05.push_back(band.mean.back() - 0.1);
    band.q95.push_back(band.mean.back() + 0.1);
  }
  const auto lines = polyline_points(parse_xml(walk_figure(band, 0.5)));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], lines[1]);
}

TEST(Svg, BatchFiguresParse) {
  const auto c = ExperimentConfig::parse("n = 1000\nalpha = 2\nlambda = 0\nreplicas = 20\ndiagnostics = true\nstep_budget_T = 1\n");
  const auto run = compare_to_errg(c, 2);
  std::vector<std::vector<double>> walks;
  for (const auto& r : run.rig.replicas) walks.push_back(r.walk);
  EXPECT_NO_THROW(parse_xml(walk_figure(walk_band(walks, kWalkGridStep), 0.0)));
  EXPECT_NO_THROW(parse_xml(ks_figure(run.rig.sizes(1), run.errg.sizes(1), 1, "rig", "errg")));
  ExponentFit fit;
  fit.rho_hat = 0.6;
  fit.points = {{1, 1}, {2, 1.6}, {3, 2.2}, {4, 2.8}};
  EXPECT_NO_THROW(parse_xml(exponent_figure(fit)));
}

#ifdef RIGSIM_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(RIGSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodesAndDeterministicOutput) {
  const auto dir = fs::temp_directory_path() / "rigsim_cli_test";
  fs::remove_all(dir);
  const std::string base = " --n 400 --alpha 2 --lambda 0 --replicas 30 --seed 7 --out-dir ";
  EXPECT_EQ(run_cli("batch" + base + (dir / "a").string() + " --threads 1"), 0);
  EXPECT_EQ(run_cli("batch" + base + (dir / "b").string() + " --threads 3"), 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(dir / "a" / "summary.csv"), slurp(dir / "b" / "summary.csv"));
  EXPECT_FALSE(slurp(dir / "a" / "summary.csv").empty());
  EXPECT_EQ(run_cli("batch --n 400 --lambda 0"), 2);
  EXPECT_EQ(run_cli("batch --n 400 --m 100 --lambda 0 --mu 1"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("sample --n 100000 --m 100000 --mu 10000 --out-dir " + (dir / "c").string()), 3);
  EXPECT_EQ(run_cli("sample --n 50 --m 40 --mu 1 --out-dir " + (dir / "d").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "d" / "graph.txt"));
  EXPECT_EQ(run_cli("explore --n 200 --m 300 --lambda 0 --out-dir " + (dir / "e").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "e" / "trace.csv"));
  EXPECT_EQ(run_cli("components --n 200 --m 300 --lambda 0 --out-dir " + (dir / "f").string()), 0);
  // A clearly mismatched reference fails the assertion.
  EXPECT_EQ(run_cli("compare --n 2000 --alpha 2 --lambda 0 --replicas 20 --assert --level 0.999 "
                    "--out-dir " + (dir / "g").string()), 4);
  EXPECT_EQ(run_cli("figures --n 300 --alpha 2 --lambda 0 --replicas 10 --out-dir " +
                    (dir / "h").string()), 0);
  EXPECT_NO_THROW(parse_xml(slurp(dir / "h" / "walk.svg")));
  EXPECT_EQ(run_cli("sweep --n 200 --alpha 2 --mu 1 --replicas 5 --mu-grid 0,1 --out-dir " +
                    (dir / "i").string()), 0);
  EXPECT_EQ(run_cli("exponent --n 10 --alpha 2 --lambda 0 --replicas 5 --grid 100,200,400,800 "
                    "--out-dir " + (dir / "j").string()), 0);
  fs::remove_all(dir);
}
#endif

}  // namespace
}  // namespace rigsim

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

// rigsim: command-line front end for sampling, exploration and replica
// batches. Exit codes: 0 ok, 2 invalid config, 3 resource cap, 4 failed
// statistical assertion (compare --assert).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rigsim/components.hpp"
#include "rigsim/errors.hpp"
#include "rigsim/experiments/batch.hpp"
#include "rigsim/experiments/compare.hpp"
#include "rigsim/experiments/config.hpp"
#include "rigsim/experiments/exponent.hpp"
#include "rigsim/experiments/graph_io.hpp"
#include "rigsim/experiments/svg.hpp"
#include "rigsim/experiments/sweep.hpp"
#include "rigsim/exploration.hpp"
#include "rigsim/sampling.hpp"

namespace fs = std::filesystem;
using namespace rigsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitStatistical = 4;

// Options shared by every subcommand. Config keys map 1:1 to --key flags.
struct Common {
  std::string config_file;
  std::map<std::string, std::string> flags;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
  std::uint64_t replica = 0;
};

void add_config_flags(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config_file, "key = value config file");
  for (auto key : ExperimentConfig::keys()) {
    const std::string k(key);
    if (k == "threads" || k == "out_dir") continue;  // global flags
    sub->add_option_function<std::string>(
        "--" + k, [&common, k](const std::string& v) { common.flags[k] = v; },
        "config key " + k);
  }
}

ExperimentConfig resolve(const Common& common) {
  ExperimentConfig c;
  if (!common.config_file.empty()) {
    std::ifstream in(common.config_file);
    if (!in) throw ConfigError("cannot read config file " + common.config_file);
    c.apply(in);
  }
  for (const auto& [k, v] : common.flags) c.set(k, v);
  if (common.seed) c.master_seed = *common.seed;
  if (common.threads) c.threads = *common.threads;
  if (common.out_dir) c.out_dir = *common.out_dir;
  c.validate();
  return c;
}

std::string render_to_string(const auto& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

int cmd_sample(const Common& common) {
  const auto c = resolve(common);
  if (c.model == Model::kErrg) throw ConfigError("sample writes bipartite graphs only");
  const auto seed = derive_seed(derive_seed(c.master_seed, common.replica), 0);
  const auto bip = sample_bipartite(c.params(), seed, c.caps);
  const fs::path out = fs::path(c.out_dir) / "graph.txt";
  write_text_file(out, render_to_string([&](std::ostream& os) { write_graph_dump(os, bip); }));
  const auto stats = community_size_stats(bip);
  nlohmann::json j{{"n", bip.n()},
                   {"m", bip.m()},
                   {"p", c.resolved_p()},
                   {"edges", bip.edge_count()},
                   {"max_community", stats.max_w},
                   {"max_memberships", stats.max_u},
                   {"graph", out.string()}};
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_explore(const Common& common) {
  const auto c = resolve(common);
  if (c.model == Model::kErrg) throw ConfigError("explore needs a bipartite model");
  const auto seed = derive_seed(c.master_seed, common.replica);
  ExplorationOptions opts;
  opts.p = c.resolved_p();
  opts.step_budget = c.step_budget();
  ExplorationTrace trace;
  if (c.resolved_engine() == Engine::kGraph) {
    const auto bip = sample_bipartite(c.params(), derive_seed(seed, 0), c.caps);
    trace = explore(bip, c.start_side, derive_seed(seed, 1), opts);
  } else {
    trace = explore_on_the_fly(c.params(), c.start_side, derive_seed(seed, 1), opts);
  }
  const fs::path dir(c.out_dir);
  write_text_file(dir / "trace.csv",
                  render_to_string([&](std::ostream& os) { write_trace_csv(os, trace); }));
  const auto ex = excursions(trace);
  write_text_file(dir / "excursions.csv", render_to_string([&](std::ostream& os) {
                    write_excursions_csv(os, ex, trace.edges_tracked);
                  }));
  nlohmann::json j{{"steps", trace.steps()},
                   {"termination", std::string(to_string(trace.termination))},
                   {"excursions", ex.records.size()},
                   {"complete", ex.complete},
                   {"edges_exact", trace.edges_tracked && trace.edges_exact},
                   {"engine", std::string(to_string(c.resolved_engine()))}};
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_components(const Common& common) {
  const auto c = resolve(common);
  const auto seed = derive_seed(derive_seed(c.master_seed, common.replica), 0);
  ComponentList list;
  if (c.model == Model::kErrg) {
    list = components_simple(sample_errg(c.n, c.resolved_p(), seed, c.caps));
  } else {
    const auto bip = sample_bipartite(c.params(), seed, c.caps);
    list = c.model == Model::kRig ? components_rig(bip, c.caps) : components_bipartite(bip);
  }
  write_text_file(fs::path(c.out_dir) / "components.csv",
                  render_to_string([&](std::ostream& os) { write_components_csv(os, list); }));
  std::cout << "components: " << list.size() << ", largest: "
            << (list.size() ? (c.model == Model::kBipartite ? list[0].vertices() : list[0].size_u) : 0)
            << '\n';
  return kExitOk;
}

int cmd_batch(const Common& common) {
  const auto c = resolve(common);
  const auto b = run_batch(c);
  write_batch_outputs(b, c.out_dir);
  std::cout << render_to_string([&](std::ostream& os) { write_summary_csv(os, b); });
  if (!b.complete()) {
    std::cerr << "some replicas hit a resource cap; see manifest.json\n";
    return kExitResource;
  }
  return kExitOk;
}

nlohmann::json report_json(const ComparisonReport& r) {
  nlohmann::json ranks = nlohmann::json::array();
  for (const auto& x : r.ranks) {
    ranks.push_back({{"rank", x.rank}, {"ks", x.ks.statistic}, {"p_value", x.ks.p_value},
                     {"n1", x.ks.n1}, {"n2", x.ks.n2}, {"exact", x.ks.exact}});
  }
  nlohmann::json j{{"ranks", ranks}, {"errg_size", r.errg_size}, {"errg_p", r.errg_p},
                   {"matching", r.matching}};
  if (r.edge_size_ratio) j["edge_size_ratio_rank1"] = *r.edge_size_ratio;
  return j;
}

int cmd_compare(const Common& common, bool assert_mode, double level,
                std::optional<std::size_t> min_pass) {
  const auto c = resolve(common);
  const auto run = compare_to_errg(c, c.top_k);
  const fs::path dir(c.out_dir);
  write_batch_outputs(run.rig, dir, "rig_");
  write_batch_outputs(run.errg, dir, "errg_");
  write_text_file(dir / "comparison.csv", render_to_string([&](std::ostream& os) {
                    write_comparison_csv(os, run.report);
                  }));
  write_text_file(dir / "comparison.json", report_json(run.report).dump(2) + "\n");
  std::cout << render_to_string([&](std::ostream& os) { write_comparison_csv(os, run.report); });
  if (!run.rig.complete() || !run.errg.complete()) return kExitResource;
  if (assert_mode) {
    const auto need = min_pass.value_or(run.report.ranks.size());
    const auto got = run.report.passing(level);
    std::cout << got << " of " << run.report.ranks.size() << " ranks have p > " << level << '\n';
    if (got < need) return kExitStatistical;
  }
  return kExitOk;
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if constexpr (std::is_same_v<T, double>) out.push_back(detail::parse_real("grid", item));
    else out.push_back(detail::parse_u64("grid", item));
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

int cmd_sweep(const Common& common, const std::string& grid) {
  auto c = resolve(common);
  const auto s = phase_sweep(c, parse_list<double>(grid));
  const auto text = render_to_string([&](std::ostream& os) { write_sweep_csv(os, s); });
  write_text_file(fs::path(c.out_dir) / "sweep.csv", text);
  std::cout << text;
  for (auto i : s.monotonic_violations) {
    std::cout << "note: median decreases at mu = " << s.rows[i].mu << '\n';
  }
  return kExitOk;
}

nlohmann::json fit_json(const ExponentFit& f) {
  return {{"rho_hat", f.rho_hat}, {"stderr", f.slope_stderr}, {"r_squared", f.r_squared}};
}

int cmd_exponent(const Common& common, const std::string& grid, bool on_m) {
  const auto c = resolve(common);
  const auto run = run_exponent(c, parse_list<Count>(grid), on_m);
  const fs::path dir(c.out_dir);
  const auto text = render_to_string([&](std::ostream& os) { write_exponent_csv(os, run); });
  write_text_file(dir / "exponent.csv", text);
  write_text_file(dir / "exponent.json", fit_json(run.fit).dump(2) + "\n");
  std::cout << text << "rho_hat = " << run.fit.rho_hat << " (stderr " << run.fit.slope_stderr
            << ", R^2 " << run.fit.r_squared << ")\n";
  return kExitOk;
}

int cmd_figures(const Common& common, const std::string& grid, bool on_m) {
  auto c = resolve(common);
  const fs::path dir(c.out_dir);
  c.diagnostics = true;
  if (!c.step_budget_T || *c.step_budget_T < c.horizon) c.step_budget_T = c.horizon;
  const auto b = run_batch(c);
  std::vector<std::vector<double>> walks;
  for (const auto& r : b.replicas) {
    if (r.ok) walks.push_back(r.walk);
  }
  write_text_file(dir / "walk.svg",
                  walk_figure(walk_band(walks, kWalkGridStep), c.lambda.value_or(0.0)));
  std::cout << (dir / "walk.svg").string() << '\n';
  if (c.lambda) {
    c.diagnostics = false;
    const auto run = compare_to_errg(c, c.top_k);
    for (std::size_t k = 1; k <= c.top_k; ++k) {
      const auto path = dir / ("ks_rank" + std::to_string(k) + ".svg");
      write_text_file(path, ks_figure(run.rig.sizes(k), run.errg.sizes(k), k,
                                      std::string(to_string(c.model)), "errg"));
      std::cout << path.string() << '\n';
    }
  }
  if (!grid.empty()) {
    const auto run = run_exponent(c, parse_list<Count>(grid), on_m);
    write_text_file(dir / "exponent.svg", exponent_figure(run.fit));
    std::cout << (dir / "exponent.svg").string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigsim: random intersection graph simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t v) { common.seed = v; }, "master seed");
  app.add_option_function<unsigned>(
      "--threads", [&](unsigned v) { common.threads = v; }, "worker threads");
  app.add_option_function<std::string>(
      "--out-dir", [&](const std::string& v) { common.out_dir = v; }, "output directory");

  auto* sample = app.add_subcommand("sample", "sample K_p(n, m) and write a graph dump");
  auto* explore_cmd = app.add_subcommand("explore", "run one exploration, write trace CSVs");
  auto* components = app.add_subcommand("components", "components of one sampled graph");
  auto* batch = app.add_subcommand("batch", "run a replica batch");
  auto* compare = app.add_subcommand("compare", "compare a batch with its matched ERRG");
  auto* sweep = app.add_subcommand("sweep", "largest component across mu");
  auto* exponent = app.add_subcommand("exponent", "fit the largest-component exponent");
  auto* figures = app.add_subcommand("figures", "emit SVG figures");
  for (auto* sub : {sample, explore_cmd, components, batch, compare, sweep, exponent, figures}) {
    add_config_flags(sub, common);
  }
  for (auto* sub : {sample, explore_cmd, components}) {
    sub->add_option("--replica", common.replica, "replica index for the seed stream");
  }
  bool assert_mode = false;
  double level = 0.01;
  std::optional<std::size_t> min_pass;
  compare->add_flag("--assert", assert_mode, "exit 4 when too few ranks pass");
  compare->add_option("--level", level, "KS p-value threshold");
  compare->add_option_function<std::size_t>(
      "--min-pass", [&](std::size_t v) { min_pass = v; }, "ranks required to pass");
  std::string mu_grid = "0,0.5,0.75,1,1.25,1.5,2";
  sweep->add_option("--mu-grid", mu_grid, "comma-separated mu values");
  std::string grid;
  bool on_m = false;
  for (auto* sub : {exponent, figures}) {
    sub->add_option("--grid", grid, "comma-separated n values (or m with --grid-on-m)");
    sub->add_flag("--grid-on-m", on_m, "grid values are m; n = m^(1/alpha)");
  }
  exponent->callback([&] {
    if (grid.empty()) grid = "2000,4000,8000,16000,32000,64000";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sample) return cmd_sample(common);
    if (*explore_cmd) return cmd_explore(common);
    if (*components) return cmd_components(common);
    if (*batch) return cmd_batch(common);
    if (*compare) return cmd_compare(common, assert_mode, level, min_pass);
    if (*sweep) return cmd_sweep(common, mu_grid);
    if (*exponent) return cmd_exponent(common, grid, on_m);
    if (*figures) return cmd_figures(common, grid, on_m);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

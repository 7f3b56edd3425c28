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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rigsim/errors.hpp"
#include "rigsim/graph.hpp"
#include "rigsim/params.hpp"
#include "rigsim/sampling.hpp"
#include "rigsim/scaling.hpp"

namespace rigsim {

enum class Model { kRig, kBipartite, kErrg };

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::kRig: return "rig";
    case Model::kBipartite: return "bipartite";
    case Model::kErrg: return "errg";
  }
  return "unknown";
}

inline Model parse_model(std::string_view s) {
  if (s == "rig") return Model::kRig;
  if (s == "bipartite") return Model::kBipartite;
  if (s == "errg") return Model::kErrg;
  throw ConfigError("unknown model '" + std::string(s) + "'");
}

// graph: sample K_p(n, m) and run union-find.
// on_the_fly: reveal edges during the exploration; components are the
// excursions of a complete run. Needed once n * m no longer fits in memory.
enum class Engine { kAuto, kGraph, kOnTheFly };

inline std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::kAuto: return "auto";
    case Engine::kGraph: return "graph";
    case Engine::kOnTheFly: return "on_the_fly";
  }
  return "unknown";
}

inline Engine parse_engine(std::string_view s) {
  if (s == "auto") return Engine::kAuto;
  if (s == "graph") return Engine::kGraph;
  if (s == "on_the_fly") return Engine::kOnTheFly;
  throw ConfigError("unknown engine '" + std::string(s) + "'");
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

inline double parse_real(std::string_view key, std::string_view v) {
  std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key) + ": expected a real number, got '" + s + "'");
  }
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false");
}

// Shortest text that round-trips the double.
inline std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace detail

// One replica batch. Text form: `key = value` per line, `#` comments.
struct ExperimentConfig {
  Model model = Model::kRig;
  Count n = 1000;
  std::optional<Count> m;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<Regime> regime;  // inferred from n and m when unset
  Side start_side = Side::kU;
  Count replicas = 100;
  std::uint64_t master_seed = 1;
  // Exploration horizon in units of N_s^(2/3); unset runs to completion.
  std::optional<double> step_budget_T;
  double horizon = 1.0;  // T (and t) of the trace diagnostics
  bool diagnostics = false;
  Engine engine = Engine::kAuto;
  Count top_k = 3;
  unsigned threads = 1;
  std::string out_dir = "out";
  ResourceCaps caps;

  static std::vector<std::string_view> keys() {
    return {"model",       "n",           "m",           "alpha",
            "lambda",      "mu",          "regime",      "start_side",
            "replicas",    "master_seed", "step_budget_T", "horizon",
            "diagnostics", "engine",      "top_k",       "threads",
            "out_dir",     "max_expected_edges",         "max_pair_writes"};
  }

  void set(std::string_view key, std::string_view value) {
    const std::string v = detail::trim(value);
    if (key == "model") model = parse_model(v);
    else if (key == "n") n = detail::parse_u64(key, v);
    else if (key == "m") m = detail::parse_u64(key, v);
    else if (key == "alpha") alpha = detail::parse_real(key, v);
    else if (key == "lambda") lambda = detail::parse_real(key, v);
    else if (key == "mu") mu = detail::parse_real(key, v);
    else if (key == "regime") regime = parse_regime(v);
    else if (key == "start_side") start_side = parse_side(v);
    else if (key == "replicas") replicas = detail::parse_u64(key, v);
    else if (key == "master_seed") master_seed = detail::parse_u64(key, v);
    else if (key == "step_budget_T") step_budget_T = detail::parse_real(key, v);
    else if (key == "horizon") horizon = detail::parse_real(key, v);
    else if (key == "diagnostics") diagnostics = detail::parse_bool(key, v);
    else if (key == "engine") engine = parse_engine(v);
    else if (key == "top_k") top_k = detail::parse_u64(key, v);
    else if (key == "threads") {
      const auto t = detail::parse_u64(key, v);
      if (t > 1024) throw ConfigError("threads: at most 1024");
      threads = static_cast<unsigned>(t);
    } else if (key == "out_dir") out_dir = v;
    else if (key == "max_expected_edges") caps.max_expected_edges = detail::parse_real(key, v);
    else if (key == "max_pair_writes") caps.max_pair_writes = detail::parse_real(key, v);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
  }

  // Applies the lines of `in` on top of the current values.
  void apply(std::istream& in) {
    ExperimentConfig& c = *this;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      const std::string t = detail::trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      }
      try {
        c.set(detail::trim(t.substr(0, eq)), t.substr(eq + 1));
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  static ExperimentConfig parse(std::istream& in) {
    ExperimentConfig c;
    c.apply(in);
    c.validate();
    return c;
  }

  static ExperimentConfig parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
  }

  // Canonical text form; parse(to_text()) reproduces the config.
  std::string to_text() const {
    std::ostringstream os;
    auto line = [&](std::string_view k, const std::string& v) { os << k << " = " << v << '\n'; };
    line("model", std::string(to_string(model)));
    line("n", std::to_string(n));
    if (m) line("m", std::to_string(*m));
    if (alpha) line("alpha", detail::format_real(*alpha));
    if (lambda) line("lambda", detail::format_real(*lambda));
    if (mu) line("mu", detail::format_real(*mu));
    if (regime) line("regime", std::string(to_string(*regime)));
    line("start_side", std::string(to_string(start_side)));
    line("replicas", std::to_string(replicas));
    line("master_seed", std::to_string(master_seed));
    if (step_budget_T) line("step_budget_T", detail::format_real(*step_budget_T));
    line("horizon", detail::format_real(horizon));
    line("diagnostics", diagnostics ? "true" : "false");
    line("engine", std::string(to_string(engine)));
    line("top_k", std::to_string(top_k));
    line("threads", std::to_string(threads));
    line("out_dir", out_dir);
    line("max_expected_edges", detail::format_real(caps.max_expected_edges));
    line("max_pair_writes", detail::format_real(caps.max_pair_writes));
    return os.str();
  }

  void validate() const {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (replicas < 1) throw ConfigError("replicas must be >= 1");
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (lambda.has_value() == mu.has_value()) {
      throw ConfigError("exactly one of lambda and mu must be set");
    }
    if (mu && !(*mu >= 0.0)) throw ConfigError("mu must be >= 0");
    if (model == Model::kErrg) {
      if (m || alpha) throw ConfigError("errg takes no m or alpha");
    } else if (m.has_value() == alpha.has_value()) {
      throw ConfigError("exactly one of m and alpha must be set");
    }
    if (m && *m < 1) throw ConfigError("m must be >= 1");
    if (step_budget_T && !(*step_budget_T > 0.0)) {
      throw ConfigError("step_budget_T must be > 0");
    }
    if (!(horizon >= 0.0)) throw ConfigError("horizon must be >= 0");
    if (diagnostics && step_budget_T && *step_budget_T < horizon) {
      throw ConfigError("step_budget_T must cover the diagnostic horizon");
    }
    if (diagnostics && model == Model::kErrg) {
      throw ConfigError("trace diagnostics need a bipartite model");
    }
    if (!(caps.max_expected_edges > 0.0) || !(caps.max_pair_writes > 0.0)) {
      throw ConfigError("resource caps must be positive");
    }
    resolved_p();  // window errors surface here
  }

  Count resolved_m() const {
    if (model == Model::kErrg) return n;
    return m ? *m : communities_for(n, *alpha);
  }

  Regime resolved_regime() const {
    if (regime) return *regime;
    return resolved_m() >= n ? Regime::kAlphaGt1 : Regime::kAlphaLt1;
  }

  // Edge probability: the critical window for lambda, mu * p_c for mu.
  // For errg, (1 + 2 lambda n^(-1/3)) / n or mu / n.
  double resolved_p() const {
    if (model == Model::kErrg) {
      return lambda ? errg_match(n, *lambda)
                    : std::min(1.0, *mu / static_cast<double>(n));
    }
    const Count mm = resolved_m();
    if (lambda) return window_p(n, mm, *lambda, resolved_regime());
    return std::min(1.0, *mu * critical_p(n, mm));
  }

  Params params() const {
    Params p;
    p.n = n;
    p.m = resolved_m();
    p.alpha = alpha;
    p.p = resolved_p();
    p.lambda = lambda;
    p.mu = mu;
    return p;
  }

  Count start_size() const { return start_side == Side::kU ? n : resolved_m(); }

  // Exploration step budget: ceil(T N_s^(2/3)), or unbounded.
  std::uint64_t step_budget() const {
    if (!step_budget_T) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(
        std::ceil(*step_budget_T * two_thirds_power(static_cast<double>(start_size()))));
  }

  // Engine actually used: the stored graph while it stays small.
  Engine resolved_engine() const {
    if (engine != Engine::kAuto || model == Model::kErrg) return engine;
    const double nm = static_cast<double>(n) * static_cast<double>(resolved_m());
    const double expected_edges = nm * resolved_p();
    const double sides = static_cast<double>(n) + static_cast<double>(resolved_m());
    return sides <= 5e6 && expected_edges <= caps.max_expected_edges ? Engine::kGraph
                                                                      : Engine::kOnTheFly;
  }
};

}  // namespace rigsim

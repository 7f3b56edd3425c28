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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rigsim/components.hpp"
#include "rigsim/errors.hpp"
#include "rigsim/exploration.hpp"
#include "rigsim/params.hpp"
#include "rigsim/stats.hpp"

namespace rigsim {

// Time index floor(x) for x = s * size^(2/3). Products such as 0.29 * 100
// land a few ulps below the integer they represent, so x is snapped up by
// 1e-9 before flooring.
inline std::uint64_t time_index(double x) {
  if (x < 0.0) throw ConfigError("negative time");
  return static_cast<std::uint64_t>(std::floor(x + 1e-9));
}

// size^(2/3) and size^(1/3) via cbrt, exact for perfect cubes.
inline double two_thirds_power(double size) {
  const double c = std::cbrt(size);
  return c * c;
}

// Grid 0, ds, 2 ds, ... up to T inclusive.
inline std::vector<double> make_grid(double horizon, double ds) {
  if (!(ds > 0.0) || horizon < 0.0) throw ConfigError("bad grid");
  const auto count = static_cast<std::size_t>(std::floor(horizon / ds + 1e-9));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i) grid[i] = static_cast<double>(i) * ds;
  return grid;
}

// value(s) = value_factor * path[floor(s * time_factor)].
struct ScalingLaw {
  std::string description;
  double time_factor = 1.0;
  double value_factor = 1.0;
};

struct RescaledSeries {
  std::vector<double> grid;
  std::vector<double> values;
  ScalingLaw law;

  // Recovers the raw path values on the grid.
  std::vector<double> unscaled() const {
    std::vector<double> raw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) raw[i] = values[i] / law.value_factor;
    return raw;
  }
};

template <class T>
RescaledSeries rescale_path(std::span<const T> path, const ScalingLaw& law,
                            double horizon, double ds) {
  RescaledSeries out;
  out.law = law;
  out.grid = make_grid(horizon, ds);
  out.values.reserve(out.grid.size());
  for (double s : out.grid) {
    const auto k = time_index(s * law.time_factor);
    if (k >= path.size()) {
      throw ConfigError("trace too short: needs step " + std::to_string(k) +
                        ", has " + std::to_string(path.size() - 1));
    }
    out.values.push_back(law.value_factor * static_cast<double>(path[k]));
  }
  return out;
}

// n^(-1/3) S(floor(s n^(2/3))) on s = 0, ds, ..., T.
inline RescaledSeries rescale_walk(const ExplorationTrace& trace, Count n,
                                   double horizon, double ds = 0.01) {
  const double size = static_cast<double>(n);
  ScalingLaw law{"n^(-1/3) S(floor(s n^(2/3)))", two_thirds_power(size),
                 1.0 / std::cbrt(size)};
  return rescale_path(std::span<const std::int64_t>(trace.S), law, horizon, ds);
}

// Continuous reflection r(s) = x(s) - min_{r <= s} x(r).
inline RescaledSeries reflect(const RescaledSeries& series) {
  RescaledSeries out = series;
  out.law.description = "reflected " + series.law.description;
  double running_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    running_min = std::min(running_min, series.values[i]);
    out.values[i] = series.values[i] - running_min;
  }
  return out;
}

// Discrete reflection R[k] = S[k] - min_{j<k} S[j] + 1, with R[0] = S[0].
inline std::vector<std::int64_t> reflect(std::span<const std::int64_t> walk) {
  std::vector<std::int64_t> r(walk.size());
  std::int64_t running_min = std::numeric_limits<std::int64_t>::max();
  for (std::size_t k = 0; k < walk.size(); ++k) {
    r[k] = k == 0 ? walk[0] : walk[k] - running_min + 1;
    running_min = std::min(running_min, walk[k]);
  }
  return r;
}

// Per-replica values of a diagnostic and their aggregate.
struct Diagnostic {
  std::vector<double> per_replica;
  Summary summary;
};

inline Diagnostic make_diagnostic(std::vector<double> values) {
  Diagnostic d;
  d.summary = summarize(values);
  d.per_replica = std::move(values);
  return d;
}

namespace detail {

// Last usable index for horizon steps; a finished trace simply stops.
inline std::size_t horizon_end(const ExplorationTrace& t, std::uint64_t k_max) {
  if (k_max <= t.steps()) return k_max;
  if (t.termination == Termination::kBudget) {
    throw ConfigError("trace too short: budget-truncated before step " +
                      std::to_string(k_max));
  }
  return t.steps();
}

}  // namespace detail

// n^(-1/3) sup_{k <= T n^(2/3)} |Y(k) - 2 lambda k n^(-1/3) + k^2 / (2n)|.
inline double drift_statistic(const ExplorationTrace& trace, Count n, double horizon,
                              double lambda) {
  const double size = static_cast<double>(n);
  const double cube = std::cbrt(size);
  const auto end = detail::horizon_end(trace, time_index(horizon * cube * cube));
  const auto dd = doob_decomposition(trace);
  double sup = 0.0;
  for (std::size_t k = 0; k <= end; ++k) {
    const double kd = static_cast<double>(k);
    const double dev = dd.Y[k] - 2.0 * lambda * kd / cube + kd * kd / (2.0 * size);
    sup = std::max(sup, std::abs(dev));
  }
  return sup / cube;
}

inline Diagnostic drift_diagnostic(std::span<const ExplorationTrace> traces, Count n,
                                   double horizon, double lambda) {
  std::vector<double> v;
  v.reserve(traces.size());
  for (const auto& t : traces) v.push_back(drift_statistic(t, n, horizon, lambda));
  return make_diagnostic(std::move(v));
}

// |L(floor(t n^(2/3))) / n^(2/3) - t|.
inline double variance_statistic(const ExplorationTrace& trace, Count n, double t) {
  const double scale = two_thirds_power(static_cast<double>(n));
  const auto k = detail::horizon_end(trace, time_index(t * scale));
  const auto dd = doob_decomposition(trace);
  return std::abs(dd.L[k] / scale - t);
}

inline Diagnostic variance_diagnostic(std::span<const ExplorationTrace> traces,
                                      Count n, double t) {
  std::vector<double> v;
  v.reserve(traces.size());
  for (const auto& tr : traces) v.push_back(variance_statistic(tr, n, t));
  return make_diagnostic(std::move(v));
}

namespace detail {

// sup over the grid of |value_factor * path(floor(s time_factor)) - slope s|,
// holding the final value once a finished trace has stopped.
inline double sup_linear_deviation(const ExplorationTrace& trace,
                                   std::span<const std::int64_t> path,
                                   double time_factor, double value_factor,
                                   double slope, double horizon, double ds) {
  double sup = 0.0;
  for (double s : make_grid(horizon, ds)) {
    const auto k = horizon_end(trace, time_index(s * time_factor));
    sup = std::max(sup, std::abs(value_factor * static_cast<double>(path[k]) - slope * s));
  }
  return sup;
}

}  // namespace detail

// sup_{t <= T} |Q(t N_s^(2/3)) / (N_s^(1/6) N_o^(1/2)) - t|, with N_s the
// start side (n when exploring from U).
inline double opposite_statistic(const ExplorationTrace& trace, double horizon,
                                 double ds = 0.01) {
  const double ns = static_cast<double>(trace.start_size);
  const double no = static_cast<double>(trace.opposite_size);
  const double norm = std::sqrt(std::cbrt(ns)) * std::sqrt(no);
  return detail::sup_linear_deviation(trace, trace.Q, two_thirds_power(ns), 1.0 / norm,
                                      1.0, horizon, ds);
}

inline Diagnostic opposite_concentration(std::span<const ExplorationTrace> traces,
                                         double horizon, double ds = 0.01) {
  std::vector<double> v;
  v.reserve(traces.size());
  for (const auto& t : traces) v.push_back(opposite_statistic(t, horizon, ds));
  return make_diagnostic(std::move(v));
}

// sup_{t <= T} |E(t N_s^(2/3)) N_s^(1/3) / N_o - t/2|, exploring from the
// community side (N_s = m, N_o = n).
inline double edge_statistic(const ExplorationTrace& trace, double horizon,
                             double ds = 0.01) {
  if (!trace.edges_tracked) throw ConfigError("trace does not track edges");
  const double ns = static_cast<double>(trace.start_size);
  const double no = static_cast<double>(trace.opposite_size);
  return detail::sup_linear_deviation(trace, trace.E, two_thirds_power(ns),
                                      std::cbrt(ns) / no, 0.5, horizon, ds);
}

inline Diagnostic edge_concentration(std::span<const ExplorationTrace> traces,
                                     double horizon, double ds = 0.01) {
  std::vector<double> v;
  v.reserve(traces.size());
  for (const auto& t : traces) v.push_back(edge_statistic(t, horizon, ds));
  return make_diagnostic(std::move(v));
}

// Scaling law for ranked component sizes.
enum class ComponentRegime {
  kRigI,       // alpha > 1: n^(-2/3) |C_i|
  kRigII,      // alpha < 1: n^(-1/2-alpha/6) |C_i|, n^(-1+alpha/3) |E(C_i)|
  kBipartite,  // alpha > 1: n^(-1/6-alpha/2) |C_i| on U and W together
};

inline std::string_view to_string(ComponentRegime r) {
  switch (r) {
    case ComponentRegime::kRigI: return "rig_i";
    case ComponentRegime::kRigII: return "rig_ii";
    case ComponentRegime::kBipartite: return "bipartite";
  }
  return "unknown";
}

inline ComponentRegime parse_component_regime(std::string_view s) {
  if (s == "rig_i") return ComponentRegime::kRigI;
  if (s == "rig_ii") return ComponentRegime::kRigII;
  if (s == "bipartite") return ComponentRegime::kBipartite;
  throw ConfigError("unknown component regime '" + std::string(s) + "'");
}

// Exponents (on n) of the size and edge rescalings, using the realized
// alpha = log m / log n.
struct ComponentExponents {
  double alpha = 0.0;
  double size = 0.0;
  double edges = 0.0;
};

inline ComponentExponents component_exponents(Count n, Count m, ComponentRegime regime) {
  ComponentExponents e;
  e.alpha = realized_alpha(n, m);
  switch (regime) {
    case ComponentRegime::kRigI:
      if (!(e.alpha > 1.0)) throw DomainError("rig_i needs alpha > 1");
      e.size = 2.0 / 3.0;
      break;
    case ComponentRegime::kRigII:
      if (!(e.alpha < 1.0)) throw DomainError("rig_ii needs alpha < 1");
      e.size = 0.5 + e.alpha / 6.0;
      e.edges = 1.0 - e.alpha / 3.0;
      break;
    case ComponentRegime::kBipartite:
      if (!(e.alpha > 1.0)) throw DomainError("bipartite needs alpha > 1");
      e.size = 1.0 / 6.0 + e.alpha / 2.0;
      break;
  }
  return e;
}

struct RescaledComponents {
  std::vector<double> sizes;
  std::vector<double> edges;  // rig_ii only
};

inline RescaledComponents rescaled_components(const ComponentList& list, Count n,
                                              Count m, ComponentRegime regime) {
  const auto e = component_exponents(n, m, regime);
  const double nd = static_cast<double>(n);
  const double size_factor = std::pow(nd, -e.size);
  RescaledComponents out;
  for (const auto& r : list.records) {
    const double size = regime == ComponentRegime::kBipartite
                            ? static_cast<double>(r.vertices())
                            : static_cast<double>(r.size_u);
    out.sizes.push_back(size_factor * size);
    if (regime == ComponentRegime::kRigII) {
      out.edges.push_back(std::pow(nd, -e.edges) * static_cast<double>(r.edges));
    }
  }
  return out;
}

struct ExponentFit {
  double rho_hat = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log n, log median |C_1|)
};

// OLS slope of log median |C_1| against log n.
inline ExponentFit exponent_fit(std::span<const std::pair<double, double>> medians) {
  if (medians.size() < 4) throw ConfigError("exponent fit needs >= 4 grid points");
  ExponentFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    const auto [n, c1] = medians[i];
    if (!(n > 0.0) || !(c1 > 0.0)) throw ConfigError("exponent fit needs positive values");
    if (i > 0 && !(n > medians[i - 1].first)) throw ConfigError("n grid must increase");
    x.push_back(std::log(n));
    y.push_back(std::log(c1));
    fit.points.emplace_back(x.back(), y.back());
  }
  const auto ls = least_squares(x, y);
  fit.rho_hat = ls.slope;
  fit.slope_stderr = ls.slope_stderr;
  fit.r_squared = ls.r_squared;
  return fit;
}

// CSV `s,value`.
inline void write_series_csv(std::ostream& os, const RescaledSeries& series) {
  os << "s,value\n";
  const auto old = os.precision(12);
  for (std::size_t i = 0; i < series.grid.size(); ++i) {
    os << series.grid[i] << ',' << series.values[i] << '\n';
  }
  os.precision(old);
}

}  // namespace rigsim

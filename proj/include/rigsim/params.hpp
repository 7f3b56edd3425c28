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
#include <optional>
#include <string>
#include <string_view>

#include "rigsim/errors.hpp"

namespace rigsim {

using Count = std::uint64_t;

// Which side drives the critical window: individuals (m >> n) or
// communities (n >> m).
enum class Regime { kAlphaGt1, kAlphaLt1 };

inline std::string_view to_string(Regime r) {
  return r == Regime::kAlphaGt1 ? "alpha_gt_1" : "alpha_lt_1";
}

inline Regime parse_regime(std::string_view s) {
  if (s == "alpha_gt_1") return Regime::kAlphaGt1;
  if (s == "alpha_lt_1") return Regime::kAlphaLt1;
  throw ConfigError("unknown regime '" + std::string(s) + "'");
}

// Model parameters. `p` is always resolved; alpha, lambda and mu record how
// it was obtained.
struct Params {
  Count n = 1;
  Count m = 1;
  std::optional<double> alpha;
  double p = 0.0;
  std::optional<double> lambda;
  std::optional<double> mu;

  void validate() const {
    if (n < 1 || m < 1) throw ConfigError("n and m must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  }
};

// p_c = (n m)^(-1/2).
inline double critical_p(Count n, Count m) {
  return 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(m));
}

// m = round(n^alpha). The realized exponent is reported by realized_alpha.
inline Count communities_for(Count n, double alpha) {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  const double target = std::pow(static_cast<double>(n), alpha);
  if (!(target < 9.0e18)) throw ConfigError("n^alpha overflows");
  const auto m = static_cast<Count>(std::llround(target));
  return m < 1 ? 1 : m;
}

// log m / log n; the exponent actually realized after rounding m.
inline double realized_alpha(Count n, Count m) {
  if (n < 2) throw DomainError("realized alpha needs n >= 2");
  return std::log(static_cast<double>(m)) / std::log(static_cast<double>(n));
}

// Window scale factor 1 + lambda * size^(-1/3), with size = n for
// alpha_gt_1 and m for alpha_lt_1.
inline double window_factor(Count n, Count m, double lambda, Regime regime) {
  const double size = static_cast<double>(regime == Regime::kAlphaGt1 ? n : m);
  const double factor = 1.0 + lambda / std::cbrt(size);
  if (factor < 0.0) {
    throw DomainError("lambda is outside the critical window (1 + lambda * "
                      "size^(-1/3) < 0)");
  }
  return factor;
}

// p = p_c (1 + lambda scale^(-1/3)), clamped to [0, 1].
inline double window_p(Count n, Count m, double lambda, Regime regime) {
  const double p = critical_p(n, m) * window_factor(n, m, lambda, regime);
  return std::min(1.0, std::max(0.0, p));
}

inline double window_p(const Params& params, Regime regime) {
  if (!params.lambda) throw ConfigError("window_p needs lambda");
  return window_p(params.n, params.m, *params.lambda, regime);
}

// Edge probability of the Erdos-Renyi graph sharing the limit law:
// (1 + 2 lambda n^(-1/3)) / n, clamped to [0, 1].
inline double errg_match(Count n, double lambda) {
  if (n < 1) throw ConfigError("n must be >= 1");
  const double factor = 1.0 + 2.0 * lambda / std::cbrt(static_cast<double>(n));
  if (factor < 0.0) {
    throw DomainError("lambda is outside the critical window (1 + 2 lambda "
                      "n^(-1/3) < 0)");
  }
  return std::min(1.0, factor / static_cast<double>(n));
}

}  // namespace rigsim

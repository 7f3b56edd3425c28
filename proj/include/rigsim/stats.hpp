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
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "rigsim/errors.hpp"

namespace rigsim {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

// Unbiased sample variance; 0 for fewer than two values.
inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  CompensatedSum s;
  for (double x : xs) s.add((x - mu) * (x - mu));
  return s.value() / static_cast<double>(xs.size() - 1);
}

// Linear-interpolation quantile of already sorted data (Hyndman-Fan type 7).
inline double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ConfigError("quantile of empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
};

inline Summary summarize(std::vector<double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  s.mean = mean(xs);
  s.median = sorted_quantile(xs, 0.5);
  s.q05 = sorted_quantile(xs, 0.05);
  s.q25 = sorted_quantile(xs, 0.25);
  s.q75 = sorted_quantile(xs, 0.75);
  s.q95 = sorted_quantile(xs, 0.95);
  return s;
}

// Survival function of the Kolmogorov distribution, P(K > x).
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Small-x form: P(K <= x) = sqrt(2 pi)/x sum exp(-(2j-1)^2 pi^2 / (8 x^2)).
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double k = 2.0 * j - 1.0;
      cdf += std::exp(-k * k * pi2 / (8.0 * x * x));
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Exact P(D < d) for the two-sample statistic without ties, by counting
// monotone lattice paths that stay inside the band (Hodges' recursion).
inline double smirnov_exact_cdf(double d, std::size_t n1, std::size_t n2) {
  if (n1 > n2) std::swap(n1, n2);
  const double md = static_cast<double>(n1);
  const double nd = static_cast<double>(n2);
  const double q = (0.5 + std::floor(d * md * nd - 1e-7)) / (md * nd);
  std::vector<double> u(n2 + 1);
  for (std::size_t j = 0; j <= n2; ++j) {
    u[j] = (static_cast<double>(j) / nd > q) ? 0.0 : 1.0;
  }
  for (std::size_t i = 1; i <= n1; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(i + n2);
    const double x = static_cast<double>(i) / md;
    u[0] = (x > q) ? 0.0 : w * u[0];
    for (std::size_t j = 1; j <= n2; ++j) {
      u[j] = (std::abs(x - static_cast<double>(j) / nd) > q) ? 0.0
                                                               : w * u[j] + u[j - 1];
    }
  }
  return u[n2];
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool exact = false;
};

// Two-sample Kolmogorov-Smirnov test. The p-value is exact when the smaller
// sample has fewer than 50 values and asymptotic otherwise, with effective
// size n1 n2 / (n1 + n2) and Stephens' finite-size correction.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("KS test needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  KsResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  r.statistic = d;
  if (std::min(r.n1, r.n2) < 50) {
    r.exact = true;
    r.p_value = std::clamp(1.0 - smirnov_exact_cdf(d, r.n1, r.n2), 0.0, 1.0);
  } else {
    const double ne = std::sqrt(na * nb / (na + nb));
    r.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  }
  return r;
}

// Ordinary least squares y = a + b x.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw ConfigError("least squares needs >= 3 paired points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  if (!(sxx.value() > 0.0)) throw ConfigError("degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  CompensatedSum ssr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    ssr.add(e * e);
  }
  const double dof = static_cast<double>(x.size() - 2);
  fit.slope_stderr = std::sqrt(std::max(0.0, ssr.value()) / dof / sxx.value());
  fit.r_squared = syy.value() > 0.0 ? 1.0 - ssr.value() / syy.value() : 1.0;
  return fit;
}

}  // namespace rigsim

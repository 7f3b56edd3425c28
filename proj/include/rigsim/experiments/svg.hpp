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
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rigsim/experiments/batch.hpp"
#include "rigsim/scaling.hpp"
#include "rigsim/stats.hpp"

namespace rigsim {

// Small static SVG plotter: polylines, point sets and shaded bands on linear
// axes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void line(std::vector<double> x, std::vector<double> y, std::string color,
            std::string label, bool dashed = false) {
    items_.push_back({Kind::kLine, std::move(x), std::move(y), {}, std::move(color),
                      std::move(label), dashed});
  }
  void points(std::vector<double> x, std::vector<double> y, std::string color,
              std::string label) {
    items_.push_back({Kind::kPoints, std::move(x), std::move(y), {}, std::move(color),
                      std::move(label), false});
  }
  void band(std::vector<double> x, std::vector<double> lo, std::vector<double> hi,
            std::string color, std::string label) {
    items_.push_back({Kind::kBand, std::move(x), std::move(lo), std::move(hi),
                      std::move(color), std::move(label), false});
  }
  // Step function through sorted values (an empirical CDF).
  void ecdf(std::vector<double> sample, std::string color, std::string label) {
    std::sort(sample.begin(), sample.end());
    std::vector<double> x, y;
    const double n = static_cast<double>(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      x.push_back(sample[i]);
      y.push_back(static_cast<double>(i) / n);
      x.push_back(sample[i]);
      y.push_back(static_cast<double>(i + 1) / n);
    }
    line(std::move(x), std::move(y), std::move(color), std::move(label));
  }

  std::string render() const {
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (const auto& it : items_) {
      for (double v : it.x) grow(x0, x1, v);
      for (double v : it.y) grow(y0, y1, v);
      for (double v : it.y2) grow(y0, y1, v);
    }
    if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0;
    if (!(y0 <= y1)) y0 = 0.0, y1 = 1.0;
    if (x0 == x1) x0 -= 0.5, x1 += 0.5;
    if (y0 == y1) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * kPlotW; };
    auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * kPlotH; };

    std::ostringstream os;
    os.precision(6);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title_) << "</text>\n"
       << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW
       << "\" height=\"" << kPlotH << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double fx = x0 + (x1 - x0) * i / 4.0;
      const double fy = y0 + (y1 - y0) * i / 4.0;
      os << "<text x=\"" << px(fx) << "\" y=\"" << kTop + kPlotH + 16
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
         << fx << "</text>\n"
         << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(fy) + 4
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fy
         << "</text>\n";
    }
    os << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 8
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << escape(xlabel_) << "</text>\n"
       << "<text x=\"16\" y=\"" << kTop + kPlotH / 2 << "\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
       << kTop + kPlotH / 2 << ")\">" << escape(ylabel_) << "</text>\n";

    int legend = 0;
    for (const auto& it : items_) {
      switch (it.kind) {
        case Kind::kBand: {
          if (it.x.empty()) break;
          os << "<polygon fill=\"" << it.color << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
          for (std::size_t i = 0; i < it.x.size(); ++i) os << px(it.x[i]) << ',' << py(it.y[i]) << ' ';
          for (std::size_t i = it.x.size(); i-- > 0;) os << px(it.x[i]) << ',' << py(it.y2[i]) << ' ';
          os << "\"/>\n";
          break;
        }
        case Kind::kLine: {
          if (it.x.empty()) break;
          os << "<polyline fill=\"none\" stroke=\"" << it.color << "\" stroke-width=\"1.5\"";
          if (it.dashed) os << " stroke-dasharray=\"6 4\"";
          os << " points=\"";
          for (std::size_t i = 0; i < it.x.size(); ++i) os << px(it.x[i]) << ',' << py(it.y[i]) << ' ';
          os << "\"/>\n";
          break;
        }
        case Kind::kPoints:
          for (std::size_t i = 0; i < it.x.size(); ++i) {
            os << "<circle cx=\"" << px(it.x[i]) << "\" cy=\"" << py(it.y[i])
               << "\" r=\"3\" fill=\"" << it.color << "\"/>\n";
          }
          break;
      }
      if (!it.label.empty()) {
        const double ly = kTop + 14 + 16 * legend++;
        os << "<rect x=\"" << kLeft + 10 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"10\" fill=\""
           << it.color << "\"/>\n<text x=\"" << kLeft + 28 << "\" y=\"" << ly
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(it.label) << "</text>\n";
      }
    }
    os << "</svg>\n";
    return os.str();
  }

 private:
  enum class Kind { kLine, kPoints, kBand };
  struct Item {
    Kind kind;
    std::vector<double> x, y, y2;
    std::string color, label;
    bool dashed;
  };
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr int kWidth = 720, kHeight = 480, kLeft = 70, kTop = 40;
  static constexpr int kPlotW = 620, kPlotH = 390;

  static void grow(double& lo, double& hi, double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
      switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
      }
    }
    return out;
  }

  std::string title_, xlabel_, ylabel_;
  std::vector<Item> items_;
};

// Pointwise mean and 5%-95% band of rescaled walks sharing one grid.
struct WalkBand {
  std::vector<double> grid, mean, q05, q95;
};

inline WalkBand walk_band(const std::vector<std::vector<double>>& walks, double ds) {
  WalkBand b;
  if (walks.empty()) return b;
  const auto len = walks.front().size();
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> col;
    for (const auto& w : walks) {
      if (i < w.size()) col.push_back(w[i]);
    }
    const auto s = summarize(col);
    b.grid.push_back(static_cast<double>(i) * ds);
    b.mean.push_back(s.mean);
    b.q05.push_back(s.q05);
    b.q95.push_back(s.q95);
  }
  return b;
}

// Mean rescaled walk with its band against 2 lambda s - s^2 / 2.
inline std::string walk_figure(const WalkBand& band, double lambda) {
  SvgPlot plot("Rescaled adapted walk", "s", "n^(-1/3) S(s n^(2/3))");
  plot.band(band.grid, band.q05, band.q95, "#6baed6", "5%-95% band");
  plot.line(band.grid, band.mean, "#08519c", "mean");
  std::vector<double> parabola;
  for (double s : band.grid) parabola.push_back(2.0 * lambda * s - s * s / 2.0);
  plot.line(band.grid, parabola, "#cb181d", "2 lambda s - s^2/2", true);
  return plot.render();
}

inline std::string exponent_figure(const ExponentFit& fit) {
  SvgPlot plot("Largest component exponent", "log n", "log median |C1|");
  std::vector<double> x, y;
  for (const auto& [lx, ly] : fit.points) {
    x.push_back(lx);
    y.push_back(ly);
  }
  plot.points(x, y, "#08519c", "medians");
  if (!x.empty()) {
    // The least-squares line passes through the centroid.
    const double mx = mean(x), my = mean(y);
    const double lo = *std::min_element(x.begin(), x.end());
    const double hi = *std::max_element(x.begin(), x.end());
    std::ostringstream label;
    label << "slope " << fit.rho_hat;
    plot.line({lo, hi}, {my + fit.rho_hat * (lo - mx), my + fit.rho_hat * (hi - mx)},
              "#cb181d", label.str());
  }
  return plot.render();
}

inline std::string ks_figure(const std::vector<double>& a, const std::vector<double>& b,
                             std::size_t rank, const std::string& label_a,
                             const std::string& label_b) {
  SvgPlot plot("Rescaled |C" + std::to_string(rank) + "| empirical CDFs", "rescaled size",
               "CDF");
  plot.ecdf(a, "#08519c", label_a);
  plot.ecdf(b, "#cb181d", label_b);
  return plot.render();
}

}  // namespace rigsim

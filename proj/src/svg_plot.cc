// Copyright 2026 The discamc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "discamc/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmt/format.h"

namespace discamc {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 70, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      const double pad = std::max(std::abs(lo) * 0.1, 0.5);
      lo -= pad;
      hi += pad;
    }
  }
  double Map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string Tick(double v) { return fmt::format("{:.4g}", v); }

}  // namespace

std::string RenderSvg(const LineChart& chart) {
  Range x, y, y2;
  bool has_right = false;
  for (const auto& s : chart.series) {
    for (const auto& [px, py] : s.points) {
      x.Add(px);
      (s.right_axis ? y2 : y).Add(py);
    }
    has_right = has_right || s.right_axis;
  }
  x.Finish();
  y.Finish();
  y2.Finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, Escape(chart.title));
  svg += fmt::format(
      "<g stroke=\"black\"><line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\"/>",
      x0, y0, x1, y1);
  if (has_right) svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>", x1, y0, y1);
  svg += "</g>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fy = y.lo + (y.hi - y.lo) * i / 4.0;
    const double py = y.Map(fy, y0, y1);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", x0 - 6,
                       py + 4, Tick(fy));
    if (has_right) {
      const double fy2 = y2.lo + (y2.hi - y2.lo) * i / 4.0;
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"start\">{}</text>\n", x1 + 6,
                         py + 4, Tick(fy2));
    }
  }
  if (!chart.x_categories.empty()) {
    for (size_t i = 0; i < chart.x_categories.size(); ++i) {
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                         x.Map(static_cast<double>(i), x0, x1), y0 + 18,
                         Escape(chart.x_categories[i]));
    }
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double fx = x.lo + (x.hi - x.lo) * i / 4.0;
      svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                         x.Map(fx, x0, x1), y0 + 18, Tick(fx));
    }
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     (x0 + x1) / 2, kHeight - 15, Escape(chart.x_label));
  svg += fmt::format(
      "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
      (y0 + y1) / 2, Escape(chart.y_label));
  if (has_right) {
    svg += fmt::format(
        "<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\" transform=\"rotate(90 {0} {1})\">{2}</text>\n",
        kWidth - 18, (y0 + y1) / 2, Escape(chart.y2_label));
  }

  for (size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    const Range& yr = s.right_axis ? y2 : y;
    const char* color = kColors[si % std::size(kColors)];
    std::string pts;
    for (const auto& [px, py] : s.points) {
      if (!std::isfinite(px) || !std::isfinite(py)) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", x.Map(px, x0, x1), yr.Map(py, y0, y1));
    }
    svg += fmt::format(
        "<polyline data-series=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" "
        "points=\"{}\"/>\n",
        Escape(s.name), color, pts);
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", x0 + 10,
        y1 + 14 + 16 * static_cast<double>(si), color, Escape(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace discamc

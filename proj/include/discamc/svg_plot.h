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

#ifndef DISCAMC_SVG_PLOT_H_
#define DISCAMC_SVG_PLOT_H_

#include <string>
#include <utility>
#include <vector>

namespace discamc {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
  // Plot against the secondary (right) y axis.
  bool right_axis = false;
};

// Minimal self-contained SVG line chart: one <polyline> per series, axes
// with tick labels, a legend, and an optional secondary y axis.
struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string y2_label;
  std::vector<PlotSeries> series;
  // When nonempty, x values 0..n-1 are labeled with these strings.
  std::vector<std::string> x_categories;
};

std::string RenderSvg(const LineChart& chart);

}  // namespace discamc

#endif  // DISCAMC_SVG_PLOT_H_

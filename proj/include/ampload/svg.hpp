#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ampload::plot {

struct Series {
  std::string name;
  std::vector<double> y;  // plotted against the index
  std::string color = "#1f77b4";
};

/// Static SVG line plot: axes, min/max tick labels, one polyline per series
/// and a legend. Deterministic output for identical input.
std::string line_plot(const std::vector<Series>& series, std::string_view title, int width = 640, int height = 400);

}  // namespace ampload::plot

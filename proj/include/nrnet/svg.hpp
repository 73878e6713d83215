#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nrnet::plot {

struct Polyline {
  std::string name;
  std::vector<std::pair<double, double>> points;  ///< data coordinates
};

struct AxisRange {
  std::string label;
  double min = 0.0;
  double max = 1.0;
  bool log = false;
};

/// `values` is row-major with row 0 at the bottom; missing cells are grey.
struct Heatmap {
  int cols = 0;
  int rows = 0;
  std::vector<std::optional<double>> values;
  AxisRange x;
  AxisRange y;
  std::string title;
  std::string color_label;
  std::vector<Polyline> overlays;
};

/// One <rect> per cell, one <polyline> per overlay.
std::string heatmap_svg(const Heatmap& h);

struct LinePlot {
  AxisRange x;
  AxisRange y;
  std::string title;
  std::vector<Polyline> series;
};

std::string line_plot_svg(const LinePlot& p);

}  // namespace nrnet::plot

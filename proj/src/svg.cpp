#include "nrnet/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nrnet::plot {

namespace {

constexpr double kLeft = 70.0;
constexpr double kTop = 40.0;
constexpr double kRight = 110.0;
constexpr double kBottom = 50.0;
constexpr double kPlotSize = 480.0;

const std::array<const char*, 6> kLineColors{"#000000", "#d62728", "#ffffff", "#1f77b4", "#ff7f0e", "#2ca02c"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Position of v in [0, 1] along the axis.
double unit(const AxisRange& a, double v) {
  if (a.max == a.min) return 0.5;
  if (a.log) return (std::log(v) - std::log(a.min)) / (std::log(a.max) - std::log(a.min));
  return (v - a.min) / (a.max - a.min);
}

// Piecewise-linear approximation of the viridis map.
std::string viridis(double t) {
  static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

void header(std::ostringstream& out, double width, double height, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title) << "</text>\n";
}

void axis_labels(std::ostringstream& out, const AxisRange& x, const AxisRange& y, double plot_w, double plot_h) {
  const double bottom = kTop + plot_h;
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(bottom + 40) << "\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(x.label) << (x.log ? " (log)" : "") << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(kTop + plot_h / 2) << ")\">" << escape(y.label) << (y.log ? " (log)" : "") << "</text>\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"" << num(bottom + 18) << "\" font-size=\"11\">" << num(x.min) << "</text>\n";
  out << "<text x=\"" << num(kLeft + plot_w) << "\" y=\"" << num(bottom + 18) << "\" text-anchor=\"end\" font-size=\"11\">"
      << num(x.max) << "</text>\n";
  out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(bottom) << "\" text-anchor=\"end\" font-size=\"11\">" << num(y.min)
      << "</text>\n";
  out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + 10) << "\" text-anchor=\"end\" font-size=\"11\">" << num(y.max)
      << "</text>\n";
}

}  // namespace

std::string heatmap_svg(const Heatmap& h) {
  const double cw = kPlotSize / std::max(1, h.cols);
  const double ch = kPlotSize / std::max(1, h.rows);
  const double plot_w = cw * h.cols;
  const double plot_h = ch * h.rows;

  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& v : h.values) {
    if (v && std::isfinite(*v)) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;

  std::ostringstream out;
  header(out, kLeft + plot_w + kRight, kTop + plot_h + kBottom, h.title);
  out << "<g class=\"cells\">\n";
  for (int r = 0; r < h.rows; ++r) {
    for (int c = 0; c < h.cols; ++c) {
      const auto& v = h.values[static_cast<std::size_t>(r) * h.cols + c];
      const std::string fill = v && std::isfinite(*v) ? viridis((*v - lo) / (hi - lo)) : std::string("#bbbbbb");
      out << "<rect x=\"" << num(kLeft + c * cw) << "\" y=\"" << num(kTop + (h.rows - 1 - r) * ch) << "\" width=\"" << num(cw)
          << "\" height=\"" << num(ch) << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  out << "</g>\n";

  // Overlay coordinates map onto cell centres: axis min at column 0, max at the last.
  auto px = [&](double x) { return kLeft + (unit(h.x, x) * (h.cols - 1) + 0.5) * cw; };
  auto py = [&](double y) { return kTop + (h.rows - 0.5 - unit(h.y, y) * (h.rows - 1)) * ch; };
  for (std::size_t i = 0; i < h.overlays.size(); ++i) {
    const auto& o = h.overlays[i];
    out << "<polyline class=\"overlay\" data-name=\"" << escape(o.name) << "\" fill=\"none\" stroke=\""
        << kLineColors[i % kLineColors.size()] << "\" stroke-width=\"2\" stroke-dasharray=\"6 4\" points=\"";
    for (std::size_t p = 0; p < o.points.size(); ++p) {
      if (p) out << ' ';
      out << num(px(o.points[p].first)) << ',' << num(py(o.points[p].second));
    }
    out << "\"/>\n";
  }

  // Colour bar and legend on the right.
  const double bar_x = kLeft + plot_w + 20;
  for (int s = 0; s < 32; ++s) {
    out << "<line x1=\"" << num(bar_x) << "\" x2=\"" << num(bar_x + 14) << "\" y1=\"" << num(kTop + plot_h * (1 - s / 32.0))
        << "\" y2=\"" << num(kTop + plot_h * (1 - s / 32.0)) << "\" stroke=\"" << viridis(s / 31.0) << "\" stroke-width=\""
        << num(plot_h / 32 + 1) << "\"/>\n";
  }
  out << "<text x=\"" << num(bar_x + 18) << "\" y=\"" << num(kTop + 10) << "\" font-size=\"11\">" << num(hi) << "</text>\n";
  out << "<text x=\"" << num(bar_x + 18) << "\" y=\"" << num(kTop + plot_h) << "\" font-size=\"11\">" << num(lo) << "</text>\n";
  out << "<text x=\"" << num(bar_x) << "\" y=\"" << num(kTop + plot_h + 18) << "\" font-size=\"11\">" << escape(h.color_label)
      << "</text>\n";
  for (std::size_t i = 0; i < h.overlays.size(); ++i) {
    out << "<text x=\"" << num(bar_x + 40) << "\" y=\"" << num(kTop + 40 + 16 * i) << "\" font-size=\"10\" fill=\""
        << (i % kLineColors.size() == 2 ? "#888888" : kLineColors[i % kLineColors.size()]) << "\">"
        << escape(h.overlays[i].name) << "</text>\n";
  }
  axis_labels(out, h.x, h.y, plot_w, plot_h);
  out << "</svg>\n";
  return out.str();
}

std::string line_plot_svg(const LinePlot& p) {
  std::ostringstream out;
  header(out, kLeft + kPlotSize + kRight, kTop + kPlotSize + kBottom, p.title);
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kPlotSize) << "\" height=\""
      << num(kPlotSize) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  auto px = [&](double x) { return kLeft + unit(p.x, x) * kPlotSize; };
  auto py = [&](double y) { return kTop + (1.0 - unit(p.y, y)) * kPlotSize; };
  for (std::size_t i = 0; i < p.series.size(); ++i) {
    const auto& s = p.series[i];
    const char* color = i % kLineColors.size() == 2 ? "#9467bd" : kLineColors[i % kLineColors.size()];
    out << "<polyline class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (p.y.log && y <= 0) || (p.x.log && x <= 0)) continue;
      if (!first) out << ' ';
      first = false;
      out << num(px(x)) << ',' << num(py(std::clamp(y, std::min(p.y.min, p.y.max), std::max(p.y.min, p.y.max))));
    }
    out << "\"/>\n";
    out << "<text x=\"" << num(kLeft + kPlotSize + 10) << "\" y=\"" << num(kTop + 14 + 16 * i) << "\" font-size=\"11\" fill=\""
        << color << "\">" << escape(s.name) << "</text>\n";
  }
  axis_labels(out, p.x, p.y, kPlotSize, kPlotSize);
  out << "</svg>\n";
  return out.str();
}

}  // namespace nrnet::plot

#pragma once

// Minimal SVG line plots: dashed red polylines for first-order boundaries,
// solid blue for continuous ones.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "cavity_ising/app/output.hpp"

namespace cavity_ising::app {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  std::vector<std::pair<std::string, std::pair<double, double>>> markers;
};

/// Renders the plot. A generation timestamp comment is included only when
/// `timestamp` is non-empty.
inline std::string render_svg(const SvgPlot& plot, const std::string& timestamp = {}) {
  constexpr double W = 640, H = 480, M = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto extend = [&](double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& s : plot.series) {
    for (const auto& [x, y] : s.points) extend(x, y);
  }
  for (const auto& m : plot.markers) extend(m.second.first, m.second.second);
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double x) { return format_double(M + (x - x0) / (x1 - x0) * (W - 2 * M)); };
  auto py = [&](double y) { return format_double(H - M - (y - y0) / (y1 - y0) * (H - 2 * M)); };

  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!timestamp.empty()) s += "<!-- generated " + timestamp + " -->\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + plot.title + "</text>\n";
  s += "<line x1=\"60\" y1=\"420\" x2=\"580\" y2=\"420\" stroke=\"black\"/>\n";
  s += "<line x1=\"60\" y1=\"60\" x2=\"60\" y2=\"420\" stroke=\"black\"/>\n";
  s += "<text x=\"320\" y=\"460\" text-anchor=\"middle\" font-size=\"13\">" + plot.x_label + "</text>\n";
  s += "<text x=\"18\" y=\"240\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 240)\">" +
       plot.y_label + "</text>\n";
  s += "<text x=\"60\" y=\"436\" font-size=\"10\" text-anchor=\"middle\">" + format_double(rounded(x0)) + "</text>\n";
  s += "<text x=\"580\" y=\"436\" font-size=\"10\" text-anchor=\"middle\">" + format_double(rounded(x1)) + "</text>\n";
  s += "<text x=\"54\" y=\"424\" font-size=\"10\" text-anchor=\"end\">" + format_double(rounded(y0)) + "</text>\n";
  s += "<text x=\"54\" y=\"64\" font-size=\"10\" text-anchor=\"end\">" + format_double(rounded(y1)) + "</text>\n";
  for (const auto& ser : plot.series) {
    s += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"";
    s += ser.dashed ? "#c0392b\" stroke-dasharray=\"8 5\"" : "#1f4e9c\"";
    s += " points=\"";
    for (const auto& [x, y] : ser.points) s += px(x) + "," + py(y) + " ";
    s += "\"><title>" + ser.label + "</title></polyline>\n";
  }
  for (const auto& [name, xy] : plot.markers) {
    s += "<circle cx=\"" + px(xy.first) + "\" cy=\"" + py(xy.second) + "\" r=\"4\" fill=\"black\"/>\n";
    s += "<text x=\"" + px(xy.first) + "\" y=\"" + py(xy.second) + "\" dx=\"6\" dy=\"-6\" font-size=\"12\">" + name +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace cavity_ising::app

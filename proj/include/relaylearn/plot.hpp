// SPDX-License-Identifier: Apache-2.0
//
// Minimal static SVG line charts for ROC, precision-recall and loss curves.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "relaylearn/format.hpp"
#include "relaylearn/metrics.hpp"

namespace relaylearn::plot {

struct Series {
  std::string name;
  std::vector<metrics::CurvePoint> points;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
  // Fixed [0, 1] ranges for ROC/PR; loss curves autoscale.
  bool unit_square = true;
};

namespace detail {
inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace detail

inline std::string line_chart(const Axes& axes, const std::vector<Series>& series) {
  constexpr double width = 640, height = 480;
  constexpr double left = 70, right = 170, top = 40, bottom = 60;
  constexpr std::array<const char*, 8> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!axes.unit_square) {
    x0 = y0 = INFINITY;
    x1 = y1 = -INFINITY;
    for (const auto& s : series) {
      for (const auto& p : s.points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
      }
    }
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  }
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - y0) / (y1 - y0) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << detail::escape(axes.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
     << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << px(fx) << "\" y=\"" << top + plot_h + 16
       << "\" text-anchor=\"middle\">" << text::number(fx, 3) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">"
       << text::number(fy, 3) << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
     << "\" text-anchor=\"middle\">" << detail::escape(axes.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << detail::escape(axes.y_label)
     << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = palette[i % palette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : series[i].points) {
      os << text::number(px(p.x), 6) << ',' << text::number(py(p.y), 6) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << width - right + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << width - right + 36 << "\" y=\"" << ly << "\">"
       << detail::escape(series[i].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace relaylearn::plot

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "homog/errors.hpp"

namespace homog {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (eps, value), positive
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;  // in log-log coordinates
  bool draw_fit = true;
};

/// Minimal self-contained SVG renderer: log-log scatter + fitted lines with
/// slope annotations. No external plotting process involved.
inline void write_loglog_svg(const std::string& path, const std::string& title,
                             const std::vector<PlotSeries>& series,
                             const std::string& xlabel = "eps",
                             const std::string& ylabel = "lambda") {
  const int W = 760, H = 520;
  const int ml = 70, mr = 20, mt = 44, mb = 52;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  if (xmin > xmax) {
    xmin = -1;
    xmax = 0;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  double xpad = std::max(0.05 * (xmax - xmin), 0.05);
  double ypad = std::max(0.05 * (ymax - ymin), 0.05);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double lx) {
    return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double ly) {
    return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream os(path);
  require(os.good(), ErrorCode::io_failure, "cannot open " + path);
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";

  // decade grid
  for (int d = static_cast<int>(std::ceil(xmin)); d <= std::floor(xmax); ++d) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" "
                  "stroke=\"#dddddd\"/>\n",
                  px(d), mt, px(d), H - mb);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\" font-size=\"11\">1e%d</text>\n",
                  px(d), H - mb + 16, d);
    os << buf;
  }
  for (int d = static_cast<int>(std::ceil(ymin)); d <= std::floor(ymax); ++d) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" "
                  "stroke=\"#dddddd\"/>\n",
                  ml, py(d), W - mr, py(d));
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" "
                  "font-family=\"sans-serif\" font-size=\"11\">1e%d</text>\n",
                  ml - 6, py(d) + 4, d);
    os << buf;
  }
  // axes
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                "fill=\"none\" stroke=\"black\"/>\n",
                ml, mt, W - ml - mr, H - mt - mb);
  os << buf;
  os << "<text x=\"" << (ml + (W - ml - mr) / 2) << "\" y=\"" << (H - 10)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << xlabel << "</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + (H - mt - mb) / 2)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 18 "
     << (mt + (H - mt - mb) / 2) << ")\">" << ylabel << "</text>\n";

  int ci = 0;
  int legend_y = mt + 14;
  for (const auto& s : series) {
    const char* color = colors[ci % 6];
    ++ci;
    // points
    for (auto [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3.5\" fill=\"%s\"/>\n",
                    px(std::log10(x)), py(std::log10(y)), color);
      os << buf;
    }
    // polyline through the points
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1\" points=\"";
    for (auto [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y)) continue;
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", px(std::log10(x)),
                    py(std::log10(y)));
      os << buf;
    }
    os << "\"/>\n";
    // fitted line in log-log coordinates (natural log fit -> log10 line)
    if (s.draw_fit) {
      double lx0 = xmin + 0.02, lx1 = xmax - 0.02;
      auto fit_ly = [&](double lx) {
        double lnx = lx * std::numbers::ln10;
        double lny = s.fitted_intercept + s.fitted_slope * lnx;
        return lny / std::numbers::ln10;
      };
      std::snprintf(buf, sizeof(buf),
                    "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                    "stroke=\"%s\" stroke-dasharray=\"5,4\"/>\n",
                    px(lx0), py(fit_ly(lx0)), px(lx1), py(fit_ly(lx1)), color);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                  "font-size=\"12\" fill=\"%s\">%s (slope %.3f)</text>\n",
                  W - mr - 230, legend_y, color, s.label.c_str(),
                  s.fitted_slope);
    os << buf;
    legend_y += 16;
  }
  os << "</svg>\n";
}

}  // namespace homog

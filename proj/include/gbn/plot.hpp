#pragma once

// Minimal self-contained SVG line charts for the experiment outputs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gbn/error.hpp"
#include "gbn/io.hpp"

namespace gbn {

enum class PlotKind { mse_curve, pair_correlation, spectrum, redness_trace };

inline PlotKind parse_plot_kind(const std::string& name) {
  if (name == "mse-curve") return PlotKind::mse_curve;
  if (name == "pair-correlation") return PlotKind::pair_correlation;
  if (name == "spectrum") return PlotKind::spectrum;
  if (name == "redness-trace") return PlotKind::redness_trace;
  throw ValidationError("unknown plot kind '" + name + "' (expected mse-curve, pair-correlation, spectrum, redness-trace)");
}

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

struct PlotStyle {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool markers = false;
};

inline PlotStyle style_for(PlotKind kind) {
  switch (kind) {
    case PlotKind::mse_curve: return {"Reconstruction error", "samples m", "mean MSE", true, true};
    case PlotKind::pair_correlation: return {"Pair correlation", "rho", "R(rho)", false, false};
    case PlotKind::spectrum: return {"Power spectrum", "mu", "p", false, false};
    case PlotKind::redness_trace: return {"Redness trace", "iteration", "redness", false, true};
  }
  return {};
}

inline std::string escape_xml(const std::string& s) {
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

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// SVG text for the series. Non-positive values are dropped on a log axis.
inline std::string render_svg(PlotKind kind, const std::vector<PlotSeries>& series) {
  if (series.empty()) throw ValidationError("plot: no data series");
  const auto style = detail::style_for(kind);
  const double width = 720, height = 440, left = 80, right = 170, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  auto ty = [&](double y) { return style.log_y ? std::log10(y) : y; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ValidationError("plot: series '" + s.label + "' has mismatched x/y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (style.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) throw ValidationError("plot: no finite data points");
  if (style.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" viewBox=\"0 0 720 440\">\n";
  svg += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  svg += "<text x=\"" + format_double(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         detail::escape_xml(style.title) + "</text>\n";
  svg += "<rect x=\"" + format_double(left) + "\" y=\"" + format_double(top) + "\" width=\"" + format_double(pw) +
         "\" height=\"" + format_double(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double x = px(xv);
    svg += "<line x1=\"" + format_double(x) + "\" y1=\"" + format_double(top + ph) + "\" x2=\"" + format_double(x) +
           "\" y2=\"" + format_double(top + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(x) + "\" y=\"" + format_double(top + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt_tick(xv) + "</text>\n";
  }
  const int ysteps = style.log_y ? static_cast<int>(ymax - ymin) : 5;
  for (int i = 0; i <= ysteps; ++i) {
    const double yt = ymin + (ymax - ymin) * i / ysteps;
    const double y = top + ph - (yt - ymin) / (ymax - ymin) * ph;
    const std::string label = style.log_y ? "1e" + std::to_string(static_cast<int>(std::lround(yt))) : detail::fmt_tick(yt);
    svg += "<line x1=\"" + format_double(left - 5) + "\" y1=\"" + format_double(y) + "\" x2=\"" + format_double(left) +
           "\" y2=\"" + format_double(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(left - 8) + "\" y=\"" + format_double(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
  }
  svg += "<text x=\"" + format_double(left + pw / 2) + "\" y=\"" + format_double(height - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + detail::escape_xml(style.x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + format_double(top + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " +
         format_double(top + ph / 2) + ")\">" + detail::escape_xml(style.y_label) + (style.log_y ? " (log)" : "") + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = palette[k % std::size(palette)];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (style.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      points += format_double(px(s.x[i])) + "," + format_double(py(s.y[i])) + " ";
      if (style.markers) {
        svg += "<circle cx=\"" + format_double(px(s.x[i])) + "\" cy=\"" + format_double(py(s.y[i])) +
               "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    svg += "<line x1=\"" + format_double(left + pw + 12) + "\" y1=\"" + format_double(ly - 4) + "\" x2=\"" +
           format_double(left + pw + 32) + "\" y2=\"" + format_double(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_double(left + pw + 38) + "\" y=\"" + format_double(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape_xml(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline std::string series_to_csv(const std::vector<PlotSeries>& series) {
  std::string out = "series,x,y\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) out += s.label + "," + format_double(s.x[i]) + "," + format_double(s.y[i]) + "\n";
  }
  return out;
}

/// Writes `svg_path` and the plotted data as CSV beside it (same stem).
inline void emit_plot(PlotKind kind, const std::vector<PlotSeries>& series, const std::string& svg_path) {
  const std::string svg = render_svg(kind, series);
  write_text(svg_path, svg);
  const auto dot = svg_path.rfind('.');
  const std::string stem = (dot == std::string::npos || svg_path.find('/', dot) != std::string::npos)
                               ? svg_path
                               : svg_path.substr(0, dot);
  write_text(stem + ".csv", series_to_csv(series));
}

inline void emit_plot(const std::string& kind, const std::vector<PlotSeries>& series, const std::string& svg_path) {
  emit_plot(parse_plot_kind(kind), series, svg_path);
}

}  // namespace gbn

// Hand-rolled static SVG 1.1 emission: line charts for experiment sweeps and
// ternary scatter plots for three-component memberships. Output is a pure
// function of the inputs (fixed precision, no timestamps), so re-emission is
// byte-identical.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "mmsg/csv.hpp"
#include "mmsg/errors.hpp"

namespace mmsg {

namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
      "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};
  return colors;
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Round a positive span up to a tidy tick step (1/2/5 times a power of ten).
inline double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mult * mag >= raw) return mult * mag;
  }
  return 10.0 * mag;
}

inline std::string line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series) {
  const double width = 760, height = 520;
  const double ml = 70, mr = 160, mt = 46, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xmin = xmax = s.x[i];
        ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  ymax = std::max(0.5, std::ceil(ymax * 10.0 + 0.5) / 10.0);

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(ml + pw)
      << "\" y2=\"" << num(mt + ph) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(ml) << "\" y2=\""
      << num(mt + ph) << "\" stroke=\"black\"/>\n";

  const double xstep = nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(px(t))
        << "\" y2=\"" << num(mt + ph + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(px(t)) << "\" y=\"" << num(mt + ph + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double_short(t) << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin, 5);
  for (double t = ymin; t <= ymax + 1e-9 * ystep; t += ystep) {
    out << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(ml + pw)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(ml - 9) << "\" y=\"" << num(py(t) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double_short(t) << "</text>\n";
  }
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 14)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n"
      << "<text x=\"18\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(mt + ph / 2) << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const std::string& color = palette()[s % palette().size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i > 0) out << ' ';
      out << num(px(series[s].x[i])) << ',' << num(py(series[s].y[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      out << "<circle cx=\"" << num(px(series[s].x[i])) << "\" cy=\"" << num(py(series[s].y[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = mt + 14 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << num(ml + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(ml + pw + 34) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(ml + pw + 40) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

struct TernaryMarker {
  double x = 0.0, y = 0.0;        // barycentric-to-cartesian coordinates
  int shape = 0;                  // 0 circle, 1 triangle, 2 square
  int color_index = 0;
};

inline std::string ternary_plot(const std::string& title, const std::vector<TernaryMarker>& markers,
                                const std::vector<std::string>& vertex_labels,
                                const std::vector<std::string>& shape_labels,
                                const std::vector<std::string>& color_labels) {
  const double width = 640, height = 600;
  const double side = 460;
  const double ox = (width - side) / 2.0, oy = 500;
  const double h = side * std::sqrt(3.0) / 2.0;

  auto px = [&](double x) { return ox + x * side; };
  auto py = [&](double y) { return oy - y * side; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(width / 2) << "\" y=\"26\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n"
      << "<polygon fill=\"none\" stroke=\"black\" points=\"" << num(px(0)) << ',' << num(py(0))
      << ' ' << num(px(1)) << ',' << num(py(0)) << ' ' << num(px(0.5)) << ','
      << num(oy - h) << "\"/>\n";

  out << "<text x=\"" << num(px(0) - 8) << "\" y=\"" << num(py(0) + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << vertex_labels[0]
      << "</text>\n"
      << "<text x=\"" << num(px(1) + 8) << "\" y=\"" << num(py(0) + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << vertex_labels[1]
      << "</text>\n"
      << "<text x=\"" << num(px(0.5)) << "\" y=\"" << num(oy - h - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << vertex_labels[2]
      << "</text>\n";

  for (const auto& m : markers) {
    const std::string& color = palette()[static_cast<std::size_t>(m.color_index) % palette().size()];
    const double cx = px(m.x), cy = oy - m.y * side;
    if (m.shape == 0) {
      out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"4\" fill=\"" << color
          << "\" fill-opacity=\"0.75\"/>\n";
    } else if (m.shape == 1) {
      out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.75\" points=\"" << num(cx) << ','
          << num(cy - 4.5) << ' ' << num(cx - 4) << ',' << num(cy + 3.5) << ' ' << num(cx + 4)
          << ',' << num(cy + 3.5) << "\"/>\n";
    } else {
      out << "<rect x=\"" << num(cx - 3.5) << "\" y=\"" << num(cy - 3.5)
          << "\" width=\"7\" height=\"7\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
    }
  }

  double ly = 60;
  for (std::size_t s = 0; s < shape_labels.size(); ++s, ly += 18) {
    const double cx = 28, cy = ly - 4;
    if (s == 0)
      out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"4\" fill=\"#555555\"/>\n";
    else if (s == 1)
      out << "<polygon fill=\"#555555\" points=\"" << num(cx) << ',' << num(cy - 4.5) << ' '
          << num(cx - 4) << ',' << num(cy + 3.5) << ' ' << num(cx + 4) << ',' << num(cy + 3.5)
          << "\"/>\n";
    else
      out << "<rect x=\"" << num(cx - 3.5) << "\" y=\"" << num(cy - 3.5)
          << "\" width=\"7\" height=\"7\" fill=\"#555555\"/>\n";
    out << "<text x=\"40\" y=\"" << num(ly) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << shape_labels[s] << "</text>\n";
  }
  ly += 8;
  for (std::size_t c = 0; c < color_labels.size(); ++c, ly += 18) {
    out << "<rect x=\"22\" y=\"" << num(ly - 12) << "\" width=\"12\" height=\"12\" fill=\""
        << palette()[c % palette().size()] << "\"/>\n"
        << "<text x=\"40\" y=\"" << num(ly - 2) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << color_labels[c] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace svg

}  // namespace mmsg

#include "optbench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace optbench {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_number(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

}  // namespace

std::size_t write_line_chart(const std::string& path,
                             const std::vector<double>& xs,
                             const std::vector<double>& ys,
                             const SvgOptions& opts) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("series length mismatch");

  std::vector<double> px, py;
  px.reserve(xs.size());
  py.reserve(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    if (opts.log_y && !(ys[i] > 0.0)) continue;
    px.push_back(xs[i]);
    py.push_back(opts.log_y ? std::log10(ys[i]) : ys[i]);
  }

  const double margin_l = 70, margin_r = 20, margin_t = 40, margin_b = 50;
  const double plot_w = opts.width - margin_l - margin_r;
  const double plot_h = opts.height - margin_t - margin_b;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  if (!px.empty()) {
    x_min = *std::min_element(px.begin(), px.end());
    x_max = *std::max_element(px.begin(), px.end());
    y_min = *std::min_element(py.begin(), py.end());
    y_max = *std::max_element(py.begin(), py.end());
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }

  const auto sx = [&](double x) {
    return margin_l + (x - x_min) / (x_max - x_min) * plot_w;
  };
  const auto sy = [&](double y) {
    return margin_t + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
      << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width
      << ' ' << opts.height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out << "  <text x=\"" << opts.width / 2.0
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << xml_escape(opts.title) << "</text>\n";

  // Axes
  out << "  <line x1=\"" << margin_l << "\" y1=\"" << margin_t + plot_h
      << "\" x2=\"" << margin_l + plot_w << "\" y2=\"" << margin_t + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin_l << "\" y1=\"" << margin_t << "\" x2=\""
      << margin_l << "\" y2=\"" << margin_t + plot_h
      << "\" stroke=\"black\"/>\n";

  // Ticks and labels
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double gx = sx(fx);
    out << "  <line x1=\"" << gx << "\" y1=\"" << margin_t + plot_h
        << "\" x2=\"" << gx << "\" y2=\"" << margin_t + plot_h + 5
        << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << gx << "\" y=\"" << margin_t + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << short_number(fx) << "</text>\n";

    const double fy = y_min + (y_max - y_min) * i / ticks;
    const double gy = sy(fy);
    out << "  <line x1=\"" << margin_l - 5 << "\" y1=\"" << gy << "\" x2=\""
        << margin_l << "\" y2=\"" << gy << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << margin_l - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << short_number(opts.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }

  if (!opts.x_label.empty())
    out << "  <text x=\"" << margin_l + plot_w / 2 << "\" y=\""
        << opts.height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << xml_escape(opts.x_label) << "</text>\n";
  if (!opts.y_label.empty())
    out << "  <text x=\"18\" y=\"" << margin_t + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 18 "
        << margin_t + plot_h / 2 << ")\">"
        << xml_escape(opts.y_label + (opts.log_y ? " (log scale)" : ""))
        << "</text>\n";

  if (!px.empty()) {
    out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
           "points=\"";
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (i) out << ' ';
      out << sx(px[i]) << ',' << sy(py[i]);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return px.size();
}

}  // namespace optbench

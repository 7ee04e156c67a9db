#pragma once

// Minimal standalone SVG line charts; enough for monotone decay and
// oscillation shapes without pulling in a plotting dependency.

#include <string>
#include <vector>

namespace optbench {

struct SvgOptions {
  std::string title;
  std::string x_label = "step";
  std::string y_label;
  bool log_y = false;
  int width = 800;
  int height = 500;
};

/// Writes a single-series line chart. Points with non-finite y (or y <= 0
/// under a log scale) are dropped; returns the number of points rendered.
std::size_t write_line_chart(const std::string& path,
                             const std::vector<double>& xs,
                             const std::vector<double>& ys,
                             const SvgOptions& opts);

}  // namespace optbench

#pragma once

#include <string>
#include <vector>

namespace vfp {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart: axes, ticks, one polyline per series, legend.
/// With log_y, y values must be positive; nonpositive points are dropped.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series, bool log_y = false);

}  // namespace vfp

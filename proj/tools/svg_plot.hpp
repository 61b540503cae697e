#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wpcn_tools {

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG line chart: auto-scaled linear axes, tick labels,
/// one polyline per curve, legend in the top-right corner.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Curve>& curves);

}  // namespace wpcn_tools

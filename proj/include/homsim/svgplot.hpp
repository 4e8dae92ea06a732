#pragma once

#include <string>
#include <vector>

namespace homsim::svgplot {

// Self-contained SVG writers for quick looks at exported data; no
// external renderer involved.

void write_line_plot(const std::string& path, const std::vector<double>& x,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, const std::string& title,
                     const std::string& x_label, const std::string& y_label);

void write_heatmap(const std::string& path, const std::vector<double>& x_axis,
                   const std::vector<double>& y_axis, const std::vector<double>& values,
                   const std::string& title);

}  // namespace homsim::svgplot

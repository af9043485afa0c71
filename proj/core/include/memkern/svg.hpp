#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace memkern {

/// One curve of a line chart.  Colors cycle through a fixed palette when
/// left empty.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
  bool dashed = false;
};

/// Minimal self-contained SVG line chart (axes, ticks, legend).  Good enough
/// to eyeball collapse and decay curves without external tooling.
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series);

}  // namespace memkern

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace flowgnn::plot {

struct XY {
  double x = 0.0;
  double y = 0.0;
};

struct Line {
  double slope = 1.0;
  double intercept = 0.0;
};

struct ScatterOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<Line> reference;  // drawn dashed, e.g. the identity line
  std::optional<Line> fit;        // drawn solid
  std::string annotation;
  bool equal_axes = false;  // same range on both axes (predicted vs true)
};

// Standalone SVG scatter plot.
std::string scatter_svg(const std::vector<XY>& points, const ScatterOptions& options);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace flowgnn::plot

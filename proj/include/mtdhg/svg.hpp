#pragma once

// Minimal standalone SVG 1.1 charts on a fixed 640x480 canvas. Only data
// marks are drawn as <rect>; axes and legend swatches use other elements so
// that rect counts equal mark counts.

#include <string>
#include <vector>

namespace mtdhg::svg {

inline constexpr int kWidth = 640;
inline constexpr int kHeight = 480;

struct BarSeries {
  std::string name;
  std::vector<double> values;  // one per category, in [0, y_max]
};

struct BarChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<BarSeries> series;
  double y_max = 1.0;
};

struct HeatCell {
  double p1 = 0;
  double p2 = 0;
  int color_index = 0;  // order of first appearance of the color key
};

struct SimplexHeatmap {
  std::string title;
  double step = 0.05;
  std::vector<HeatCell> cells;
  std::vector<std::string> legend;  // label per color index
};

// Fixed 16-color palette; index wraps.
const std::string& palette_color(int index);

// Throws EmptyData when there are no categories or no series.
std::string render_bar_chart(const BarChart& chart);

// Throws EmptyData when there are no cells.
std::string render_simplex_heatmap(const SimplexHeatmap& map);

}  // namespace mtdhg::svg

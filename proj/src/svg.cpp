#include "mtdhg/svg.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "mtdhg/errors.hpp"
#include "mtdhg/format.hpp"

namespace mtdhg::svg {

namespace {

const std::array<std::string, 16> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd"};

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Num(double v) { return format_double(v, 6); }

void Header(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
     << "\">\n"
     << "<title>" << Escape(title) << "</title>\n"
     << "<path d=\"M0 0H" << kWidth << "V" << kHeight << "H0Z\" fill=\"#ffffff\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << Escape(title) << "</text>\n";
}

void Line(std::ostringstream& os, double x1, double y1, double x2, double y2,
          const char* stroke = "#000000") {
  os << "<line x1=\"" << Num(x1) << "\" y1=\"" << Num(y1) << "\" x2=\"" << Num(x2)
     << "\" y2=\"" << Num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"1\"/>\n";
}

void Text(std::ostringstream& os, double x, double y, const std::string& text,
          const char* anchor = "middle", int size = 12, const char* extra = "") {
  os << "<text x=\"" << Num(x) << "\" y=\"" << Num(y) << "\" text-anchor=\"" << anchor
     << "\" font-family=\"sans-serif\" font-size=\"" << size << "\"" << extra << ">"
     << Escape(text) << "</text>\n";
}

void LegendEntry(std::ostringstream& os, double x, double y, const std::string& color,
                 const std::string& label) {
  os << "<circle cx=\"" << Num(x) << "\" cy=\"" << Num(y) << "\" r=\"6\" fill=\"" << color
     << "\"/>\n";
  Text(os, x + 12, y + 4, label, "start", 11);
}

}  // namespace

const std::string& palette_color(int index) {
  const auto i = static_cast<std::size_t>(((index % 16) + 16) % 16);
  return kPalette[i];
}

std::string render_bar_chart(const BarChart& chart) {
  if (chart.categories.empty() || chart.series.empty()) {
    throw EmptyData("bar chart needs at least one category and one series");
  }
  for (const auto& s : chart.series) {
    if (s.values.size() != chart.categories.size()) {
      throw EmptyData("series \"" + s.name + "\" does not cover every category");
    }
  }
  const double left = 70, right = 470, top = 50, bottom = 420;
  const double plot_w = right - left, plot_h = bottom - top;
  const double y_max = chart.y_max > 0 ? chart.y_max : 1.0;

  std::ostringstream os;
  Header(os, chart.title);
  Line(os, left, bottom, right, bottom);
  Line(os, left, top, left, bottom);
  for (int tick = 0; tick <= 4; ++tick) {
    const double value = y_max * tick / 4.0;
    const double y = bottom - plot_h * tick / 4.0;
    Line(os, left - 4, y, left, y);
    if (tick > 0) Line(os, left, y, right, y, "#dddddd");
    Text(os, left - 8, y + 4, format_double(value, 3), "end", 11);
  }

  const auto groups = static_cast<double>(chart.categories.size());
  const auto per_group = static_cast<double>(chart.series.size());
  const double group_w = plot_w / groups;
  const double bar_w = group_w * 0.8 / per_group;
  for (std::size_t c = 0; c < chart.categories.size(); ++c) {
    const double group_x = left + group_w * static_cast<double>(c) + group_w * 0.1;
    for (std::size_t s = 0; s < chart.series.size(); ++s) {
      const double value = std::clamp(chart.series[s].values[c], 0.0, y_max);
      const double h = plot_h * value / y_max;
      os << "<rect class=\"bar\" x=\"" << Num(group_x + bar_w * static_cast<double>(s))
         << "\" y=\"" << Num(bottom - h) << "\" width=\"" << Num(bar_w) << "\" height=\""
         << Num(h) << "\" fill=\"" << palette_color(static_cast<int>(s)) << "\"/>\n";
    }
    Text(os, group_x + group_w * 0.4, bottom + 18, chart.categories[c]);
  }
  Text(os, (left + right) / 2, bottom + 44, chart.x_label, "middle", 13);
  Text(os, 20, (top + bottom) / 2, chart.y_label, "middle", 13,
       (" transform=\"rotate(-90 20 " + Num((top + bottom) / 2) + ")\"").c_str());
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    LegendEntry(os, right + 30, top + 10 + 22.0 * static_cast<double>(s),
                palette_color(static_cast<int>(s)), chart.series[s].name);
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_simplex_heatmap(const SimplexHeatmap& map) {
  if (map.cells.empty()) throw EmptyData("heatmap has no cells");
  const double left = 60, top = 50, size = 370;
  const double bottom = top + size;
  const double cell = size * map.step;

  std::ostringstream os;
  Header(os, map.title);
  // Cells are centered on lattice points, so the axes extend half a cell.
  const double x0 = left + cell / 2;
  const double y0 = bottom - cell / 2;
  for (const HeatCell& c : map.cells) {
    const double cx = x0 + (size - cell) * c.p1;
    const double cy = y0 - (size - cell) * c.p2;
    os << "<rect class=\"cell\" x=\"" << Num(cx - cell / 2) << "\" y=\""
       << Num(cy - cell / 2) << "\" width=\"" << Num(cell) << "\" height=\"" << Num(cell)
       << "\" fill=\"" << palette_color(c.color_index) << "\"/>\n";
  }
  Line(os, left, bottom, left + size, bottom);
  Line(os, left, top, left, bottom);
  for (int tick = 0; tick <= 4; ++tick) {
    const double f = tick / 4.0;
    const std::string label = format_double(f, 3);
    Line(os, x0 + (size - cell) * f, bottom, x0 + (size - cell) * f, bottom + 4);
    Text(os, x0 + (size - cell) * f, bottom + 18, label);
    Line(os, left - 4, y0 - (size - cell) * f, left, y0 - (size - cell) * f);
    Text(os, left - 8, y0 - (size - cell) * f + 4, label, "end", 11);
  }
  Text(os, left + size / 2, bottom + 40, "P(theta_1)", "middle", 13);
  Text(os, 18, top + size / 2, "P(theta_2)", "middle", 13,
       (" transform=\"rotate(-90 18 " + Num(top + size / 2) + ")\"").c_str());
  for (std::size_t i = 0; i < map.legend.size() && i < 16; ++i) {
    LegendEntry(os, left + size + 30, top + 10 + 20.0 * static_cast<double>(i),
                palette_color(static_cast<int>(i)), map.legend[i]);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace mtdhg::svg

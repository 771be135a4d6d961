#include "tlbscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tlbscope {

namespace {

constexpr int kCell = 6;        // px per matrix cell
constexpr int kMargin = 12;     // px around the grid
constexpr int kBarWidth = 16;   // px, legend gradient bar
constexpr int kBarHeight = 128; // px
constexpr int kBarSteps = 32;

std::string gray(double t) {
  const int level = static_cast<int>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", level, level, level);
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string rect(int x, int y, int w, int h, const std::string& fill) {
  return "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
         "\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" fill=\"" + fill + "\"/>\n";
}

std::string text(int x, int y, const std::string& body) {
  return "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
         "\" font-family=\"monospace\" font-size=\"10\" fill=\"#000000\">" + body +
         "</text>\n";
}

}  // namespace

std::string render_heatmap_svg(const Eigen::MatrixXd& values) {
  if (values.rows() == 0 || values.cols() == 0)
    throw std::invalid_argument("heatmap: matrix is empty");

  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi - lo;
  const auto shade = [&](double v) { return span > 0 ? (v - lo) / span : 0.5; };

  const int grid_w = static_cast<int>(values.cols()) * kCell;
  const int grid_h = static_cast<int>(values.rows()) * kCell;
  const int bar_x = kMargin + grid_w + 24;
  const int label_x = bar_x + kBarWidth + 6;
  const int width = label_x + 96;
  const int height = 2 * kMargin + std::max(grid_h, kBarHeight);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\">\n";
  svg += rect(0, 0, width, height, "#ffffff");

  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      svg += rect(kMargin + static_cast<int>(c) * kCell, kMargin + static_cast<int>(r) * kCell,
                  kCell, kCell, gray(shade(values(r, c))));

  // Legend: light (max) at the top down to dark (min).
  const int step_h = kBarHeight / kBarSteps;
  for (int s = 0; s < kBarSteps; ++s) {
    const double t = (kBarSteps - 0.5 - s) / kBarSteps;
    svg += rect(bar_x, kMargin + s * step_h, kBarWidth, step_h, gray(span > 0 ? t : 0.5));
  }
  svg += text(label_x, kMargin + 8, fixed6(hi));
  svg += text(label_x, kMargin + kBarHeight, fixed6(lo));

  svg += "</svg>\n";
  return svg;
}

}  // namespace tlbscope

#pragma once

#include <Eigen/Core>

#include <string>

namespace tlbscope {

// Standalone SVG heatmap: one rect per cell, linear grayscale from the
// matrix minimum (darkest) to maximum (lightest), plus a numeric legend.
// A constant matrix renders mid-gray. Output is deterministic.
std::string render_heatmap_svg(const Eigen::MatrixXd& values);

}  // namespace tlbscope

#pragma once

#include "cvabiplot/biplot.hpp"

#include <string>

namespace cvab {

struct SvgStyle {
  int width = 820;
  int height = 680;
  std::string title = "CVA biplot";
  double point_radius = 3.5;
};

/// SVG 1.1 document for a layout. Both canonical axes share one scale, so
/// the plot is square in data units. Output depends only on the arguments.
std::string render_svg(const BiplotLayout& layout, const SvgStyle& style = {});

}  // namespace cvab

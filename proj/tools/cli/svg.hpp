#pragma once

#include <string>

#include "cli/csv.hpp"

namespace ebpois::cli {

struct SvgOptions {
  std::string title;
  std::string x_label = "mu";
  std::string y_label = "value";
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 480;
};

/// Self-contained SVG 1.1 line chart of every curve in the set, with axes,
/// tick labels and a legend. On a log axis non-positive points are dropped
/// and the line is broken there.
std::string render_svg(const CurveSet& set, const SvgOptions& options);

}  // namespace ebpois::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebpois::cli {

struct CurvePoint {
  double x = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
};

struct Curve {
  std::string label;
  std::vector<CurvePoint> points;  // x strictly increasing
};

/// Curves sharing one abscissa (mu for risk curves, lambda for f).
struct CurveSet {
  std::string x_name = "mu";
  std::vector<Curve> curves;
};

/// Shortest text with 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// Long format: header "curve,<x_name>,value,err_bound", one row per point,
/// curves in order.
void write_csv(std::ostream& out, const CurveSet& set);

/// Inverse of write_csv. Throws std::runtime_error on malformed input.
CurveSet read_csv(std::istream& in);

}  // namespace ebpois::cli

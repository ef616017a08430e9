#include "cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace ebpois::cli {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  for (;;) {
    const auto comma = line.find(',');
    cells.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) return cells;
    line.remove_prefix(comma + 1);
  }
}

double parse_double(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || end != cell.data() + cell.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" +
                             std::string(cell) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const CurveSet& set) {
  out << "curve," << set.x_name << ",value,err_bound\n";
  for (const Curve& c : set.curves) {
    for (const CurvePoint& p : c.points) {
      out << c.label << ',' << format_double(p.x) << ',' << format_double(p.value) << ','
          << format_double(p.err_bound) << '\n';
    }
  }
}

CurveSet read_csv(std::istream& in) {
  CurveSet set;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  const auto header = split(line);
  if (header.size() != 4 || header[0] != "curve" || header[2] != "value" ||
      header[3] != "err_bound") {
    throw std::runtime_error("csv: unexpected header '" + line + "'");
  }
  set.x_name = std::string(header[1]);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 4) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 4 columns");
    }
    if (set.curves.empty() || set.curves.back().label != cells[0]) {
      set.curves.push_back({std::string(cells[0]), {}});
    }
    set.curves.back().points.push_back({parse_double(cells[1], line_no),
                                        parse_double(cells[2], line_no),
                                        parse_double(cells[3], line_no)});
  }
  return set;
}

}  // namespace ebpois::cli

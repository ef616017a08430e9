#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

namespace ebpois::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

struct Axis {
  double lo = 0.0, hi = 1.0;  // in transformed units
  bool log = false;

  double transform(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

// Round numbers 1, 2, 5 x 10^k spaced to give about `target` ticks.
std::vector<double> linear_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

Axis fit_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!a.usable(v)) continue;
    lo = std::min(lo, a.transform(v));
    hi = std::max(hi, a.transform(v));
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

}  // namespace

std::string render_svg(const CurveSet& set, const SvgOptions& options) {
  const double w = options.width, h = options.height;
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;

  std::vector<double> xs, ys;
  for (const Curve& c : set.curves) {
    for (const CurvePoint& p : c.points) {
      xs.push_back(p.x);
      ys.push_back(p.value);
    }
  }
  const Axis ax = fit_axis(xs, options.log_x);
  const Axis ay = fit_axis(ys, options.log_y);
  auto px = [&](double v) { return left + (ax.transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return top + ph - (ay.transform(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width
     << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
     << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(options.title) << "</text>\n";
  }
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks: decades on log axes, round steps otherwise.
  auto ticks_for = [](const Axis& a) {
    if (!a.log) return linear_ticks(a.lo, a.hi, 6);
    std::vector<double> t;
    for (double e = std::ceil(a.lo); e <= std::floor(a.hi) + 1e-12; e += 1.0) t.push_back(e);
    if (t.size() < 2) t = linear_ticks(a.lo, a.hi, 4);
    return t;
  };
  for (double t : ticks_for(ax)) {
    const double value = ax.log ? std::pow(10.0, t) : t;
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 19)
       << "\" text-anchor=\"middle\">" << tick_label(value) << "</text>\n";
  }
  for (double t : ticks_for(ay)) {
    const double value = ay.log ? std::pow(10.0, t) : t;
    const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left)
       << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw)
       << "\" y2=\"" << num(y) << "\" stroke=\"#e0e0e0\"/>\n"
       << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\">" << tick_label(value) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(h - 16)
     << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n"
     << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << num(top + ph / 2) << ")\">" << escape(options.y_label) << "</text>\n";

  for (std::size_t i = 0; i < set.curves.size(); ++i) {
    const Curve& c = set.curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::vector<std::string> runs(1);
    for (const CurvePoint& p : c.points) {
      if (!ax.usable(p.x) || !ay.usable(p.value)) {
        if (!runs.back().empty()) runs.emplace_back();
        continue;
      }
      runs.back() += (runs.back().empty() ? "" : " ") + num(px(p.x)) + "," + num(py(p.value));
    }
    for (const std::string& r : runs) {
      if (r.empty()) continue;
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"" << r
         << "\"/>\n";
    }
    const double ly = top + 16 + 20 * static_cast<double>(i);
    os << "<line x1=\"" << num(left + pw + 14) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
       << num(left + pw + 38) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << num(left + pw + 44) << "\" y=\"" << num(ly) << "\">" << escape(c.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ebpois::cli

#include "ebpois/hyper.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

#include "overloaded.hpp"

namespace ebpois {

using detail::overloaded;

std::string to_string(const HyperRule& rule) {
  return std::visit(overloaded{[](const MomentRule& m) {
                                 std::ostringstream os;
                                 os << "moment(b=" << m.b << ")";
                                 return os.str();
                               },
                               [](const MleRule&) { return std::string("mle"); },
                               [](const UreRule&) { return std::string("ure"); }},
                    rule);
}

double alpha_mle(std::int64_t sum_x, double r, int d) {
  if (sum_x == 0)
    throw UndefinedEstimatorError("alpha_mle: the MLE of alpha is undefined when sum x = 0");
  if (sum_x < 0) throw DomainError("alpha_mle: sum_x must be non-negative");
  if (!(r > 0.0)) throw DomainError("alpha_mle: r must be positive");
  if (d < 1) throw DomainError("alpha_mle: d must be positive");
  return r * d / (2.0 * static_cast<double>(sum_x));
}

bool moment_dominance_guaranteed(double b, int d) { return d >= 3 && b > 0.0 && b <= d - 2; }

double natural_moment_b(int d) { return 0.5 * d - 1.0; }

double ure_value(double alpha, const Counts& x, const ModelConfig& cfg) {
  cfg.validate();
  x.require_dim(cfg, "ure_value");
  if (!(alpha > 0.0)) throw DomainError("ure_value: alpha must be positive");
  const double r = cfg.r, s = cfg.s;
  const double log_shrink = std::log((r + alpha) / (r + s + alpha));
  const double log_total = std::log(r + s + alpha);
  double u = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = static_cast<double>(x[i]);
    u += -(xi + 0.5) * log_shrink + (s / r) * xi * log_total;
  }
  return u;
}

double ure_slope(double alpha, const Counts& x, const ModelConfig& cfg) {
  const double r = cfg.r, s = cfg.s;
  const double d_shrink = 1.0 / (r + alpha) - 1.0 / (r + s + alpha);
  const double d_total = 1.0 / (r + s + alpha);
  double slope = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = static_cast<double>(x[i]);
    slope += -(xi + 0.5) * d_shrink + (s / r) * xi * d_total;
  }
  return slope;
}

double ure_argmin_numeric(const Counts& x, const ModelConfig& cfg) {
  cfg.validate();
  x.require_dim(cfg, "ure_argmin_numeric");
  if (x.sum() == 0)
    throw UndefinedEstimatorError("ure_argmin: U(alpha) has no minimiser when sum x = 0");
  // U' < 0 near 0 and > 0 for large alpha; bracket in log space and bisect.
  double lo = std::log(1e-300), hi = std::log(1e300);
  while (ure_slope(std::exp(hi), x, cfg) <= 0.0) hi += 10.0;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ure_slope(std::exp(mid), x, cfg) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double ure_argmin(const Counts& x, const ModelConfig& cfg) {
  cfg.validate();
  x.require_dim(cfg, "ure_argmin");
  if (x.sum() == 0)
    throw UndefinedEstimatorError("ure_argmin: U(alpha) has no minimiser when sum x = 0");
  const double alpha = alpha_mle(x.sum(), cfg.r, cfg.d);
#ifndef NDEBUG
  const double numeric = ure_argmin_numeric(x, cfg);
  assert(std::abs(numeric - alpha) <= 1e-8 * alpha);
#endif
  return alpha;
}

AlphaEstimate estimate_alpha(const HyperRule& rule, const Counts& x, const ModelConfig& cfg) {
  cfg.validate();
  x.require_dim(cfg, "estimate_alpha");
  return std::visit(
      overloaded{[&](const MomentRule& m) {
                   return AlphaEstimate{alpha_moment(x.sum(), cfg.r, m.b),
                                        !moment_dominance_guaranteed(m.b, cfg.d)};
                 },
                 [&](const MleRule&) { return AlphaEstimate{alpha_mle(x.sum(), cfg.r, cfg.d), false}; },
                 [&](const UreRule&) { return AlphaEstimate{ure_argmin(x, cfg), false}; }},
      rule);
}

}  // namespace ebpois

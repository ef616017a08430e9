#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ebpois/errors.hpp"

namespace ebpois {

enum class QuadratureScheme { AdaptiveSimpson, GaussKronrod15 };

struct QuadraturePolicy {
  double abs_tol = 1e-9;
  std::int64_t max_subdivisions = 100'000;
  QuadratureScheme scheme = QuadratureScheme::AdaptiveSimpson;
  // Every panel is bisected at least this many times before the local error
  // test is trusted; guards against integrands that look flat on a coarse
  // sample.
  int min_depth = 2;

  void validate() const;

  QuadraturePolicy with_tol(double tol) const {
    QuadraturePolicy p = *this;
    p.abs_tol = tol;
    return p;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double err_bound = 0.0;
  std::int64_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Integral of f over [breakpoints.front(), breakpoints.back()], treating each
/// consecutive pair as an initial panel. The tolerance is shared between
/// panels in proportion to their width.
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadraturePolicy& policy);

inline QuadratureResult integrate(const Integrand& f, double a, double b,
                                  const QuadraturePolicy& policy) {
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts, 2), policy);
}

}  // namespace ebpois

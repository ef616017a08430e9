#include "ebpois/special_fns.hpp"

#include <sstream>

namespace ebpois {

void SeriesPolicy::validate() const {
  if (!(tail_tol > 0.0)) throw DomainError("SeriesPolicy: tail_tol must be positive");
  if (max_terms < 1) throw DomainError("SeriesPolicy: max_terms must be at least 1");
  if (!(growth.constant >= 0.0) || !(growth.log_slope >= 0.0) || !(growth.power >= 0.0))
    throw DomainError("SeriesPolicy: growth bound coefficients must be non-negative");
}

double log_gamma(double z) {
  if (!std::isfinite(z) || !(z > 0.0)) {
    std::ostringstream msg;
    msg << "log_gamma: argument must be positive and finite, got " << z;
    throw DomainError(msg.str());
  }
  // lgamma_r leaves the global signgam alone, so this stays reentrant.
  int sign = 0;
  return ::lgamma_r(z, &sign);
}

double poisson_log_pmf(std::int64_t k, double m) {
  if (k < 0) throw DomainError("poisson_log_pmf: k must be non-negative");
  detail::check_poisson_mean(m);
  if (k == 0) return -m;
  const double kd = static_cast<double>(k);
  return kd * std::log(m) - m - log_gamma(kd + 1.0);
}

namespace detail {

void check_poisson_mean(double m) {
  if (!std::isfinite(m) || !(m > 0.0)) {
    std::ostringstream msg;
    msg << "Poisson mean must be positive and finite, got " << m;
    throw DomainError(msg.str());
  }
}

void throw_certificate_violation(std::int64_t x, double hx, double envelope) {
  std::ostringstream msg;
  msg << "poisson_expectation: |h(" << x << ")| = " << std::abs(hx)
      << " exceeds the growth certificate " << envelope;
  throw ContractError(msg.str());
}

void throw_series_cap(double partial, double tail, std::int64_t terms) {
  std::ostringstream msg;
  msg << "poisson_expectation: term cap reached after " << terms
      << " terms with tail bound " << tail;
  throw TruncationError(msg.str(), partial, tail, terms);
}

double right_tail_bound(const GrowthBound& g, double offset, double m, std::int64_t first,
                        double weight_first) {
  const double j0 = static_cast<double>(first);
  const double env_first = g(j0) + offset;
  if (env_first == 0.0 || weight_first == 0.0) return 0.0;

  const double a = g.constant + offset;
  double growth_ratio = 1.0;
  if (g.power > 0.0) growth_ratio *= std::pow(1.0 + 1.0 / (j0 + 1.0), g.power);
  if (g.log_slope > 0.0) {
    const double denom = (j0 + 1.0) * (a + g.log_slope * std::log1p(j0));
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    growth_ratio *= 1.0 + g.log_slope / denom;
  }
  const double rho = m / (j0 + 1.0) * growth_ratio;
  double bound = rho < 1.0 ? env_first * weight_first / (1.0 - rho)
                           : std::numeric_limits<double>::infinity();

  // Chernoff: P(X >= K) <= e^{-m} (e m / K)^K for K > m; usable when the
  // envelope is flat.
  if (g.log_slope == 0.0 && g.power == 0.0 && j0 > m) {
    const double log_p = -m + j0 * (1.0 + std::log(m) - std::log(j0));
    bound = std::min(bound, a * std::exp(log_p));
  }
  return bound;
}

double left_tail_bound(const GrowthBound& g, double offset, double m, std::int64_t last,
                       double weight_last) {
  const double j1 = static_cast<double>(last);
  if (weight_last == 0.0) return 0.0;
  const double ratio = j1 / m;
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return (g(j1) + offset) * weight_last / (1.0 - ratio);
}

double rounding_allowance(double m, std::int64_t terms, double signed_sum, double abs_sum,
                          double h0) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // The mode weight carries a relative error proportional to the magnitude of
  // the terms cancelled inside its logarithm; it rescales every weight alike.
  const double mode_rel = eps * (4.0 + 2.0 * m * (1.0 + std::abs(std::log(m))));
  // The recurrence adds about one ulp per step away from the mode.
  const double step_rel = eps * (4.0 + 2.0 * static_cast<double>(terms));
  return mode_rel * std::abs(signed_sum) + step_rel * abs_sum + 4.0 * eps * std::abs(h0);
}

}  // namespace detail
}  // namespace ebpois

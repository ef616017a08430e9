#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "ebpois/errors.hpp"

namespace ebpois {

/// Envelope certifying |h(x)| <= (constant + log_slope * ln(1 + x)) * (1 + x)^power
/// for every x >= 0. The power term is zero for most summands; it is needed for
/// expectations of ln Gamma, which grow like x ln x.
struct GrowthBound {
  double constant = 1.0;
  double log_slope = 0.0;
  double power = 0.0;

  double operator()(double x) const {
    const double base = constant + log_slope * std::log1p(x);
    return power == 0.0 ? base : base * std::pow(1.0 + x, power);
  }
};

/// Truncation control for Poisson-weighted series.
struct SeriesPolicy {
  double tail_tol = 1e-12;
  std::int64_t max_terms = 10'000'000;
  GrowthBound growth{};

  void validate() const;

  SeriesPolicy with_growth(GrowthBound g) const {
    SeriesPolicy p = *this;
    p.growth = g;
    return p;
  }
  SeriesPolicy with_tol(double tol) const {
    SeriesPolicy p = *this;
    p.tail_tol = tol;
    return p;
  }
};

struct SeriesResult {
  double value = 0.0;
  double err_bound = 0.0;  // certified tail mass plus a rounding allowance
  std::int64_t terms = 0;
};

/// ln Gamma(z) for z > 0.
double log_gamma(double z);

/// ln of the Po(m) mass at k: k ln m - m - ln k!.
double poisson_log_pmf(std::int64_t k, double m);

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

void check_poisson_mean(double m);
[[noreturn]] void throw_certificate_violation(std::int64_t x, double hx, double envelope);
[[noreturn]] void throw_series_cap(double partial, double tail, std::int64_t terms);

// Bound on sum_{j >= first} env(j) Po(m){j}, where weight_first = Po(m){first}
// and env is the growth envelope shifted by `offset`. Infinity if first is
// still too close to m for the geometric ratio to be below one.
double right_tail_bound(const GrowthBound& g, double offset, double m, std::int64_t first,
                        double weight_first);

// Bound on sum_{j <= last} env(j) Po(m){j}; requires last < m.
double left_tail_bound(const GrowthBound& g, double offset, double m, std::int64_t last,
                       double weight_last);

double rounding_allowance(double m, std::int64_t terms, double signed_sum, double abs_sum,
                          double h0);

inline void check_envelope(const GrowthBound& g, std::int64_t x, double hx) {
  const double env = g(static_cast<double>(x));
  if (!(std::abs(hx) <= env * (1.0 + 1e-9) + 1e-300)) throw_certificate_violation(x, hx, env);
}

}  // namespace detail

/// E[h(x)] for x ~ Po(m), summed outward from the mode until both tails are
/// certified below policy.tail_tol / 2 using policy.growth as the envelope
/// of |h|. Terms are accumulated as w(x) (h(x) - h(mode)) so that large
/// nearly-constant summands do not amplify weight rounding.
///
/// Throws DomainError for m <= 0, ContractError when h breaks its growth
/// certificate at an evaluated point, and TruncationError if max_terms is
/// exhausted first.
template <class H>
SeriesResult poisson_expectation(H&& h, double m, const SeriesPolicy& policy) {
  detail::check_poisson_mean(m);
  policy.validate();

  const GrowthBound& growth = policy.growth;
  const double half_tol = 0.5 * policy.tail_tol;
  const auto mode = static_cast<std::int64_t>(std::floor(m));
  const double w_mode = std::exp(poisson_log_pmf(mode, m));

  const double h0 = h(mode);
  if (!std::isfinite(h0)) throw DomainError("poisson_expectation: summand is not finite");
  detail::check_envelope(growth, mode, h0);
  const double offset = std::abs(h0);

  CompensatedSum sum;
  double abs_sum = 0.0;
  std::int64_t terms = 1;

  auto accumulate = [&](std::int64_t x, double w) {
    const double hx = h(x);
    if (!std::isfinite(hx)) throw DomainError("poisson_expectation: summand is not finite");
    detail::check_envelope(growth, x, hx);
    const double term = w * (hx - h0);
    sum.add(term);
    abs_sum += std::abs(term);
    ++terms;
  };

  double right_tail = 0.0;
  {
    double w = w_mode;
    std::int64_t x = mode;
    for (;;) {
      const double w_next = w * m / static_cast<double>(x + 1);
      right_tail = detail::right_tail_bound(growth, offset, m, x + 1, w_next);
      if (right_tail <= half_tol) break;
      if (terms >= policy.max_terms) detail::throw_series_cap(h0 + sum.value(), right_tail, terms);
      ++x;
      w = w_next;
      accumulate(x, w);
    }
  }

  double left_tail = 0.0;
  {
    double w = w_mode;
    std::int64_t x = mode;
    while (x > 0) {
      const double w_prev = w * static_cast<double>(x) / m;
      left_tail = detail::left_tail_bound(growth, offset, m, x - 1, w_prev);
      if (left_tail <= half_tol) break;
      if (terms >= policy.max_terms)
        detail::throw_series_cap(h0 + sum.value(), left_tail + right_tail, terms);
      --x;
      w = w_prev;
      accumulate(x, w);
    }
    if (x == 0) left_tail = 0.0;
  }

  SeriesResult out;
  out.value = h0 + sum.value();
  out.err_bound = left_tail + right_tail + detail::rounding_allowance(m, terms, sum.value(), abs_sum, h0);
  out.terms = terms;
  return out;
}

}  // namespace ebpois

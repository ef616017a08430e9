#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "ebpois/model.hpp"

namespace ebpois {

/// alpha = r b / (sum x + 1).
struct MomentRule {
  double b = 0.5;
};
/// Marginal maximum likelihood, alpha = r d / (2 sum x).
struct MleRule {};
/// Minimiser of the unbiased K-L risk estimate U(alpha).
struct UreRule {};

using HyperRule = std::variant<MomentRule, MleRule, UreRule>;

std::string to_string(const HyperRule& rule);

struct AlphaEstimate {
  double alpha = 0.0;
  // Set for moment rules with b outside (0, d - 2] (or d < 3), where the
  // resulting predictive is not guaranteed to dominate the Jeffreys one.
  bool outside_dominance_range = false;
};

template <class Scalar>
Scalar alpha_moment(std::int64_t sum_x, Scalar r, Scalar b) {
  if (!(b > Scalar(0))) throw DomainError("alpha_moment: b must be positive");
  if (!(r > Scalar(0))) throw DomainError("alpha_moment: r must be positive");
  if (sum_x < 0) throw DomainError("alpha_moment: sum_x must be non-negative");
  return r * b / (static_cast<Scalar>(sum_x) + Scalar(1));
}

/// Throws UndefinedEstimatorError when sum_x == 0.
double alpha_mle(std::int64_t sum_x, double r, int d);

bool moment_dominance_guaranteed(double b, int d);

/// b = d/2 - 1, the moment-matching choice under the gamma prior.
double natural_moment_b(int d);

/// Log marginal likelihood of alpha up to alpha-free terms:
/// (d/2) ln alpha - (sum x + d/2) ln(r + alpha).
template <class Scalar>
Scalar log_marginal_alpha(Scalar alpha, std::int64_t sum_x, Scalar r, int d) {
  using std::log;
  const Scalar half_d = Scalar(d) / Scalar(2);
  return half_d * log(alpha) - (static_cast<Scalar>(sum_x) + half_d) * log(r + alpha);
}

/// U(alpha) = sum_i [-(x_i + 1/2) ln((r+alpha)/(r+s+alpha)) + (s/r) x_i ln(r+s+alpha)].
double ure_value(double alpha, const Counts& x, const ModelConfig& cfg);

/// dU/dalpha, accumulated coordinate by coordinate.
double ure_slope(double alpha, const Counts& x, const ModelConfig& cfg);

/// Minimiser of U; returns r d / (2 sum x). Debug builds cross-check against
/// ure_argmin_numeric. Throws UndefinedEstimatorError when sum x == 0 (U is
/// then strictly decreasing).
double ure_argmin(const Counts& x, const ModelConfig& cfg);

/// Minimiser of U found by bisecting the sign of ure_slope in log alpha.
double ure_argmin_numeric(const Counts& x, const ModelConfig& cfg);

/// Evaluates the rule on x. MLE and URE throw UndefinedEstimatorError when
/// sum x == 0.
AlphaEstimate estimate_alpha(const HyperRule& rule, const Counts& x, const ModelConfig& cfg);

}  // namespace ebpois

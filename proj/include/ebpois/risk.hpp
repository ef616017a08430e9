#pragma once

#include <variant>

#include <Eigen/Core>

#include "ebpois/model.hpp"
#include "ebpois/quadrature.hpp"
#include "ebpois/special_fns.hpp"

namespace ebpois {

/// A risk value in nats together with where it was evaluated: either the
/// total rate mu = sum lambda_i or a full lambda vector.
struct RiskPoint {
  std::variant<double, Eigen::VectorXd> at;
  double value = 0.0;
  double err_bound = 0.0;

  bool has_mu() const { return std::holds_alternative<double>(at); }
  double mu() const { return std::get<double>(at); }
  const Eigen::VectorXd& lambda() const { return std::get<Eigen::VectorXd>(at); }
};

/// 0.5 d ln((r+s)/r), the minimax lower bound.
double minimax_lower_bound(const ModelConfig& cfg);
/// 0.52 d ln((r+s)/r), the upper bound on the Jeffreys risk.
double jeffreys_risk_upper_bound(const ModelConfig& cfg);

/// Log-spaced grid of n points from lo to hi inclusive.
Eigen::VectorXd log_grid(double lo, double hi, int n);

// ---- the f function and its derivative ------------------------------------

/// f(lambda) = lambda E[ln((x + 1/2) / lambda)], x ~ Po(lambda).
SeriesResult f_shrink(double lambda, const SeriesPolicy& policy = {});

/// The 21-term lower sum sum_{x=0}^{20} ln(x + 1/2) Po(lambda){x} lambda - lambda ln lambda.
double truncated_f(double lambda);

/// g(lambda) = d/dlambda [f(lambda)/lambda] = E[ln((x + 3/2)/(x + 1/2))] - 1/lambda.
SeriesResult g_deriv(double lambda, const SeriesPolicy& policy = {});

/// Lower and upper envelopes for g valid for lambda > 1.
double g_lower_envelope(double lambda);  // 0.09 e^-l - e^-l / l
double g_upper_envelope(double lambda);  // 0.06 e^-l - e^-l / l + 0.26 / l^3

// ---- risks ----------------------------------------------------------------

/// K-L risk of the Jeffreys predictive from the closed per-coordinate
/// expression involving E[ln Gamma(z + 1/2)] under Po((r+s) lambda_i) and
/// Po(r lambda_i).
RiskPoint risk_jeffreys_direct(const Eigen::VectorXd& lambda, const ModelConfig& cfg,
                               const SeriesPolicy& policy = {});

/// Same risk via int_r^{r+s} sum_i (1/(2t) - f(t lambda_i)/t) dt.
RiskPoint risk_jeffreys_integral(const Eigen::VectorXd& lambda, const ModelConfig& cfg,
                                 const SeriesPolicy& policy = {},
                                 const QuadraturePolicy& quad = {});

/// Risk(p_J) - Risk(p_alpha) for the moment rule alpha = r b / (X + 1), as a
/// single expectation over X ~ Po(r mu). Positive means the empirical-Bayes
/// predictive is better.
RiskPoint risk_diff_eb(double mu, double b, const ModelConfig& cfg,
                       const SeriesPolicy& policy = {});

/// The same difference as a double series over X ~ Po(r mu), Y ~ Po(s mu),
/// before Y is eliminated.
RiskPoint risk_diff_eb_unreduced(double mu, double b, const ModelConfig& cfg,
                                 const SeriesPolicy& policy = {});

/// Risk(p_J) - Risk(p_S) as a double series over X ~ Po(r mu), Y ~ Po(s mu).
RiskPoint risk_diff_shrinkage(double mu, const ModelConfig& cfg,
                              const SeriesPolicy& policy = {});

/// Same as risk_diff_shrinkage, reduced to two single series using
/// X + Y ~ Po((r+s) mu).
RiskPoint risk_diff_shrinkage_reduced(double mu, const ModelConfig& cfg,
                                      const SeriesPolicy& policy = {});

/// ln p_S(y|x) - ln p_J(y|x); depends on the totals X, Y only.
double shrinkage_jeffreys_log_ratio(std::int64_t big_x, std::int64_t big_y,
                                    const ModelConfig& cfg);

/// Risk of the moment-rule empirical-Bayes predictive: Jeffreys risk at
/// lambda minus risk_diff_eb at sum lambda.
RiskPoint risk_eb(const Eigen::VectorXd& lambda, double b, const ModelConfig& cfg,
                  const SeriesPolicy& policy = {});

/// risk_eb at the symmetric point lambda_i = mu / d.
RiskPoint risk_eb(double mu, double b, const ModelConfig& cfg, const SeriesPolicy& policy = {});

struct BayesRiskGap {
  double left = 0.0;   // E_pi_n[Risk(p_J)]
  double right = 0.0;  // E_pi_n[ln p_J / p_pi_n]
  double total = 0.0;  // Bayes risk of p_pi_n
  double err_bound = 0.0;
};

/// Bayes risk of the Bayes rule under pi_n = prod Gamma(1/2, rate 1/n),
/// split as risk of p_J plus the excess of p_J over p_pi_n.
BayesRiskGap bayes_risk_gap(double n, const ModelConfig& cfg, const SeriesPolicy& policy = {},
                            const QuadraturePolicy& quad = {});

}  // namespace ebpois

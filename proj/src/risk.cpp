#include "ebpois/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ebpois {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kEulerGamma = std::numbers::egamma;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

void require_lambda(const Eigen::VectorXd& lambda, const ModelConfig& cfg, const char* what) {
  cfg.validate();
  if (lambda.size() != cfg.d)
    throw ContractError(std::string(what) + ": lambda has the wrong length");
  for (Eigen::Index i = 0; i < lambda.size(); ++i) require_positive(lambda(i), "lambda_i");
}

// ln((x + 1/2) / lambda), keeping precision when the ratio is near one.
double log_ratio_half(double x, double lambda) {
  const double ratio = (x + 0.5) / lambda;
  if (ratio > 0.5 && ratio < 2.0) return std::log1p((x + 0.5 - lambda) / lambda);
  return std::log(ratio);
}

// ln Gamma(z + a) - ln Gamma(z + 1) for integer z >= 0.
double gamma_shift(double z, double a) { return log_gamma(z + a) - log_gamma(z + 1.0); }

// Certificate for |ln Gamma(z + 1/2)| <= (1 + ln(1 + z)) (1 + z).
constexpr GrowthBound kLogGammaHalfGrowth{1.0, 1.0, 1.0};

}  // namespace

double minimax_lower_bound(const ModelConfig& cfg) {
  cfg.validate();
  return 0.5 * cfg.d * cfg.log_ratio();
}

double jeffreys_risk_upper_bound(const ModelConfig& cfg) {
  cfg.validate();
  return 0.52 * cfg.d * cfg.log_ratio();
}

Eigen::VectorXd log_grid(double lo, double hi, int n) {
  require_positive(lo, "log_grid lower end");
  require_positive(hi, "log_grid upper end");
  if (n < 1) throw DomainError("log_grid: need at least one point");
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(n, std::log(lo), std::log(hi)).array().exp();
  g(0) = lo;
  g(n - 1) = hi;
  return g;
}

SeriesResult f_shrink(double lambda, const SeriesPolicy& policy) {
  require_positive(lambda, "f_shrink: lambda");
  const GrowthBound growth{std::abs(std::log(0.5 / lambda)) + std::numbers::ln2, 1.0, 0.0};
  SeriesResult e = poisson_expectation(
      [lambda](std::int64_t x) { return log_ratio_half(static_cast<double>(x), lambda); }, lambda,
      policy.with_growth(growth));
  e.value *= lambda;
  e.err_bound *= lambda;
  return e;
}

double truncated_f(double lambda) {
  require_positive(lambda, "truncated_f: lambda");
  CompensatedSum acc;
  for (int x = 0; x <= 20; ++x) {
    acc.add(std::log(x + 0.5) * std::exp(poisson_log_pmf(x, lambda)) * lambda);
  }
  acc.add(-lambda * std::log(lambda));
  return acc.value();
}

SeriesResult g_deriv(double lambda, const SeriesPolicy& policy) {
  require_positive(lambda, "g_deriv: lambda");
  const GrowthBound growth{std::log(3.0), 0.0, 0.0};
  SeriesResult e = poisson_expectation(
      [](std::int64_t x) { return std::log1p(1.0 / (static_cast<double>(x) + 0.5)); }, lambda,
      policy.with_growth(growth));
  e.value -= 1.0 / lambda;
  e.err_bound += kEps * (std::abs(e.value) + 1.0 / lambda);
  return e;
}

double g_lower_envelope(double lambda) {
  return 0.09 * std::exp(-lambda) - std::exp(-lambda) / lambda;
}

double g_upper_envelope(double lambda) {
  return 0.06 * std::exp(-lambda) - std::exp(-lambda) / lambda + 0.26 / (lambda * lambda * lambda);
}

RiskPoint risk_jeffreys_direct(const Eigen::VectorXd& lambda, const ModelConfig& cfg,
                               const SeriesPolicy& policy) {
  require_lambda(lambda, cfg, "risk_jeffreys_direct");
  const double r = cfg.r, s = cfg.s;
  const SeriesPolicy lg_policy = policy.with_growth(kLogGammaHalfGrowth);
  auto log_gamma_half = [](std::int64_t z) { return log_gamma(static_cast<double>(z) + 0.5); };

  CompensatedSum total;
  double err = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double l = lambda(i);
    const SeriesResult joint = poisson_expectation(log_gamma_half, (r + s) * l, lg_policy);
    const SeriesResult past = poisson_expectation(log_gamma_half, r * l, lg_policy);
    const double closed = -s * l + s * l * std::log((r + s) * l) + (r * l + 0.5) * cfg.log_ratio();
    const double coord = closed - (joint.value - past.value);
    total.add(coord);
    err += joint.err_bound + past.err_bound +
           8.0 * kEps * (std::abs(closed) + std::abs(joint.value) + std::abs(past.value));
  }
  return RiskPoint{lambda, total.value(), err};
}

RiskPoint risk_jeffreys_integral(const Eigen::VectorXd& lambda, const ModelConfig& cfg,
                                 const SeriesPolicy& policy, const QuadraturePolicy& quad) {
  require_lambda(lambda, cfg, "risk_jeffreys_integral");
  std::vector<double> worst_series(static_cast<std::size_t>(lambda.size()), 0.0);
  auto integrand = [&](double t) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const SeriesResult f = f_shrink(t * lambda(i), policy);
      worst_series[static_cast<std::size_t>(i)] =
          std::max(worst_series[static_cast<std::size_t>(i)], f.err_bound);
      acc += 0.5 / t - f.value / t;
    }
    return acc;
  };
  const QuadratureResult q = integrate(integrand, cfg.r, cfg.r + cfg.s, quad);
  double err = q.err_bound;
  for (double w : worst_series) err += w * cfg.log_ratio();
  return RiskPoint{lambda, q.value, err};
}

RiskPoint risk_diff_eb(double mu, double b, const ModelConfig& cfg, const SeriesPolicy& policy) {
  cfg.validate();
  require_positive(mu, "risk_diff_eb: mu");
  require_positive(b, "risk_diff_eb: b");
  const double r = cfg.r, s = cfg.s, half_d = 0.5 * cfg.d;
  const double c = s / (r + s);
  auto summand = [=](std::int64_t big_x) {
    const double x = static_cast<double>(big_x);
    const double past = -(x + half_d) * std::log1p(-c * b / (x + 1.0 + b));
    // The factor X removes the X = 0 term exactly.
    const double future = big_x == 0 ? 0.0 : -(s / r) * x * std::log1p((r / (r + s)) * b / x);
    return past + future;
  };
  const double bound =
      (c * b * std::max(1.0, half_d / (1.0 + b - c * b)) + c * b) * (1.0 + 1e-12);
  const SeriesResult e =
      poisson_expectation(summand, r * mu, policy.with_growth(GrowthBound{bound, 0.0, 0.0}));
  return RiskPoint{mu, e.value, e.err_bound};
}

RiskPoint risk_diff_eb_unreduced(double mu, double b, const ModelConfig& cfg,
                                 const SeriesPolicy& policy) {
  cfg.validate();
  require_positive(mu, "risk_diff_eb_unreduced: mu");
  require_positive(b, "risk_diff_eb_unreduced: b");
  const double r = cfg.r, s = cfg.s, half_d = 0.5 * cfg.d;

  double worst_inner = 0.0;
  auto outer = [&](std::int64_t big_x) {
    const double x = static_cast<double>(big_x);
    const double q = b / (x + 1.0);
    const double log_alpha_gain = std::log1p(q);                // ln((X+1+b)/(X+1))
    const double log_total_gain = std::log1p(r * q / (r + s));  // ln((s + r(X+1+b)/(X+1))/(s+r))
    const double fixed = (x + half_d) * (log_alpha_gain - log_total_gain);
    const GrowthBound inner_growth{(std::abs(fixed) + log_total_gain) * (1.0 + 1e-12), 0.0, 1.0};
    const SeriesResult inner = poisson_expectation(
        [&](std::int64_t big_y) { return fixed - static_cast<double>(big_y) * log_total_gain; },
        s * mu, policy.with_growth(inner_growth));
    worst_inner = std::max(worst_inner, inner.err_bound);
    return inner.value;
  };
  const double outer_bound =
      (b * std::max(1.0, half_d) + s * mu * r * b / (r + s)) * (1.0 + 1e-9) + policy.tail_tol;
  const SeriesResult e =
      poisson_expectation(outer, r * mu, policy.with_growth(GrowthBound{outer_bound, 0.0, 0.0}));
  return RiskPoint{mu, e.value, e.err_bound + worst_inner};
}

double shrinkage_jeffreys_log_ratio(std::int64_t big_x, std::int64_t big_y,
                                    const ModelConfig& cfg) {
  cfg.validate();
  if (cfg.d < 2) throw DomainError("shrinkage predictive requires d >= 2");
  if (big_x < 0 || big_y < 0) throw DomainError("counts must be non-negative");
  if (cfg.d == 2) return 0.0;
  const double a = 0.5 * cfg.d;
  const double x = static_cast<double>(big_x), y = static_cast<double>(big_y);
  return (a - 1.0) * cfg.log_ratio() - gamma_shift(x + y, a) + gamma_shift(x, a);
}

RiskPoint risk_diff_shrinkage(double mu, const ModelConfig& cfg, const SeriesPolicy& policy) {
  cfg.validate();
  require_positive(mu, "risk_diff_shrinkage: mu");
  if (cfg.d < 2) throw DomainError("risk_diff_shrinkage: requires d >= 2");
  if (cfg.d == 2) return RiskPoint{mu, 0.0, 0.0};
  const double a = 0.5 * cfg.d;
  const double base = (a - 1.0) * (cfg.log_ratio() + 2.0 * kEulerGamma + 2.0 * std::log(a));

  double worst_inner = 0.0;
  auto outer = [&](std::int64_t big_x) {
    const double lx = std::log1p(static_cast<double>(big_x));
    const GrowthBound inner_growth{(base + 2.0 * (a - 1.0) * lx) * (1.0 + 1e-9), a - 1.0, 0.0};
    const SeriesResult inner = poisson_expectation(
        [&](std::int64_t big_y) { return shrinkage_jeffreys_log_ratio(big_x, big_y, cfg); },
        cfg.s * mu, policy.with_growth(inner_growth));
    worst_inner = std::max(worst_inner, inner.err_bound);
    return inner.value;
  };
  const GrowthBound outer_growth{
      (base + (a - 1.0) * std::log1p(cfg.s * mu)) * (1.0 + 1e-9) + policy.tail_tol,
      2.0 * (a - 1.0), 0.0};
  const SeriesResult e = poisson_expectation(outer, cfg.r * mu, policy.with_growth(outer_growth));
  return RiskPoint{mu, e.value, e.err_bound + worst_inner};
}

RiskPoint risk_diff_shrinkage_reduced(double mu, const ModelConfig& cfg,
                                      const SeriesPolicy& policy) {
  cfg.validate();
  require_positive(mu, "risk_diff_shrinkage_reduced: mu");
  if (cfg.d < 2) throw DomainError("risk_diff_shrinkage_reduced: requires d >= 2");
  if (cfg.d == 2) return RiskPoint{mu, 0.0, 0.0};
  const double a = 0.5 * cfg.d;
  const GrowthBound growth{(a - 1.0) * (kEulerGamma + std::log(a)) * (1.0 + 1e-9), a - 1.0, 0.0};
  auto shift = [a](std::int64_t z) { return gamma_shift(static_cast<double>(z), a); };
  const SeriesResult joint =
      poisson_expectation(shift, (cfg.r + cfg.s) * mu, policy.with_growth(growth));
  const SeriesResult past = poisson_expectation(shift, cfg.r * mu, policy.with_growth(growth));
  const double value = (a - 1.0) * cfg.log_ratio() - joint.value + past.value;
  return RiskPoint{mu, value, joint.err_bound + past.err_bound};
}

RiskPoint risk_eb(const Eigen::VectorXd& lambda, double b, const ModelConfig& cfg,
                  const SeriesPolicy& policy) {
  const RiskPoint jeffreys = risk_jeffreys_direct(lambda, cfg, policy);
  const RiskPoint diff = risk_diff_eb(lambda.sum(), b, cfg, policy);
  return RiskPoint{lambda, jeffreys.value - diff.value, jeffreys.err_bound + diff.err_bound};
}

RiskPoint risk_eb(double mu, double b, const ModelConfig& cfg, const SeriesPolicy& policy) {
  cfg.validate();
  require_positive(mu, "risk_eb: mu");
  const Eigen::VectorXd lambda = Eigen::VectorXd::Constant(cfg.d, mu / cfg.d);
  RiskPoint p = risk_eb(lambda, b, cfg, policy);
  p.at = mu;
  return p;
}

BayesRiskGap bayes_risk_gap(double n, const ModelConfig& cfg, const SeriesPolicy& policy,
                            const QuadraturePolicy& quad) {
  cfg.validate();
  require_positive(n, "bayes_risk_gap: n");
  quad.validate();
  const double r = cfg.r, s = cfg.s, d = cfg.d;
  const double log_ratio = cfg.log_ratio();

  // With lambda = n u^2 the Gamma(1/2, rate 1/n) law becomes the half-normal
  // density 2 e^{-u^2} / sqrt(pi) on u > 0, free of the endpoint singularity.
  constexpr double kUpper = 6.5;
  const double cut_tail = 0.5 * std::erfc(kUpper);  // |f| <= 1/2
  const double inner_tol = 0.25 * quad.abs_tol / (d * log_ratio);
  const double outer_tol = 0.25 * quad.abs_tol / d;
  const QuadraturePolicy inner_quad = quad.with_tol(inner_tol);
  const QuadraturePolicy outer_quad = quad.with_tol(outer_tol);
  constexpr double kLandmarks[] = {1e-2, 1e-1, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0,
                                   10.0, 20.0, 50.0, 1e2, 1e3, 1e4, 1e5, 1e6};

  double worst_inner = 0.0;
  double worst_series = 0.0;
  auto expected_f = [&](double t) {
    std::vector<double> bp{0.0};
    for (double l : kLandmarks) {
      const double u = std::sqrt(l / (t * n));
      if (u < kUpper) bp.push_back(u);
    }
    bp.push_back(kUpper);
    std::sort(bp.begin(), bp.end());
    auto integrand = [&](double u) {
      const double lam = t * n * u * u;
      if (!(lam > 0.0)) return 0.0;
      const SeriesResult f = f_shrink(lam, policy);
      worst_series = std::max(worst_series, f.err_bound);
      return f.value * std::exp(-u * u) * (2.0 / std::sqrt(std::numbers::pi));
    };
    const QuadratureResult q = integrate(integrand, bp, inner_quad);
    worst_inner = std::max(worst_inner, q.err_bound);
    return q.value;
  };
  const QuadratureResult outer =
      integrate([&](double t) { return expected_f(t) / t; }, r, r + s, outer_quad);

  BayesRiskGap g;
  g.left = 0.5 * d * log_ratio - d * outer.value;
  const double inv_n = 1.0 / n;
  g.right = -(r * 0.5 * d * n + 0.5 * d) * std::log1p(inv_n / r) +
            ((r + s) * 0.5 * d * n + 0.5 * d) * std::log1p(inv_n / (r + s));
  g.total = g.left + g.right;
  g.err_bound = d * (outer.err_bound + log_ratio * (worst_inner + worst_series + cut_tail)) +
                8.0 * kEps * (0.5 * d * log_ratio + d * n * (r + s));
  return g;
}

}  // namespace ebpois

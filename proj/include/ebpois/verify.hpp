#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ebpois/model.hpp"
#include "ebpois/quadrature.hpp"
#include "ebpois/special_fns.hpp"

namespace ebpois {

struct NamedValue {
  std::string name;
  double value = 0.0;
};
using PointTuple = std::vector<NamedValue>;

/// Outcome of one numerical check. min_margin is the smallest observed slack
/// (inequality value minus bound) after the numerical error at that point has
/// been subtracted, so passed == (min_margin > 0).
struct CheckResult {
  std::string name;
  std::string family;
  std::int64_t grid_size = 0;
  double min_margin = 0.0;
  double err_at_worst = 0.0;
  PointTuple worst_point;
  bool passed = false;
  bool guaranteed = true;  // false when the inputs lie outside the proven range
  std::string note;
};

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::int64_t samples = 100000;
  std::vector<std::string> only;  // family names; empty runs everything
  unsigned threads = 0;
  SeriesPolicy series{};
  QuadraturePolicy quad{};
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  VerifyConfig config;
  std::string timestamp;
  std::string version;

  bool all_passed() const;
};

/// Family names accepted by VerifyConfig::only, in execution order.
const std::vector<std::string>& check_families();

// ---- inequality expressions -----------------------------------------------
// Templated so each can be evaluated in double and long double; the gap
// between the two serves as the rounding estimate for the double result.

template <class T>
T lemma2_value(T x, T t, T s) {
  using std::log1p;
  const T shrink = -(x + t + 1) * log1p(-(s / (1 + s)) * (2 * t) / (x + 2 * t + 1));
  const T grow = s * x * log1p((2 * t) / ((1 + s) * x));
  return shrink - grow;
}

/// y ln(1 + a/y) + a^2 / (2(y + a)).
template <class T>
T lemma21_h(T alpha, T y) {
  using std::log1p;
  return y * log1p(alpha / y) + alpha * alpha / (2 * (y + alpha));
}

/// d/dy lemma21_h = -ln(1 - z) - z - z^2/2 with z = a/(y + a).
template <class T>
T lemma21_slope(T alpha, T y) {
  using std::log1p;
  const T z = alpha / (y + alpha);
  return -log1p(-z) - z - z * z / 2;
}

template <class T>
T lemma22_value(T x, T t, T s) {
  const T lead = -s * (1 - s) / (x + 2 * t + 1);
  const T num = (1 - s) * x + t + 1;
  const T den = (x + 2 * t / (1 + s)) * ((x + t + 1) / s + 2 * t / (1 + s));
  return lead + num / den;
}

template <class T>
T lemma23_value(T x, T t, T s) {
  using std::log1p;
  const T sp = 1 + s;
  const T first = (2 / (sp * sp)) * t / (x + 2 * t + 1 - 2 * s * t / sp);
  const T second = (2 * s / (sp * sp)) * t / (x + t + 1 + 2 * t / sp);
  return first + second - log1p(2 * t / (sp * (x + t + 1)));
}

struct LemmaSample {
  double x = 1.0;
  double t = 1.0;
  double s = 1.0;
};

/// n samples with x, t log-uniform on [1e-3, 1e3] and s log-uniform on
/// [s_lo, s_hi], reproducible from seed.
std::vector<LemmaSample> lemma_samples(std::size_t n, double s_lo, double s_hi,
                                       std::uint64_t seed);

// ---- checkers (record failures, never throw on a violated inequality) ------

/// f(3) > 0, f(4) > -0.0082, f(5) > -0.011, the truncated sums below them,
/// and the location and depth of the minimum of f on (0, 20] at step 0.01.
CheckResult check_f_regression(const SeriesPolicy& policy = {}, unsigned threads = 0);

/// Dense grid on (0, 100] with fine sub-grids around 0.5, 1, 3, 4, 5, 7.
std::vector<double> default_lemma1_grid();

/// f(l) > -0.02 on the grid and, for l > 1, the two envelopes around g.
CheckResult check_lemma1_bounds(std::span<const double> grid, const SeriesPolicy& policy = {},
                                unsigned threads = 0);

CheckResult check_lemma2(std::span<const LemmaSample> samples, unsigned threads = 0);

/// Monotonicity of lemma21_h along each ascending grid, positivity of its
/// slope at random (alpha, y) pairs (taken from the x, t fields), and
/// h(1e6 alpha) within 1e-3 alpha below alpha.
CheckResult check_lemma21(std::span<const double> alphas,
                          std::span<const std::vector<double>> y_grids,
                          std::span<const LemmaSample> slope_samples, unsigned threads = 0);

/// Requires 0 < s <= 1 in every sample.
CheckResult check_lemma22(std::span<const LemmaSample> samples, unsigned threads = 0);

/// Requires s >= 1 in every sample.
CheckResult check_lemma23(std::span<const LemmaSample> samples, unsigned threads = 0);

/// Equal-coordinate vectors on a log grid over [1e-3, 200], points where
/// t lambda sits at the minimum of f, and seeded random vectors.
std::vector<Eigen::VectorXd> default_theorem1_grid(const ModelConfig& cfg, std::uint64_t seed);

/// 0 < risk_jeffreys_direct < 0.52 d ln((r+s)/r) at every vector.
CheckResult check_theorem1(std::span<const Eigen::VectorXd> grid, const ModelConfig& cfg,
                           const SeriesPolicy& policy = {}, unsigned threads = 0);

/// The distance of the Bayes risk of p_pi_n from the minimax bound decreases
/// along n_grid and ends below a tenth of its first value; every total stays
/// below 0.52 d ln((r+s)/r).
CheckResult check_theorem2(std::span<const double> n_grid, const ModelConfig& cfg,
                           const SeriesPolicy& policy = {}, const QuadraturePolicy& quad = {},
                           unsigned threads = 0);

/// risk_diff_eb(mu, b) > err_bound over mu_grid. Inputs outside 0 < b <= d-2
/// are evaluated but labeled guaranteed = false.
CheckResult check_theorem3(std::span<const double> mu_grid, double b, const ModelConfig& cfg,
                           const SeriesPolicy& policy = {}, unsigned threads = 0);

/// risk_diff_eb vs risk_diff_eb_unreduced (within 1e-9) and
/// risk_diff_shrinkage vs its reduced form.
CheckResult check_reduction_identity(const SeriesPolicy& policy = {}, unsigned threads = 0);

/// |risk_jeffreys_direct - risk_jeffreys_integral| < 1e-6 for d in {1,3,8},
/// lambda_i in {0.1, 1, 10}, (r,s) in {(1,1),(2,1),(1,3)}.
CheckResult check_method_agreement(const SeriesPolicy& policy = {},
                                   const QuadraturePolicy& quad = {}, unsigned threads = 0);

/// Ordering of the d = 3 risk-difference curves: eb(b=1) on top for mu <= 3,
/// at the bottom for mu >= 4.5, and eb(b=0.5) above shrinkage near mu = 3.
CheckResult check_figure2_order(const SeriesPolicy& policy = {}, unsigned threads = 0);

/// ure_argmin_numeric == alpha_mle to 1e-8 relative over d in {1,3,8},
/// r, s in {0.5,1,2}, sum x in 1..20.
CheckResult check_hyper_consistency(unsigned threads = 0);

/// Runs the selected families with default grids. Unknown family names throw
/// ContractError.
VerificationReport run_all(const VerifyConfig& config = {});

std::string report_json(const VerificationReport& report);
std::string report_text(const VerificationReport& report);

}  // namespace ebpois

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "ebpois/predictive.hpp"
#include "ebpois/risk.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ebpois;

namespace {

ModelConfig config(int d, double r = 1.0, double s = 1.0) {
  ModelConfig cfg;
  cfg.d = d;
  cfg.r = r;
  cfg.s = s;
  return cfg;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const double kLn2 = std::numbers::ln2;

}  // namespace

TEST_CASE("f at the tabulated points") {
  CHECK(f_shrink(0.25).value >= 0.0);
  const SeriesResult f3 = f_shrink(3.0), f4 = f_shrink(4.0), f5 = f_shrink(5.0);
  CHECK(f3.value - f3.err_bound > 0.0);
  CHECK(f4.value - f4.err_bound > -0.0082);
  CHECK(f5.value - f5.err_bound > -0.011);
  CHECK(std::abs(f_shrink(1000.0).value) < 0.005);

  // f above its truncated lower sum, which clears the same thresholds.
  CHECK(truncated_f(3.0) > 0.0);
  CHECK(truncated_f(4.0) > -0.0082);
  CHECK(truncated_f(5.0) > -0.011);
  for (double l : {3.0, 4.0, 5.0}) CHECK(f_shrink(l).value >= truncated_f(l));
}

TEST_CASE("f agrees with a long double reference sum") {
  for (double l : {1e-3, 0.1, 0.5, 1.0, 2.5, 5.0, 17.0, 60.0, 300.0}) {
    const SeriesResult f = f_shrink(l);
    CAPTURE(l);
    CHECK(std::abs(f.value - static_cast<double>(oracle::f_value(l))) <= f.err_bound + 1e-13);
  }
}

TEST_CASE("g is very negative near zero and sits between its envelopes") {
  CHECK(g_deriv(0.01).value < -90.0);
  for (double l = 1.5; l <= 100.0; l += 0.25) {
    const SeriesResult g = g_deriv(l);
    CAPTURE(l);
    CHECK(g.value - g.err_bound > g_lower_envelope(l));
    CHECK(g.value + g.err_bound < g_upper_envelope(l));
  }
}

TEST_CASE("g is the derivative of f / lambda") {
  for (double l : {0.3, 1.0, 4.0, 12.0}) {
    const double h = 1e-4 * l;
    const double fd = (f_shrink(l + h).value / (l + h) - f_shrink(l - h).value / (l - h)) / (2 * h);
    CHECK(g_deriv(l).value == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("Jeffreys risk matches direct enumeration of the divergence") {
  for (double l : {0.05, 0.7, 3.0, 25.0}) {
    for (auto [r, s] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
      const ModelConfig cfg = config(1, r, s);
      const long double want = oracle::kl_risk_1d(l, r, s, [&](std::int64_t x, std::int64_t y) {
        return static_cast<long double>(jeffreys_log_pred(Counts{x}, Counts{y}, cfg));
      });
      const RiskPoint got = risk_jeffreys_direct(vec({l}), cfg);
      CAPTURE(l);
      CHECK(std::abs(got.value - static_cast<double>(want)) <= got.err_bound + 1e-10);
    }
  }
}

TEST_CASE("Jeffreys risk examples and bounds") {
  const ModelConfig one = config(1);
  CHECK(risk_jeffreys_direct(vec({100.0}), one).value == doctest::Approx(0.5 * kLn2).epsilon(0.01 / (0.5 * kLn2)));
  CHECK(risk_jeffreys_integral(vec({0.25}), one).value <= 0.5 * kLn2);
  const RiskPoint a = risk_jeffreys_direct(vec({100.0}), one), b = risk_jeffreys_integral(vec({100.0}), one);
  CHECK(std::abs(a.value - b.value) < 1e-6);
  CHECK_FALSE(a.has_mu());
  CHECK(a.lambda()(0) == 100.0);

  const std::string failure = gen::for_all(60, 31, [](gen::Gen& g) -> std::string {
    const int d = static_cast<int>(g.integer(1, 4));
    const ModelConfig cfg = config(d, g.log_uniform(0.2, 5), g.log_uniform(0.2, 5));
    Eigen::VectorXd lambda(d);
    for (int i = 0; i < d; ++i) lambda(i) = g.log_uniform(1e-3, 200);
    const RiskPoint direct = risk_jeffreys_direct(lambda, cfg);
    const RiskPoint integral = risk_jeffreys_integral(lambda, cfg);
    if (!(direct.value > 0 && direct.value < jeffreys_risk_upper_bound(cfg)))
      return "outside (0, 0.52 d ln) at d=" + std::to_string(d);
    if (std::abs(direct.value - integral.value) >= 1e-6) return "methods disagree at d=" + std::to_string(d);
    return {};
  });
  CHECK_MESSAGE(failure.empty(), failure);
}

TEST_CASE("Jeffreys risk is invariant under (r, s, lambda) -> (c r, c s, lambda / c)") {
  for (double c : {0.25, 3.0, 40.0}) {
    const Eigen::VectorXd lambda = vec({0.4, 2.0, 9.0});
    const double base = risk_jeffreys_integral(lambda, config(3, 1.0, 2.0)).value;
    const double scaled = risk_jeffreys_integral(lambda / c, config(3, c, 2.0 * c)).value;
    CHECK(std::abs(base - scaled) < 1e-8);
  }
}

TEST_CASE("empirical-Bayes risk difference") {
  const ModelConfig three = config(3);
  const RiskPoint small = risk_diff_eb(1e-6, 0.5, three);
  CHECK(small.has_mu());
  CHECK(std::abs(small.value - 1.5 * std::log(1.2)) < 1e-5);
  CHECK(std::abs(risk_diff_eb_unreduced(1e-6, 0.5, three).value - 1.5 * std::log(1.2)) < 1e-5);
  CHECK(risk_diff_eb(1000.0, 0.5, three).value < 1e-2);
  CHECK(risk_diff_eb(1000.0, 0.5, three).value < risk_diff_eb(100.0, 0.5, three).value);

  for (int d : {3, 5, 8}) {
    const ModelConfig cfg = config(d);
    for (double b : {0.5, d / 2.0 - 1.0, d - 2.0}) {
      for (double mu : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const RiskPoint p = risk_diff_eb(mu, b, cfg);
        CAPTURE(d);
        CAPTURE(b);
        CAPTURE(mu);
        CHECK(p.value > p.err_bound);
      }
    }
  }
}

TEST_CASE("reduced and unreduced risk differences agree") {
  for (int d : {3, 8}) {
    const ModelConfig cfg = config(d);
    for (double mu : {0.5, 2.0, 10.0}) {
      const RiskPoint a = risk_diff_eb(mu, d / 2.0 - 1.0, cfg);
      const RiskPoint b = risk_diff_eb_unreduced(mu, d / 2.0 - 1.0, cfg);
      CHECK(std::abs(a.value - b.value) < 1e-9);
    }
  }
  const ModelConfig odd = config(4, 0.6, 2.2);
  for (double mu : {0.3, 4.0, 30.0}) {
    CHECK(std::abs(risk_diff_eb(mu, 1.5, odd).value - risk_diff_eb_unreduced(mu, 1.5, odd).value) < 1e-9);
    CHECK(std::abs(risk_diff_shrinkage(mu, odd).value - risk_diff_shrinkage_reduced(mu, odd).value) < 1e-9);
  }
}

TEST_CASE("the risk difference depends on lambda only through its sum") {
  const ModelConfig cfg = config(3);
  const double b = 0.5;
  auto log_ratio = [&](const CountVector& x, const CountVector& y) {
    return static_cast<long double>(eb_log_pred(Counts(x), Counts(y), MomentRule{b}, cfg) -
                                    jeffreys_log_pred(Counts(x), Counts(y), cfg));
  };
  const auto start = std::chrono::steady_clock::now();
  const long double even = oracle::brute_force_log_ratio({1.0L, 1.0L, 1.0L}, 1, 1, log_ratio);
  const long double skewed = oracle::brute_force_log_ratio({2.9L, 0.05L, 0.05L}, 1, 1, log_ratio);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("brute-force enumeration took " << seconds << " s");
  const double reduced = risk_diff_eb(3.0, b, cfg).value;
  CHECK(std::abs(static_cast<double>(even - skewed)) < 1e-6);
  CHECK(std::abs(static_cast<double>(even) - reduced) < 1e-6);
  CHECK(std::abs(static_cast<double>(skewed) - reduced) < 1e-6);
}

TEST_CASE("shrinkage risk difference") {
  for (double mu : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0}) {
    const RiskPoint p = risk_diff_shrinkage(mu, config(3));
    CAPTURE(mu);
    CHECK(p.value > p.err_bound);
    CHECK(risk_diff_shrinkage(mu, config(2)).value == 0.0);
  }
  CHECK(risk_diff_shrinkage(3.0, config(3)).value < risk_diff_eb(3.0, 0.5, config(3)).value);
  CHECK_THROWS_AS(risk_diff_shrinkage(1.0, config(1)), DomainError);
}

TEST_CASE("shrinkage to Jeffreys log ratio only sees the totals") {
  const std::string failure = gen::for_all(200, 41, [](gen::Gen& g) -> std::string {
    const int d = static_cast<int>(g.integer(2, 6));
    const ModelConfig cfg = config(d, g.log_uniform(0.2, 5), g.log_uniform(0.2, 5));
    const Counts x(g.counts(d, 9)), y(g.counts(d, 9));
    const double direct = shrinkage_log_pred(x, y, cfg) - jeffreys_log_pred(x, y, cfg);
    const double via_totals = shrinkage_jeffreys_log_ratio(x.sum(), y.sum(), cfg);
    if (std::abs(direct - via_totals) > 1e-11 * (1 + std::abs(direct)))
      return "x=" + gen::describe(x.values()) + " y=" + gen::describe(y.values());
    return {};
  });
  CHECK_MESSAGE(failure.empty(), failure);
}

TEST_CASE("empirical-Bayes risk stays below the Jeffreys risk and the upper bound") {
  for (int d : {3, 6}) {
    const ModelConfig cfg = config(d);
    for (double mu : {0.1, 1.0, 5.0, 40.0}) {
      const double b = d / 2.0 - 1.0;
      const RiskPoint eb = risk_eb(mu, b, cfg);
      const Eigen::VectorXd lambda = Eigen::VectorXd::Constant(d, mu / d);
      CHECK(eb.value < risk_jeffreys_direct(lambda, cfg).value);
      CHECK(eb.value < jeffreys_risk_upper_bound(cfg));
      CHECK(eb.value > 0.0);
    }
    const double far = risk_eb(2000.0, d / 2.0 - 1.0, cfg).value;
    CHECK(std::abs(far - minimax_lower_bound(cfg)) < 0.01 * d);
  }
}

TEST_CASE("Bayes risk of the gamma-prior rule approaches the minimax bound") {
  const ModelConfig one = config(1);
  const BayesRiskGap g10 = bayes_risk_gap(10.0, one);
  const BayesRiskGap g1e4 = bayes_risk_gap(1e4, one);
  CHECK(std::abs(g1e4.right) < std::abs(g10.right));
  CHECK(std::abs(g1e4.total - 0.5 * kLn2) < std::abs(g10.total - 0.5 * kLn2));
  CHECK(g10.total == doctest::Approx(g10.left + g10.right));
  for (double n : {0.5, 10.0, 100.0, 1e4}) {
    const BayesRiskGap g = bayes_risk_gap(n, config(2, 1.0, 2.0));
    CHECK(g.total <= jeffreys_risk_upper_bound(config(2, 1.0, 2.0)));
    CHECK(g.err_bound >= 0.0);
  }
  // The closed form of the excess term.
  const double n = 10.0, r = 1.0, s = 1.0, half_d = 0.5;
  const double right = (r * half_d * n + half_d) * std::log(r / (r + 1 / n)) +
                       ((r + s) * half_d * n + half_d) * std::log((r + s + 1 / n) / (r + s));
  CHECK(g10.right == doctest::Approx(right).epsilon(1e-10));
}

TEST_CASE("tightening the series tolerance moves values by less than the earlier bound") {
  const SeriesPolicy loose = SeriesPolicy{}.with_tol(1e-6);
  const SeriesPolicy tight = loose.with_tol(1e-7);
  const std::string failure = gen::for_all(40, 53, [&](gen::Gen& g) -> std::string {
    const double mu = g.log_uniform(0.05, 80);
    const int d = static_cast<int>(g.integer(3, 6));
    const ModelConfig cfg = config(d, g.log_uniform(0.3, 3), g.log_uniform(0.3, 3));
    auto moved = [](const auto& a, const auto& b) { return std::abs(a.value - b.value) > a.err_bound; };
    if (moved(f_shrink(mu, loose), f_shrink(mu, tight))) return "f at " + std::to_string(mu);
    if (moved(g_deriv(mu, loose), g_deriv(mu, tight))) return "g at " + std::to_string(mu);
    const Eigen::VectorXd lambda = Eigen::VectorXd::Constant(d, mu / d);
    if (moved(risk_jeffreys_direct(lambda, cfg, loose), risk_jeffreys_direct(lambda, cfg, tight)))
      return "Jeffreys risk at " + std::to_string(mu);
    if (moved(risk_diff_eb(mu, 1.0, cfg, loose), risk_diff_eb(mu, 1.0, cfg, tight)))
      return "eb difference at " + std::to_string(mu);
    if (moved(risk_diff_shrinkage(mu, cfg, loose), risk_diff_shrinkage(mu, cfg, tight)))
      return "shrinkage difference at " + std::to_string(mu);
    return {};
  });
  CHECK_MESSAGE(failure.empty(), failure);
}

TEST_CASE("bounds, grids and argument checks") {
  CHECK(minimax_lower_bound(config(4, 1, 3)) == doctest::Approx(2.0 * std::log(4.0)));
  CHECK(jeffreys_risk_upper_bound(config(1)) == doctest::Approx(0.52 * kLn2));
  const Eigen::VectorXd grid = log_grid(0.1, 10.0, 3);
  CHECK(grid(0) == doctest::Approx(0.1));
  CHECK(grid(1) == doctest::Approx(1.0));
  CHECK(grid(2) == doctest::Approx(10.0));
  CHECK_THROWS_AS(f_shrink(0.0), DomainError);
  CHECK_THROWS_AS(risk_diff_eb(-1.0, 0.5, config(3)), DomainError);
  CHECK_THROWS_AS(risk_diff_eb(1.0, 0.0, config(3)), DomainError);
  CHECK_THROWS_AS(risk_jeffreys_direct(vec({1.0, 2.0}), config(3)), ContractError);
  CHECK_THROWS_AS(bayes_risk_gap(0.0, config(1)), DomainError);
}

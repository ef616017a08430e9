#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebpois/verify.hpp"

using namespace ebpois;

namespace {

const double* find_value(const PointTuple& p, const std::string& name) {
  for (const NamedValue& v : p)
    if (v.name == name) return &v.value;
  return nullptr;
}

}  // namespace

TEST_CASE("inequality expressions at hand-checked points") {
  CHECK(lemma2_value(1.0, 1.0, 1.0) == doctest::Approx(-3 * std::log(0.75) - std::log(2.0)).epsilon(1e-14));
  CHECK(std::abs(lemma2_value(1.0, 1.0, 1.0) - 0.16990) < 1e-4);
  CHECK(lemma2_value(100.0, 0.01, 0.5) > 0.0);
  CHECK(lemma22_value(1.0, 1.0, 0.5) > 0.0);
  CHECK(lemma23_value(1.0, 1.0, 1.0) > 0.0);
  CHECK(lemma23_value(0.5, 5.0, 3.0) > 0.0);

  // At s = 1 the leading term of the Lemma 2.2 expression vanishes.
  CHECK(lemma22_value(2.0, 3.0, 1.0) == doctest::Approx(4.0 / ((2.0 + 3.0) * (6.0 + 3.0))));

  const double alpha = 2.0;
  const double far = lemma21_h(alpha, 1e6 * alpha);
  CHECK(far < alpha);
  CHECK(far > alpha - 1e-3 * alpha);
  CHECK(lemma21_slope(1.0, 0.5) > 0.0);
  CHECK(lemma21_h(1.0L, 3.0L) == doctest::Approx(lemma21_h(1.0, 3.0)));
}

TEST_CASE("lemma samples are reproducible and stay in range") {
  const auto a = lemma_samples(1000, 1.0, 10.0, 7);
  const auto b = lemma_samples(1000, 1.0, 10.0, 7);
  const auto c = lemma_samples(1000, 1.0, 10.0, 8);
  REQUIRE(a.size() == 1000);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].s == b[i].s);
    CHECK(a[i].x >= 1e-3);
    CHECK(a[i].x <= 1e3);
    CHECK(a[i].s >= 1.0);
    CHECK(a[i].s <= 10.0);
    differs = differs || a[i].x != c[i].x;
  }
  CHECK(differs);
}

TEST_CASE("each checker passes on its default inputs") {
  CHECK(check_f_regression().passed);
  const std::vector<double> grid = default_lemma1_grid();
  CHECK(grid.front() > 0.0);
  CHECK(grid.back() == doctest::Approx(100.0));
  const CheckResult l1 = check_lemma1_bounds(grid);
  CHECK(l1.passed);
  CHECK(l1.grid_size >= static_cast<std::int64_t>(grid.size()));

  const auto samples = lemma_samples(20000, 1e-3, 1e3, 1);
  const CheckResult l2 = check_lemma2(samples);
  CHECK(l2.passed);
  CHECK(l2.min_margin > l2.err_at_worst);
  CHECK(check_lemma22(lemma_samples(20000, 1e-3, 1.0, 2)).passed);
  CHECK(check_lemma23(lemma_samples(20000, 1.0, 1e3, 3)).passed);

  const std::vector<double> alphas{1.0, 10.0};
  const std::vector<std::vector<double>> grids{{0.1, 0.5, 1, 5, 10, 50, 100}, {0.01, 0.1, 1, 10}};
  CHECK(check_lemma21(alphas, grids, lemma_samples(20000, 1.0, 1.0, 4)).passed);

  const ModelConfig cfg{3, 1.0, 2.0};
  const auto t1 = default_theorem1_grid(cfg, 5);
  CHECK(check_theorem1(t1, cfg).passed);

  const std::vector<double> ns{10.0, 100.0, 1000.0, 10000.0};
  CHECK(check_theorem2(ns, ModelConfig{3, 1.0, 1.0}).passed);

  const std::vector<double> mus{0.1, 1.0, 10.0, 50.0};
  const CheckResult t3 = check_theorem3(mus, 6.0, ModelConfig{8, 1.0, 1.0});
  CHECK(t3.passed);
  CHECK(t3.guaranteed);

  CHECK(check_reduction_identity().passed);
  const CheckResult agree = check_method_agreement();
  CHECK(agree.passed);
  CHECK(agree.grid_size == 27);
  CHECK(check_figure2_order().passed);
  CHECK(check_hyper_consistency().passed);
}

TEST_CASE("the three Lemma 2 checkers agree at s = 1") {
  auto samples = lemma_samples(5000, 1.0, 1.0, 9);
  for (const LemmaSample& p : samples) REQUIRE(p.s == 1.0);
  const CheckResult l2 = check_lemma2(samples);
  const CheckResult l22 = check_lemma22(samples);
  const CheckResult l23 = check_lemma23(samples);
  CHECK(l2.passed);
  CHECK(l22.passed == l2.passed);
  CHECK(l23.passed == l2.passed);
}

TEST_CASE("samples outside a checker's range are recorded as failures") {
  const CheckResult l22 = check_lemma22(lemma_samples(10, 1.5, 2.0, 1));
  CHECK_FALSE(l22.passed);
  CHECK(l22.note.find("s in (0, 1]") != std::string::npos);
  const CheckResult l23 = check_lemma23(lemma_samples(10, 0.1, 0.5, 1));
  CHECK_FALSE(l23.passed);
  CHECK(l23.note.find("s >= 1") != std::string::npos);
}

TEST_CASE("a violated inequality is recorded rather than thrown") {
  const std::vector<double> mus{0.5, 5.0, 20.0};
  const CheckResult bad = check_theorem3(mus, 500.0, ModelConfig{3, 1.0, 1.0});
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.guaranteed);
  CHECK(bad.min_margin <= 0.0);
  CHECK(find_value(bad.worst_point, "mu") != nullptr);

  const CheckResult outside = check_theorem3(std::vector<double>{0.1, 1.0, 10.0}, 3.0, ModelConfig{3, 1.0, 1.0});
  CHECK_FALSE(outside.guaranteed);
}

TEST_CASE("run_all filtering, reproducibility and serialization") {
  VerifyConfig cfg;
  cfg.samples = 2000;
  cfg.seed = 7;
  cfg.only = {"lemma2", "lemma23"};
  const VerificationReport a = run_all(cfg);
  const VerificationReport b = run_all(cfg);
  REQUIRE(a.checks.size() == 2);
  CHECK(a.checks[0].family == "lemma2");
  CHECK(a.checks[1].family == "lemma23");
  CHECK(a.all_passed());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].min_margin == b.checks[i].min_margin);
    REQUIRE(a.checks[i].worst_point.size() == b.checks[i].worst_point.size());
    for (std::size_t k = 0; k < a.checks[i].worst_point.size(); ++k)
      CHECK(a.checks[i].worst_point[k].value == b.checks[i].worst_point[k].value);
  }

  // The hand-checked point is part of the lemma2 sample set.
  const auto doc = nlohmann::json::parse(report_json(a));
  CHECK(doc["passed"] == true);
  CHECK(doc["config"]["seed"] == 7);
  REQUIRE(doc["checks"].size() == 2);
  for (const auto& c : doc["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("grid_size"));
    CHECK(c.contains("min_margin"));
    CHECK(c.contains("worst_point"));
    CHECK(c.contains("passed"));
  }
  CHECK(doc["checks"][0]["grid_size"] == 2002);

  const std::string text = report_text(a);
  CHECK(text.find("PASS lemma2") != std::string::npos);
  CHECK(text.find("2/2 checks passed") != std::string::npos);

  cfg.only = {"no_such_family"};
  CHECK_THROWS_AS(run_all(cfg), ContractError);
}

TEST_CASE("every family name runs on its own") {
  for (const std::string& family : check_families()) {
    if (family == "theorem1" || family == "lemma1" || family == "theorem2") continue;
    VerifyConfig cfg;
    cfg.samples = 500;
    cfg.only = {family};
    const VerificationReport r = run_all(cfg);
    CAPTURE(family);
    REQUIRE_FALSE(r.checks.empty());
    for (const CheckResult& c : r.checks) CHECK(c.family == family);
    CHECK(r.all_passed());
  }
}

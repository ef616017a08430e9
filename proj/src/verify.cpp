#include "ebpois/verify.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ebpois/errors.hpp"
#include "ebpois/hyper.hpp"
#include "ebpois/parallel.hpp"
#include "ebpois/risk.hpp"

namespace ebpois {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Observation {
  double margin = kInf;  // raw slack, before the error is subtracted
  double err = 0.0;
  PointTuple point;
  std::string failure;
};

// Evaluates eval(i) for every i; an exception becomes a failed observation
// so one bad point cannot hide the others.
template <class Eval>
std::vector<Observation> sweep(std::size_t n, unsigned threads, Eval&& eval) {
  std::vector<Observation> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      out[i] = eval(i);
    } catch (const std::exception& e) {
      out[i].margin = -kInf;
      out[i].failure = e.what();
    }
  });
  return out;
}

CheckResult summarize(std::string name, std::string family, const std::vector<Observation>& obs) {
  CheckResult res;
  res.name = std::move(name);
  res.family = std::move(family);
  res.grid_size = static_cast<std::int64_t>(obs.size());
  res.min_margin = kInf;
  std::size_t failures = 0;
  for (const Observation& o : obs) {
    if (!o.failure.empty()) ++failures;
    const double m = o.margin - o.err;
    if (m < res.min_margin) {
      res.min_margin = m;
      res.err_at_worst = o.err;
      res.worst_point = o.point;
      if (!o.failure.empty()) res.note = o.failure;
    }
  }
  if (obs.empty()) {
    res.min_margin = -kInf;
    res.note = "empty grid";
  }
  if (failures > 0) {
    res.note = std::to_string(failures) + " point(s) failed to evaluate: " + res.note;
  }
  res.passed = res.min_margin > 0.0;
  return res;
}

void append(std::vector<Observation>& into, std::vector<Observation>&& more) {
  into.insert(into.end(), std::make_move_iterator(more.begin()),
              std::make_move_iterator(more.end()));
}

// Value in long double with the double/long double gap as rounding estimate.
struct Evaluated {
  double value;
  double err;
};

template <class Fn>
Evaluated two_precision(Fn&& fn) {
  const long double wide = fn(static_cast<long double>(0));
  const double narrow = fn(0.0);
  return {static_cast<double>(wide),
          static_cast<double>(std::abs(static_cast<long double>(narrow) - wide) +
                              16 * LDBL_EPSILON * std::abs(wide))};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Observation lemma_observation(const LemmaSample& p, const Evaluated& e) {
  return Observation{e.value, e.err, {{"x", p.x}, {"t", p.t}, {"s", p.s}}, {}};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* fixed = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(fixed, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool VerificationReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& check_families() {
  static const std::vector<std::string> families{
      "f_regression", "lemma1",      "lemma2",          "lemma21",          "lemma22",
      "lemma23",      "theorem1",    "theorem2",        "theorem3",         "reduction_identity",
      "method_agreement", "figure2_order", "hyper_consistency"};
  return families;
}

std::vector<LemmaSample> lemma_samples(std::size_t n, double s_lo, double s_hi,
                                       std::uint64_t seed) {
  if (!(s_lo > 0.0) || !(s_hi >= s_lo)) throw ContractError("lemma_samples: bad s range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wide(std::log(1e-3), std::log(1e3));
  std::uniform_real_distribution<double> srange(std::log(s_lo), std::log(s_hi));
  std::vector<LemmaSample> out(n);
  for (LemmaSample& p : out) {
    p.x = std::exp(wide(rng));
    p.t = std::exp(wide(rng));
    p.s = std::min(s_hi, std::max(s_lo, std::exp(srange(rng))));
  }
  return out;
}

CheckResult check_f_regression(const SeriesPolicy& policy, unsigned threads) {
  struct Target {
    double lambda;
    double bound;
  };
  const Target targets[] = {{3.0, 0.0}, {4.0, -0.0082}, {5.0, -0.011}};
  std::vector<Observation> obs;
  for (const Target& tg : targets) {
    const SeriesResult f = f_shrink(tg.lambda, policy);
    const double l = truncated_f(tg.lambda);
    obs.push_back({f.value - tg.bound, f.err_bound, {{"lambda", tg.lambda}, {"f", f.value}}, {}});
    obs.push_back({l - tg.bound, 1e-14, {{"lambda", tg.lambda}, {"L", l}}, {}});
    obs.push_back({f.value - l, f.err_bound + 1e-14, {{"lambda", tg.lambda}, {"f-L", f.value - l}}, {}});
  }

  const std::size_t n = 2000;
  std::vector<SeriesResult> values(n);
  parallel_for(n, threads,
               [&](std::size_t i) { values[i] = f_shrink(0.01 * static_cast<double>(i + 1), policy); });
  std::size_t at = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i].value < values[at].value) at = i;
  }
  const double where = 0.01 * static_cast<double>(at + 1);
  const double depth = values[at].value;
  const double err = values[at].err_bound;
  const PointTuple p{{"argmin", where}, {"min_f", depth}};
  obs.push_back({depth + 0.0115, err, p, {}});
  obs.push_back({-0.0105 - depth, err, p, {}});
  obs.push_back({where - 4.5, 0.0, p, {}});
  obs.push_back({5.5 - where, 0.0, p, {}});
  CheckResult res = summarize("f_regression", "f_regression", obs);
  res.note = "min f on the 0.01 grid is " + fmt(depth) + " at lambda = " + fmt(where);
  return res;
}

std::vector<double> default_lemma1_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 100; ++k) g.push_back(0.01 * k);
  for (int k = 0; k <= 1980; ++k) g.push_back(1.0 + 0.05 * k);
  for (double c : {0.5, 1.0, 3.0, 4.0, 5.0, 7.0}) {
    for (int j = -50; j <= 50; ++j) g.push_back(c + 0.001 * j);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          g.end());
  return g;
}

CheckResult check_lemma1_bounds(std::span<const double> grid, const SeriesPolicy& policy,
                                unsigned threads) {
  if (grid.empty()) throw ContractError("check_lemma1_bounds: grid is empty");
  // Two observations per point: the f bound and (when lambda > 1) the tighter
  // of the two envelope slacks around g.
  std::vector<Observation> obs = sweep(2 * grid.size(), threads, [&](std::size_t i) {
    const double l = grid[i / 2];
    if (!(l > 0.0)) throw DomainError("lambda must be positive");
    if (i % 2 == 0) {
      const SeriesResult f = f_shrink(l, policy);
      return Observation{f.value + 0.02, f.err_bound, {{"lambda", l}, {"f", f.value}}, {}};
    }
    if (l <= 1.0) return Observation{kInf, 0.0, {{"lambda", l}}, {}};
    const SeriesResult g = g_deriv(l, policy);
    const double lo = g.value - g_lower_envelope(l);
    const double up = g_upper_envelope(l) - g.value;
    return Observation{std::min(lo, up), g.err_bound + 1e-15, {{"lambda", l}, {"g", g.value}}, {}};
  });
  obs.erase(std::remove_if(obs.begin(), obs.end(), [](const Observation& o) { return o.margin == kInf; }),
            obs.end());
  CheckResult res = summarize("lemma1", "lemma1", obs);
  res.grid_size = static_cast<std::int64_t>(grid.size());
  if (res.note.empty()) {
    res.note = "grid on [" + fmt(grid.front()) + ", " + fmt(grid.back()) +
               "]; a finite grid, not a proof for all lambda";
  }
  return res;
}

CheckResult check_lemma2(std::span<const LemmaSample> samples, unsigned threads) {
  return summarize("lemma2", "lemma2", sweep(samples.size(), threads, [&](std::size_t i) {
                  const LemmaSample& p = samples[i];
                  if (!(p.x > 0 && p.t > 0 && p.s > 0)) throw ContractError("lemma2: non-positive input");
                  return lemma_observation(p, two_precision([&](auto z) {
                                             using T = decltype(z);
                                             return lemma2_value<T>(p.x, p.t, p.s);
                                           }));
                }));
}

CheckResult check_lemma21(std::span<const double> alphas,
                          std::span<const std::vector<double>> y_grids,
                          std::span<const LemmaSample> slope_samples, unsigned threads) {
  if (alphas.size() != y_grids.size()) throw ContractError("check_lemma21: one grid per alpha");
  std::vector<Observation> obs;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const double alpha = alphas[a];
    const std::vector<double>& ys = y_grids[a];
    for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
      if (!(ys[k + 1] > ys[k])) throw ContractError("check_lemma21: grid must be ascending");
      const Evaluated step = two_precision([&](auto z) {
        using T = decltype(z);
        return lemma21_h<T>(alpha, ys[k + 1]) - lemma21_h<T>(alpha, ys[k]);
      });
      obs.push_back({step.value, step.err, {{"alpha", alpha}, {"y", ys[k]}, {"y_next", ys[k + 1]}}, {}});
    }
    // h approaches alpha from below: 0 < alpha - h(1e6 alpha) < 1e-3 alpha.
    const Evaluated far = two_precision([&](auto z) {
      using T = decltype(z);
      return lemma21_h<T>(alpha, T(1e6) * alpha);
    });
    const PointTuple p{{"alpha", alpha}, {"y", 1e6 * alpha}, {"h", far.value}};
    obs.push_back({alpha - far.value, far.err, p, {}});
    obs.push_back({far.value - (1.0 - 1e-3) * alpha, far.err, p, {}});
  }
  append(obs, sweep(slope_samples.size(), threads, [&](std::size_t i) {
           const LemmaSample& p = slope_samples[i];
           const Evaluated e = two_precision([&](auto z) {
             using T = decltype(z);
             return lemma21_slope<T>(p.x, p.t);
           });
           return Observation{e.value, e.err, {{"alpha", p.x}, {"y", p.t}}, {}};
         }));
  return summarize("lemma21", "lemma21", obs);
}

CheckResult check_lemma22(std::span<const LemmaSample> samples, unsigned threads) {
  return summarize("lemma22", "lemma22", sweep(samples.size(), threads, [&](std::size_t i) {
                  const LemmaSample& p = samples[i];
                  if (!(p.x > 0 && p.t > 0 && p.s > 0 && p.s <= 1))
                    throw ContractError("lemma22: needs x, t > 0 and s in (0, 1]");
                  return lemma_observation(p, two_precision([&](auto z) {
                                             using T = decltype(z);
                                             return lemma22_value<T>(p.x, p.t, p.s);
                                           }));
                }));
}

CheckResult check_lemma23(std::span<const LemmaSample> samples, unsigned threads) {
  return summarize("lemma23", "lemma23", sweep(samples.size(), threads, [&](std::size_t i) {
                  const LemmaSample& p = samples[i];
                  if (!(p.x > 0 && p.t > 0 && p.s >= 1))
                    throw ContractError("lemma23: needs x, t > 0 and s >= 1");
                  return lemma_observation(p, two_precision([&](auto z) {
                                             using T = decltype(z);
                                             return lemma23_value<T>(p.x, p.t, p.s);
                                           }));
                }));
}

std::vector<Eigen::VectorXd> default_theorem1_grid(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<Eigen::VectorXd> grid;
  const Eigen::VectorXd levels = log_grid(1e-3, 200.0, 40);
  for (double l : levels) grid.push_back(Eigen::VectorXd::Constant(cfg.d, l));
  // f is lowest near 5.08; put t * lambda there for several t in [r, r+s].
  for (int k = 0; k <= 4; ++k) {
    const double t = cfg.r + cfg.s * k / 4.0;
    grid.push_back(Eigen::VectorXd::Constant(cfg.d, 5.08 / t));
  }
  if (cfg.d > 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(std::log(1e-3), std::log(200.0));
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd v(cfg.d);
      for (int i = 0; i < cfg.d; ++i) v(i) = std::exp(u(rng));
      grid.push_back(v);
    }
  }
  return grid;
}

namespace {

PointTuple lambda_point(const Eigen::VectorXd& lambda, const ModelConfig& cfg) {
  PointTuple p{{"d", static_cast<double>(cfg.d)}, {"r", cfg.r}, {"s", cfg.s}};
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    p.push_back({"lambda" + std::to_string(i + 1), lambda(i)});
  }
  return p;
}

std::string cfg_label(const ModelConfig& cfg) {
  return "d=" + std::to_string(cfg.d) + ",r=" + fmt(cfg.r) + ",s=" + fmt(cfg.s);
}

}  // namespace

CheckResult check_theorem1(std::span<const Eigen::VectorXd> grid, const ModelConfig& cfg,
                           const SeriesPolicy& policy, unsigned threads) {
  cfg.validate();
  const double upper = jeffreys_risk_upper_bound(cfg);
  CheckResult res = summarize("theorem1[" + cfg_label(cfg) + "]", "theorem1",
                           sweep(grid.size(), threads, [&](std::size_t i) {
                             const RiskPoint rp = risk_jeffreys_direct(grid[i], cfg, policy);
                             PointTuple p = lambda_point(grid[i], cfg);
                             p.push_back({"risk", rp.value});
                             return Observation{std::min(upper - rp.value, rp.value), rp.err_bound,
                                                std::move(p), {}};
                           }));
  return res;
}

CheckResult check_theorem2(std::span<const double> n_grid, const ModelConfig& cfg,
                           const SeriesPolicy& policy, const QuadraturePolicy& quad,
                           unsigned threads) {
  cfg.validate();
  if (n_grid.size() < 2) throw ContractError("check_theorem2: need at least two values of n");
  const double target = minimax_lower_bound(cfg);
  const double upper = jeffreys_risk_upper_bound(cfg);
  std::vector<BayesRiskGap> gaps(n_grid.size());
  std::vector<std::string> failures(n_grid.size());
  parallel_for(n_grid.size(), threads, [&](std::size_t i) {
    try {
      gaps[i] = bayes_risk_gap(n_grid[i], cfg, policy, quad);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!failures[i].empty()) {
      obs.push_back({-kInf, 0.0, {{"n", n_grid[i]}}, failures[i]});
      continue;
    }
    obs.push_back({upper - gaps[i].total, gaps[i].err_bound, {{"n", n_grid[i]}, {"total", gaps[i].total}}, {}});
    if (i + 1 < n_grid.size() && failures[i + 1].empty()) {
      const double here = std::abs(gaps[i].total - target);
      const double next = std::abs(gaps[i + 1].total - target);
      obs.push_back({here - next, gaps[i].err_bound + gaps[i + 1].err_bound,
                     {{"n", n_grid[i]}, {"n_next", n_grid[i + 1]}, {"gap", here}, {"gap_next", next}}, {}});
    }
  }
  const std::size_t last = n_grid.size() - 1;
  if (failures.front().empty() && failures[last].empty()) {
    const double first = std::abs(gaps.front().total - target);
    const double final_gap = std::abs(gaps[last].total - target);
    obs.push_back({first / 10.0 - final_gap, gaps.front().err_bound / 10.0 + gaps[last].err_bound,
                   {{"n_first", n_grid.front()}, {"n_last", n_grid[last]}, {"gap_first", first},
                    {"gap_last", final_gap}}, {}});
  }
  return summarize("theorem2[" + cfg_label(cfg) + "]", "theorem2", obs);
}

CheckResult check_theorem3(std::span<const double> mu_grid, double b, const ModelConfig& cfg,
                           const SeriesPolicy& policy, unsigned threads) {
  cfg.validate();
  CheckResult res = summarize("theorem3[d=" + std::to_string(cfg.d) + ",b=" + fmt(b) + "]", "theorem3",
                           sweep(mu_grid.size(), threads, [&](std::size_t i) {
                             const RiskPoint rp = risk_diff_eb(mu_grid[i], b, cfg, policy);
                             return Observation{rp.value, rp.err_bound,
                                                {{"mu", mu_grid[i]}, {"b", b}, {"diff", rp.value}}, {}};
                           }));
  res.guaranteed = moment_dominance_guaranteed(b, cfg.d);
  if (!res.guaranteed) res.note = "no guarantee: b outside 0 < b <= d - 2";
  return res;
}

CheckResult check_reduction_identity(const SeriesPolicy& policy, unsigned threads) {
  struct Case {
    double mu;
    int d;
    bool shrinkage;
  };
  std::vector<Case> cases;
  for (int d : {3, 8}) {
    for (double mu : {0.5, 2.0, 10.0}) cases.push_back({mu, d, false});
  }
  for (int d : {3, 4, 8}) {
    for (double mu : {0.5, 2.0, 10.0}) cases.push_back({mu, d, true});
  }
  return summarize("reduction_identity", "reduction_identity",
                sweep(cases.size(), threads, [&](std::size_t i) {
                  const Case& c = cases[i];
                  const ModelConfig cfg{c.d, 1.0, 1.0};
                  const double b = natural_moment_b(c.d);
                  const RiskPoint a = c.shrinkage ? risk_diff_shrinkage(c.mu, cfg, policy)
                                                  : risk_diff_eb(c.mu, b, cfg, policy);
                  const RiskPoint z = c.shrinkage ? risk_diff_shrinkage_reduced(c.mu, cfg, policy)
                                                  : risk_diff_eb_unreduced(c.mu, b, cfg, policy);
                  return Observation{1e-9 - std::abs(a.value - z.value), a.err_bound + z.err_bound,
                                     {{"shrinkage", c.shrinkage ? 1.0 : 0.0},
                                      {"mu", c.mu},
                                      {"d", static_cast<double>(c.d)},
                                      {"diff", a.value - z.value}},
                                     {}};
                }));
}

CheckResult check_method_agreement(const SeriesPolicy& policy, const QuadraturePolicy& quad,
                                   unsigned threads) {
  struct Case {
    ModelConfig cfg;
    double lambda;
  };
  std::vector<Case> cases;
  for (int d : {1, 3, 8}) {
    for (double l : {0.1, 1.0, 10.0}) {
      for (auto [r, s] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{1.0, 3.0}}) {
        cases.push_back({ModelConfig{d, r, s}, l});
      }
    }
  }
  return summarize("method_agreement", "method_agreement",
                sweep(cases.size(), threads, [&](std::size_t i) {
                  const Case& c = cases[i];
                  const Eigen::VectorXd lambda = Eigen::VectorXd::Constant(c.cfg.d, c.lambda);
                  const RiskPoint a = risk_jeffreys_direct(lambda, c.cfg, policy);
                  const RiskPoint q = risk_jeffreys_integral(lambda, c.cfg, policy, quad);
                  PointTuple p = lambda_point(lambda, c.cfg);
                  p.push_back({"diff", a.value - q.value});
                  return Observation{1e-6 - std::abs(a.value - q.value), a.err_bound + q.err_bound,
                                     std::move(p), {}};
                }));
}

CheckResult check_figure2_order(const SeriesPolicy& policy, unsigned threads) {
  const ModelConfig cfg{3, 1.0, 1.0};
  const Eigen::VectorXd grid = log_grid(0.05, 50.0, 60);
  std::vector<std::array<RiskPoint, 3>> curves(static_cast<std::size_t>(grid.size()));
  parallel_for(curves.size(), threads, [&](std::size_t i) {
    const double mu = grid(static_cast<Eigen::Index>(i));
    curves[i] = {risk_diff_eb(mu, 1.0, cfg, policy), risk_diff_eb(mu, 0.5, cfg, policy),
                 risk_diff_shrinkage(mu, cfg, policy)};
  });
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double mu = grid(static_cast<Eigen::Index>(i));
    const auto& [eb1, eb05, sh] = curves[i];
    const double err = eb1.err_bound + eb05.err_bound + sh.err_bound;
    const PointTuple p{{"mu", mu}, {"eb_b1", eb1.value}, {"eb_b0.5", eb05.value}, {"shrinkage", sh.value}};
    if (mu <= 3.0) obs.push_back({eb1.value - std::max(eb05.value, sh.value), err, p, {}});
    if (mu >= 4.5) obs.push_back({std::min(eb05.value, sh.value) - eb1.value, err, p, {}});
    if (std::abs(mu - 3.0) <= 0.5) obs.push_back({eb05.value - sh.value, err, p, {}});
  }
  CheckResult res = summarize("figure2_order[d=3,r=1,s=1]", "figure2_order", obs);
  res.grid_size = grid.size();
  return res;
}

CheckResult check_hyper_consistency(unsigned threads) {
  struct Case {
    int d;
    double r, s;
    int sum;
  };
  std::vector<Case> cases;
  for (int d : {1, 3, 8}) {
    for (double r : {0.5, 1.0, 2.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        for (int k = 1; k <= 20; ++k) cases.push_back({d, r, s, k});
      }
    }
  }
  return summarize("hyper_consistency", "hyper_consistency",
                sweep(cases.size(), threads, [&](std::size_t i) {
                  const Case& c = cases[i];
                  const ModelConfig cfg{c.d, c.r, c.s};
                  CountVector v(c.d);
                  for (int j = 0; j < c.d; ++j) v(j) = c.sum / c.d + (j < c.sum % c.d ? 1 : 0);
                  const Counts x(v);
                  const double closed = alpha_mle(x.sum(), c.r, c.d);
                  const double numeric = ure_argmin_numeric(x, cfg);
                  const double rel = std::abs(numeric - closed) / closed;
                  return Observation{1e-8 - rel, 0.0,
                                     {{"d", static_cast<double>(c.d)}, {"r", c.r}, {"s", c.s},
                                      {"sum_x", static_cast<double>(c.sum)}, {"rel_diff", rel}},
                                     {}};
                }));
}

VerificationReport run_all(const VerifyConfig& config) {
  config.series.validate();
  config.quad.validate();
  if (config.samples < 1) throw ContractError("run_all: samples must be positive");
  const auto& families = check_families();
  for (const std::string& f : config.only) {
    if (std::find(families.begin(), families.end(), f) == families.end())
      throw ContractError("unknown check family '" + f + "'");
  }
  auto wanted = [&](const std::string& f) {
    return config.only.empty() || std::find(config.only.begin(), config.only.end(), f) != config.only.end();
  };
  const unsigned th = config.threads;
  const SeriesPolicy& sp = config.series;
  const auto n = static_cast<std::size_t>(config.samples);

  VerificationReport report;
  report.config = config;
  report.timestamp = utc_timestamp();
  report.version = EBPOIS_VERSION;
  auto& out = report.checks;

  if (wanted("f_regression")) out.push_back(check_f_regression(sp, th));
  if (wanted("lemma1")) {
    const std::vector<double> grid = default_lemma1_grid();
    out.push_back(check_lemma1_bounds(grid, sp, th));
  }
  if (wanted("lemma2")) {
    std::vector<LemmaSample> s = lemma_samples(n, 1e-3, 1e3, mix_seed(config.seed, 2));
    s.insert(s.begin(), {{1.0, 1.0, 1.0}, {100.0, 0.01, 0.5}});
    out.push_back(check_lemma2(s, th));
  }
  if (wanted("lemma21")) {
    const std::vector<double> alphas{1.0, 10.0};
    const std::vector<std::vector<double>> grids{
        [] { const auto g = log_grid(0.1, 100.0, 400); return std::vector<double>(g.begin(), g.end()); }(),
        [] { const auto g = log_grid(0.01, 10.0, 400); return std::vector<double>(g.begin(), g.end()); }()};
    // x carries alpha and t carries y.
    const std::vector<LemmaSample> s = lemma_samples(n, 1.0, 1.0, mix_seed(config.seed, 21));
    out.push_back(check_lemma21(alphas, grids, s, th));
  }
  if (wanted("lemma22")) {
    std::vector<LemmaSample> s = lemma_samples(n, 1e-3, 1.0, mix_seed(config.seed, 22));
    s.insert(s.begin(), {{1.0, 1.0, 0.5}, {1.0, 1.0, 1.0}});
    out.push_back(check_lemma22(s, th));
  }
  if (wanted("lemma23")) {
    std::vector<LemmaSample> s = lemma_samples(n, 1.0, 1e3, mix_seed(config.seed, 23));
    s.insert(s.begin(), {{1.0, 1.0, 1.0}, {0.5, 5.0, 3.0}});
    out.push_back(check_lemma23(s, th));
  }
  if (wanted("theorem1")) {
    for (auto [r, s] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{1.0, 3.0}}) {
      for (int d : {1, 3, 8}) {
        const ModelConfig cfg{d, r, s};
        const auto grid = default_theorem1_grid(cfg, mix_seed(config.seed, 100 + d));
        out.push_back(check_theorem1(grid, cfg, sp, th));
      }
    }
  }
  if (wanted("theorem2")) {
    const std::vector<double> ns{10.0, 100.0, 1000.0, 10000.0};
    out.push_back(check_theorem2(ns, ModelConfig{3, 1.0, 1.0}, sp, config.quad, th));
  }
  if (wanted("theorem3")) {
    const Eigen::VectorXd g = log_grid(0.1, 50.0, 60);
    const std::vector<double> mus(g.begin(), g.end());
    for (int d : {3, 8}) {
      for (double b : {natural_moment_b(d), d - 2.0}) {
        out.push_back(check_theorem3(mus, b, ModelConfig{d, 1.0, 1.0}, sp, th));
      }
    }
  }
  if (wanted("reduction_identity")) out.push_back(check_reduction_identity(sp, th));
  if (wanted("method_agreement")) out.push_back(check_method_agreement(sp, config.quad, th));
  if (wanted("figure2_order")) out.push_back(check_figure2_order(sp, th));
  if (wanted("hyper_consistency")) out.push_back(check_hyper_consistency(th));
  return report;
}

std::string report_json(const VerificationReport& report) {
  using nlohmann::ordered_json;
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : report.checks) {
    ordered_json point = ordered_json::object();
    for (const NamedValue& v : c.worst_point) point[v.name] = v.value;
    checks.push_back({{"name", c.name},
                      {"family", c.family},
                      {"grid_size", c.grid_size},
                      {"min_margin", c.min_margin},
                      {"err_at_worst", c.err_at_worst},
                      {"worst_point", point},
                      {"passed", c.passed},
                      {"guaranteed", c.guaranteed},
                      {"note", c.note}});
  }
  const VerifyConfig& cfg = report.config;
  ordered_json doc{{"tool", "ebpois"},
                   {"version", report.version},
                   {"timestamp", report.timestamp},
                   {"config",
                    {{"seed", cfg.seed},
                     {"samples", cfg.samples},
                     {"only", cfg.only},
                     {"tail_tol", cfg.series.tail_tol},
                     {"quad_abs_tol", cfg.quad.abs_tol}}},
                   {"passed", report.all_passed()},
                   {"checks", checks}};
  return doc.dump(2) + "\n";
}

std::string report_text(const VerificationReport& report) {
  std::ostringstream os;
  os << "ebpois " << report.version << " verification, " << report.timestamp << ", seed "
     << report.config.seed << "\n";
  std::size_t passed = 0;
  for (const CheckResult& c : report.checks) {
    passed += c.passed ? 1 : 0;
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  n=" << c.grid_size
       << "  min_margin=" << fmt(c.min_margin) << "  worst=(";
    for (std::size_t i = 0; i < c.worst_point.size(); ++i) {
      os << (i ? ", " : "") << c.worst_point[i].name << "=" << fmt(c.worst_point[i].value);
    }
    os << ")";
    if (!c.guaranteed) os << "  [no guarantee]";
    if (!c.note.empty()) os << "  -- " << c.note;
    os << "\n";
  }
  os << passed << "/" << report.checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace ebpois

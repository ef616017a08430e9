#include "ebpois/predictive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ebpois/special_fns.hpp"
#include "overloaded.hpp"

namespace ebpois {

using detail::overloaded;

std::string to_string(const PredictiveFamily& family) {
  return std::visit(overloaded{[](const Jeffreys&) { return std::string("jeffreys"); },
                               [](const FixedGamma& g) {
                                 std::ostringstream os;
                                 os << "gamma(alpha=" << g.alpha << ")";
                                 return os.str();
                               },
                               [](const EmpiricalBayes& eb) { return "eb(" + to_string(eb.rule) + ")"; },
                               [](const Shrinkage&) { return std::string("shrinkage"); }},
                    family);
}

void validate_family(const PredictiveFamily& family, const ModelConfig& cfg) {
  cfg.validate();
  std::visit(overloaded{[](const Jeffreys&) {},
                        [](const FixedGamma& g) {
                          if (!(g.alpha >= 0.0) || !std::isfinite(g.alpha))
                            throw DomainError("FixedGamma: alpha must be non-negative");
                        },
                        [](const EmpiricalBayes& eb) {
                          if (const auto* m = std::get_if<MomentRule>(&eb.rule)) {
                            if (!(m->b > 0.0)) throw DomainError("moment rule: b must be positive");
                          }
                        },
                        [&](const Shrinkage&) {
                          if (cfg.d < 2) throw DomainError("shrinkage predictive requires d >= 2");
                        }},
             family);
}

namespace {

void check_pair(const Counts& x, const Counts& y, const ModelConfig& cfg, const char* what) {
  cfg.validate();
  x.require_dim(cfg, what);
  y.require_dim(cfg, what);
}

}  // namespace

double coordinate_gamma_terms(const Counts& x, const Counts& y) {
  double acc = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = static_cast<double>(x[i]);
    const double yi = static_cast<double>(y[i]);
    if (y[i] == 0) continue;  // the three terms cancel exactly
    acc += log_gamma(xi + yi + 0.5) - log_gamma(xi + 0.5) - log_gamma(yi + 1.0);
  }
  return acc;
}

double jeffreys_log_pred(const Counts& x, const Counts& y, const ModelConfig& cfg) {
  check_pair(x, y, cfg, "jeffreys_log_pred");
  const double r = cfg.r, s = cfg.s;
  const double big_x = static_cast<double>(x.sum());
  const double big_y = static_cast<double>(y.sum());
  // ln(r/(r+s)) = -log1p(s/r)
  return -(big_x + 0.5 * cfg.d) * std::log1p(s / r) + big_y * std::log(s / (r + s)) +
         coordinate_gamma_terms(x, y);
}

double gamma_log_pred(const Counts& x, const Counts& y, double alpha, const ModelConfig& cfg) {
  check_pair(x, y, cfg, "gamma_log_pred");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw DomainError("gamma_log_pred: alpha must be non-negative and finite");
  const double r = cfg.r, s = cfg.s;
  const double big_x = static_cast<double>(x.sum());
  const double big_y = static_cast<double>(y.sum());
  return -(big_x + 0.5 * cfg.d) * std::log1p(s / (r + alpha)) +
         big_y * std::log(s / (r + s + alpha)) + coordinate_gamma_terms(x, y);
}

double eb_log_pred(const Counts& x, const Counts& y, const HyperRule& rule,
                   const ModelConfig& cfg) {
  check_pair(x, y, cfg, "eb_log_pred");
  return gamma_log_pred(x, y, estimate_alpha(rule, x, cfg).alpha, cfg);
}

double shrinkage_log_pred(const Counts& x, const Counts& y, const ModelConfig& cfg) {
  check_pair(x, y, cfg, "shrinkage_log_pred");
  if (cfg.d < 2) throw DomainError("shrinkage_log_pred: requires d >= 2");
  const double r = cfg.r, s = cfg.s;
  const double big_x = static_cast<double>(x.sum());
  const double big_y = static_cast<double>(y.sum());
  const double half_d = 0.5 * cfg.d;
  double total_rate_terms = 0.0;
  if (cfg.d != 2 && y.sum() != 0) {
    total_rate_terms = log_gamma(big_x + big_y + 1.0) - log_gamma(big_x + 1.0) +
                       log_gamma(big_x + half_d) - log_gamma(big_x + big_y + half_d);
  }
  return -(big_x + 1.0) * std::log1p(s / r) + big_y * std::log(s / (r + s)) + total_rate_terms +
         coordinate_gamma_terms(x, y);
}

double log_pred(const PredictiveFamily& family, const Counts& x, const Counts& y,
                const ModelConfig& cfg) {
  return std::visit(
      overloaded{[&](const Jeffreys&) { return jeffreys_log_pred(x, y, cfg); },
                 [&](const FixedGamma& g) { return gamma_log_pred(x, y, g.alpha, cfg); },
                 [&](const EmpiricalBayes& eb) { return eb_log_pred(x, y, eb.rule, cfg); },
                 [&](const Shrinkage&) { return shrinkage_log_pred(x, y, cfg); }},
      family);
}

PmfTable pred_pmf_table(const Counts& x, const PredictiveFamily& family, const ModelConfig& cfg,
                        double mass_tol, std::int64_t max_entries) {
  validate_family(family, cfg);
  x.require_dim(cfg, "pred_pmf_table");
  if (!(mass_tol > 0.0 && mass_tol < 1.0))
    throw DomainError("pred_pmf_table: mass_tol must lie in (0, 1)");

  PmfTable table;
  // Resolve the empirical-Bayes hyperparameter once; it depends on x only.
  PredictiveFamily resolved = family;
  if (const auto* eb = std::get_if<EmpiricalBayes>(&family)) {
    const AlphaEstimate est = estimate_alpha(eb->rule, x, cfg);
    table.alpha = est.alpha;
    table.outside_dominance_range = est.outside_dominance_range;
    resolved = FixedGamma{est.alpha};
  } else if (const auto* g = std::get_if<FixedGamma>(&family)) {
    table.alpha = g->alpha;
  }

  CompensatedSum mass;
  const double target = 1.0 - mass_tol;
  bool truncated = false;
  for (std::int64_t shell = 0; mass.value() < target && !truncated; ++shell) {
    for_each_composition(cfg.d, shell, [&](const CountVector& yv) {
      if (truncated) return;
      if (static_cast<std::int64_t>(table.entries.size()) >= max_entries) {
        truncated = true;
        return;
      }
      const Counts y(yv);
      const double p = std::exp(log_pred(resolved, x, y, cfg));
      mass.add(p);
      table.entries.push_back({yv, p});
    });
  }
  table.mass = mass.value();
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const PmfEntry& a, const PmfEntry& b) { return a.probability > b.probability; });
  if (truncated && table.mass < target) {
    std::ostringstream msg;
    msg << "pred_pmf_table: reached " << max_entries << " entries with mass " << table.mass;
    throw TableTruncationError(msg.str(), std::move(table));
  }
  return table;
}

}  // namespace ebpois

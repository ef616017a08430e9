#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ebpois/hyper.hpp"
#include "ebpois/model.hpp"

namespace ebpois {

/// Bayes predictive under the Jeffreys prior prod lambda_i^{-1/2}.
struct Jeffreys {};
/// Bayes predictive under iid Gamma(1/2, alpha) priors; alpha = 0 is the
/// Jeffreys limit.
struct FixedGamma {
  double alpha = 1.0;
};
/// FixedGamma with alpha estimated from x.
struct EmpiricalBayes {
  HyperRule rule = MomentRule{};
};
/// Bayes predictive under (sum lambda_i)^{1 - d/2} prod lambda_i^{-1/2}; d >= 2.
struct Shrinkage {};

using PredictiveFamily = std::variant<Jeffreys, FixedGamma, EmpiricalBayes, Shrinkage>;

std::string to_string(const PredictiveFamily& family);

/// Throws DomainError for FixedGamma with alpha < 0, Shrinkage with d < 2 and
/// moment rules with b <= 0.
void validate_family(const PredictiveFamily& family, const ModelConfig& cfg);

// All log predictives return ln q(y | x). Dimension mismatches throw
// ContractError.

double jeffreys_log_pred(const Counts& x, const Counts& y, const ModelConfig& cfg);

double gamma_log_pred(const Counts& x, const Counts& y, double alpha, const ModelConfig& cfg);

double eb_log_pred(const Counts& x, const Counts& y, const HyperRule& rule,
                   const ModelConfig& cfg);

/// Closed form obtained by splitting lambda into its total mu and a direction
/// on the simplex: a Gamma integral in mu and a Dirichlet integral in the
/// direction. With X = sum x, Y = sum y,
///   (X+1) ln(r/(r+s)) + Y ln(s/(r+s)) + lnG(X+Y+1) - lnG(X+1)
///   + lnG(X+d/2) - lnG(X+Y+d/2) + sum_i [lnG(x_i+y_i+1/2) - lnG(x_i+1/2) - ln y_i!].
double shrinkage_log_pred(const Counts& x, const Counts& y, const ModelConfig& cfg);

double log_pred(const PredictiveFamily& family, const Counts& x, const Counts& y,
                const ModelConfig& cfg);

/// sum_i [lnG(x_i+y_i+1/2) - lnG(x_i+1/2) - ln y_i!], shared by every family.
double coordinate_gamma_terms(const Counts& x, const Counts& y);

struct PmfEntry {
  CountVector y;
  double probability = 0.0;
};

struct PmfTable {
  std::vector<PmfEntry> entries;  // sorted by probability, descending
  double mass = 0.0;
  double alpha = 0.0;  // hyperparameter used (gamma / EB families), else 0
  bool outside_dominance_range = false;
};

class TableTruncationError : public TruncationError {
 public:
  TableTruncationError(const std::string& what, PmfTable partial)
      : TruncationError(what, partial.mass, 1.0 - partial.mass,
                        static_cast<std::int64_t>(partial.entries.size())),
        partial_(std::move(partial)) {}
  const PmfTable& partial() const noexcept { return partial_; }

 private:
  PmfTable partial_;
};

/// Enumerates y shell by shell (sum y = 0, 1, 2, ...; lexicographic within a
/// shell) until the accumulated mass reaches 1 - mass_tol, then sorts by
/// probability. Throws TableTruncationError past max_entries.
PmfTable pred_pmf_table(const Counts& x, const PredictiveFamily& family, const ModelConfig& cfg,
                        double mass_tol, std::int64_t max_entries = 2'000'000);

/// Calls visit(y) for every y in N^d with sum y = total, lexicographically.
template <class Visit>
void for_each_composition(int d, std::int64_t total, Visit&& visit) {
  CountVector y = CountVector::Zero(d);
  y(d - 1) = total;
  for (;;) {
    visit(static_cast<const CountVector&>(y));
    int j = d - 2;
    std::int64_t tail = y(d - 1);
    while (j >= 0 && tail == 0) {
      tail += y(j);
      --j;
    }
    if (j < 0) return;
    // y(j+1..d-1) holds `tail` units; move one to position j.
    ++y(j);
    for (int k = j + 1; k < d; ++k) y(k) = 0;
    y(d - 1) = tail - 1;
  }
}

}  // namespace ebpois

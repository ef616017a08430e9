#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cli/csv.hpp"
#include "ebpois/model.hpp"
#include "ebpois/special_fns.hpp"

namespace ebpois::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitVerifyFailed = 3,
};

/// One requested curve of risk-curve. Differences are Risk(p_J) minus the
/// risk of the other predictive; absolute risks use lambda_i = mu / d.
struct CurveSpec {
  enum class Kind { EbDiff, ShrinkageDiff, JeffreysRisk, EbRisk };
  Kind kind = Kind::EbDiff;
  std::optional<double> b;  // moment-rule b; unset means d/2 - 1

  std::string label(int d) const;
};

/// Parses "eb", "eb:0.5", "shrinkage", "jeffreys-risk", "eb-risk", "eb-risk:1".
CurveSpec parse_curve_spec(std::string_view text);

/// Evaluates each curve on the mu grid. With log_values the value becomes
/// ln(value) and err_bound becomes err_bound / value.
CurveSet compute_curves(const std::vector<CurveSpec>& specs, const ModelConfig& cfg,
                        const Eigen::VectorXd& mu_grid, bool log_values,
                        const SeriesPolicy& policy, unsigned threads);

/// f(lambda) at lambda = 0.01, 0.02, ..., 20.
CurveSet f_curve(const SeriesPolicy& policy, unsigned threads);

/// Full command-line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ebpois::cli

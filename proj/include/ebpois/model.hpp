#pragma once

#include <cstdint>
#include <initializer_list>

#include <Eigen/Core>

#include "ebpois/errors.hpp"

namespace ebpois {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// x ~ Po(r lambda) is observed, y ~ Po(s lambda) is predicted, lambda in R_+^d.
struct ModelConfig {
  int d = 1;
  double r = 1.0;
  double s = 1.0;

  void validate() const;

  /// ln((r + s) / r), the per-coordinate unit of every minimax statement.
  double log_ratio() const;
};

/// A vector of non-negative counts with its total cached.
class Counts {
 public:
  Counts() = default;
  explicit Counts(CountVector values);
  Counts(std::initializer_list<std::int64_t> values);

  const CountVector& values() const noexcept { return values_; }
  std::int64_t sum() const noexcept { return sum_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  std::int64_t operator[](int i) const { return values_(i); }

  /// Throws ContractError unless size() == cfg.d.
  void require_dim(const ModelConfig& cfg, const char* what) const;

 private:
  CountVector values_;
  std::int64_t sum_ = 0;
};

}  // namespace ebpois

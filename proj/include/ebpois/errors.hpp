#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ebpois {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inputs that disagree with each other (e.g. a count vector of the wrong length).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A hyperparameter estimator that has no value for the observed data.
class UndefinedEstimatorError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Base for failures of an iterative numerical procedure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An infinite series hit its term cap before the tail certificate met the
/// requested tolerance. Carries what was accumulated so far.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double partial_sum, double tail_bound,
                  std::int64_t terms)
      : NumericalError(what), partial_sum_(partial_sum), tail_bound_(tail_bound), terms_(terms) {}

  double partial_sum() const noexcept { return partial_sum_; }
  double tail_bound() const noexcept { return tail_bound_; }
  std::int64_t terms() const noexcept { return terms_; }

 private:
  double partial_sum_;
  double tail_bound_;
  std::int64_t terms_;
};

/// Adaptive quadrature ran out of subdivisions.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double partial_estimate, double err_estimate)
      : NumericalError(what), partial_(partial_estimate), err_(err_estimate) {}

  double partial_estimate() const noexcept { return partial_; }
  double err_estimate() const noexcept { return err_; }

 private:
  double partial_;
  double err_;
};

}  // namespace ebpois

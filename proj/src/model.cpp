#include "ebpois/model.hpp"

#include <cmath>
#include <sstream>

namespace ebpois {

void ModelConfig::validate() const {
  if (d < 1) throw DomainError("ModelConfig: d must be at least 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ModelConfig: r must be positive");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("ModelConfig: s must be positive");
}

double ModelConfig::log_ratio() const { return std::log1p(s / r); }

Counts::Counts(CountVector values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (values_(i) < 0) throw DomainError("Counts: entries must be non-negative");
  }
  sum_ = values_.sum();
}

Counts::Counts(std::initializer_list<std::int64_t> values)
    : Counts(CountVector::Map(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

void Counts::require_dim(const ModelConfig& cfg, const char* what) const {
  if (size() != cfg.d) {
    std::ostringstream msg;
    msg << what << ": count vector has length " << size() << " but d = " << cfg.d;
    throw ContractError(msg.str());
  }
}

}  // namespace ebpois

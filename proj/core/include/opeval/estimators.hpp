#pragma once

#include <cstddef>
#include <vector>

#include "opeval/dataset.hpp"
#include "opeval/policy.hpp"

namespace opeval {

struct EstimateReport {
  double value = 0.0;
  /// LR and reweighted REG: one weight per sample, pi(A_i)/pi_D(A_i) or
  /// pi(A_i)/pihat_D(A_i). REG: one weight per action, pi(a) when n(a) > 0
  /// and 0 otherwise.
  std::vector<double> weights;
  /// Actions with n(a) = 0, ascending.
  std::vector<std::size_t> unseen_actions;
};

/// (1/n) sum_i pi(A_i)/pi_D(A_i) R_i.
/// Throws ZeroPropensitySample if a logged action has pi_D = 0.
EstimateReport lr_estimate(const Policy& target, const Policy& behavior, const Dataset& data);

/// sum_a pi(a) R(a)/n(a) with unseen actions contributing 0. Never looks at
/// the behavior policy.
EstimateReport reg_estimate(const Policy& target, const Dataset& data);

/// REG written as LR with empirical propensities n(a)/n.
EstimateReport reg_estimate_reweighted(const Policy& target, const Dataset& data);

/// n(a)/n for every action; may contain zeros.
std::vector<double> empirical_propensity(const Dataset& data, std::size_t num_actions);

}  // namespace opeval

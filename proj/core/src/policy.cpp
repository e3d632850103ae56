#include "opeval/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "opeval/errors.hpp"

namespace opeval {

Policy::Policy(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidArgument("policy must have at least one action");
  // Neumaier summation keeps large composite policies (10^6 entries) within
  // tolerance.
  double total = 0.0;
  double compensation = 0.0;
  for (std::size_t a = 0; a < probs_.size(); ++a) {
    const double p = probs_[a];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw InvalidArgument("policy probability for action " + std::to_string(a) +
                            " is outside [0,1]");
    }
    const double t = total + p;
    compensation += std::abs(total) >= p ? (total - t) + p : (p - t) + total;
    total = t;
  }
  total += compensation;
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw InvalidArgument("policy probabilities sum to " + std::to_string(total));
  }
}

Policy Policy::proportional(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("policy weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("policy weights must not all be zero");
  std::vector<double> probs(weights.begin(), weights.end());
  for (double& p : probs) p /= total;
  return Policy(std::move(probs));
}

Policy Policy::uniform(std::size_t num_actions) {
  if (num_actions == 0) throw InvalidArgument("policy must have at least one action");
  return Policy(std::vector<double>(num_actions, 1.0 / static_cast<double>(num_actions)));
}

Policy Policy::deterministic(std::size_t num_actions, std::size_t action) {
  if (action >= num_actions) throw InvalidArgument("action index out of range");
  std::vector<double> probs(num_actions, 0.0);
  probs[action] = 1.0;
  return Policy(std::move(probs));
}

double Policy::min_prob() const noexcept { return *std::min_element(probs_.begin(), probs_.end()); }

double Policy::mass(std::span<const std::size_t> actions) const {
  double total = 0.0;
  for (std::size_t a : actions) {
    if (a >= probs_.size()) throw InvalidArgument("action index out of range");
    total += probs_[a];
  }
  return total;
}

}  // namespace opeval

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace opeval {

/// Probability vector over K actions. Immutable after construction.
class Policy {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws InvalidArgument unless every entry is in [0,1] and the entries
  /// sum to 1 within kSumTolerance.
  explicit Policy(std::vector<double> probs);

  /// Normalizes nonnegative weights into a policy.
  static Policy proportional(std::span<const double> weights);
  static Policy uniform(std::size_t num_actions);
  /// All mass on one action.
  static Policy deterministic(std::size_t num_actions, std::size_t action);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_[a]; }
  std::span<const double> probs() const noexcept { return probs_; }

  /// Smallest action probability (pi_D^* when this is a behavior policy).
  double min_prob() const noexcept;
  /// Total mass on a set of actions.
  double mass(std::span<const std::size_t> actions) const;

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  std::vector<double> probs_;
};

}  // namespace opeval

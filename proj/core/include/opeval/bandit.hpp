#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "opeval/dataset.hpp"
#include "opeval/policy.hpp"
#include "opeval/reward_model.hpp"

namespace opeval {

/// Behavior policy pi_D, target policy pi and reward model over K actions.
///
/// Construction never rejects an instance whose target reaches actions the
/// behavior policy never takes; it records them in unsupported_actions()
/// instead. LR and V1/V2 refuse such instances, REG does not.
class BanditInstance {
 public:
  BanditInstance(Policy behavior, Policy target, RewardModel rewards);

  std::size_t num_actions() const noexcept { return behavior_.size(); }
  const Policy& behavior() const noexcept { return behavior_; }
  const Policy& target() const noexcept { return target_; }
  const RewardModel& rewards() const noexcept { return rewards_; }

  bool identifiable() const noexcept { return unsupported_.empty(); }
  /// Actions with pi(a) > 0 and pi_D(a) = 0.
  const std::vector<std::size_t>& unsupported_actions() const noexcept { return unsupported_; }
  /// Throws UnidentifiableError naming the offending actions.
  void require_identifiable() const;

 private:
  Policy behavior_;
  Policy target_;
  RewardModel rewards_;
  std::vector<std::size_t> unsupported_;
};

/// v^pi = sum_a pi(a) r(a).
double policy_value(const BanditInstance& instance);

/// n i.i.d. draws A ~ pi_D, R ~ Phi(.|A). Deterministic in seed.
Dataset sample_dataset(const BanditInstance& instance, std::size_t n, std::uint64_t seed);

enum class EstimatorId { kLr, kReg, kRegReweighted };

const char* to_string(EstimatorId id);
/// Accepts "lr", "reg", "reg_reweighted". Throws InvalidArgument otherwise.
EstimatorId parse_estimator(const std::string& name);

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  std::uint64_t outcomes = 0;  ///< weighted outcomes visited
};

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

/// Number of (action sequence, reward outcome) leaves the oracle would visit.
/// Saturates at UINT64_MAX.
std::uint64_t exact_outcome_count(const BanditInstance& instance, std::size_t n);

/// Brute-force oracle: walks every action sequence of length n together with
/// every reward outcome, weighting each leaf by its exact probability, and
/// returns E[v], V(v) and E[(v - v^pi)^2] for the named estimator.
///
/// Requires discrete rewards. Throws BudgetExceeded when the leaf count is
/// above budget. Probabilities are carried in log space once n > 30.
ExactMoments enumerate_exact_moments(const BanditInstance& instance, std::size_t n,
                                     EstimatorId estimator,
                                     std::uint64_t budget = kDefaultOracleBudget);

}  // namespace opeval

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "opeval/bandit.hpp"
#include "opeval/dataset.hpp"
#include "opeval/policy.hpp"
#include "opeval/reward_model.hpp"

namespace opeval {

/// Per-state (or per-context) action distributions pi(a|x).
using ConditionalPolicy = std::vector<Policy>;

/// Contextual bandit with M contexts and K actions. Composite action (x, a)
/// maps to index x*K + a.
class ContextualInstance {
 public:
  ContextualInstance(Policy context_dist, ConditionalPolicy behavior, ConditionalPolicy target,
                     std::vector<RewardDist> rewards);

  std::size_t num_contexts() const noexcept { return context_.size(); }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t index(std::size_t x, std::size_t a) const noexcept { return x * num_actions_ + a; }

  const Policy& context_dist() const noexcept { return context_; }
  const ConditionalPolicy& behavior() const noexcept { return behavior_; }
  const ConditionalPolicy& target() const noexcept { return target_; }
  const RewardDist& reward(std::size_t x, std::size_t a) const { return rewards_[index(x, a)]; }
  std::span<const RewardDist> rewards() const noexcept { return rewards_; }

 private:
  Policy context_;
  std::size_t num_actions_;
  ConditionalPolicy behavior_;
  ConditionalPolicy target_;
  std::vector<RewardDist> rewards_;
};

struct ContextualSample {
  std::size_t context;
  std::size_t action;
  double reward;
};

/// Bandit over composite actions with behavior mu (x) pi_D and target mu (x) pi.
BanditInstance contextual_to_bandit(const ContextualInstance& instance);

/// sum_x mu(x) sum_a pi(a|x) r(x,a), computed directly on the contextual model.
double contextual_policy_value(const ContextualInstance& instance);

std::vector<ContextualSample> sample_contextual(const ContextualInstance& instance,
                                                std::size_t n, std::uint64_t seed);

/// Maps contextual samples onto the composite-action bandit log.
Dataset to_bandit_dataset(const ContextualInstance& instance,
                          std::span<const ContextualSample> data);

/// REG on the composite bandit in a single pass with a sparse (x,a) table.
/// Memory and time do not depend on M*K; result is bit-identical to
/// reg_estimate on the reduced instance.
double contextual_reg_fast(const ContextualInstance& instance,
                           std::span<const ContextualSample> data);

/// Fixed-horizon finite MDP <X, A, P, Phi, nu, H> together with the behavior
/// and target policies under evaluation.
class MdpInstance {
 public:
  /// transitions and rewards are indexed by x*K + a; transitions[x*K+a] is
  /// the next-state distribution over N states.
  MdpInstance(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
              Policy start, std::vector<Policy> transitions, std::vector<RewardDist> rewards,
              ConditionalPolicy behavior, ConditionalPolicy target);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t horizon() const noexcept { return horizon_; }
  const Policy& start() const noexcept { return start_; }
  const Policy& transition(std::size_t x, std::size_t a) const {
    return transitions_[x * num_actions_ + a];
  }
  const RewardDist& reward(std::size_t x, std::size_t a) const {
    return rewards_[x * num_actions_ + a];
  }
  const ConditionalPolicy& behavior() const noexcept { return behavior_; }
  const ConditionalPolicy& target() const noexcept { return target_; }
  std::span<const Policy> transitions() const noexcept { return transitions_; }
  std::span<const RewardDist> rewards() const noexcept { return rewards_; }

  /// Same MDP evaluated at a different horizon.
  MdpInstance with_horizon(std::size_t horizon) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  Policy start_;
  std::vector<Policy> transitions_;
  std::vector<RewardDist> rewards_;
  ConditionalPolicy behavior_;
  ConditionalPolicy target_;
};

/// States x(1..H+1) (the last one terminal) and actions a(1..H).
struct TrajectoryPath {
  std::vector<std::size_t> states;
  std::vector<std::size_t> actions;

  friend auto operator<=>(const TrajectoryPath&, const TrajectoryPath&) = default;
};

struct Trajectory {
  TrajectoryPath path;
  std::vector<double> rewards;  ///< length H
};

/// nu(x1) prod_h pi(a_h|x_h) P(x_{h+1}|x_h,a_h).
double trajectory_probability(const MdpInstance& mdp, const ConditionalPolicy& policy,
                              const TrajectoryPath& path);

/// v^pi = E[sum_h R(h)] by backward induction over the horizon.
double mdp_policy_value(const MdpInstance& mdp, const ConditionalPolicy& policy);

std::vector<Trajectory> sample_trajectories(const MdpInstance& mdp,
                                            const ConditionalPolicy& policy, std::size_t n,
                                            std::uint64_t seed);

/// (1/n) sum_t prod_h pi(a_h|x_h)/pi_D(a_h|x_h) * sum_h R_t(h).
double trajectory_lr_estimate(const MdpInstance& mdp, std::span<const Trajectory> data);

/// Bandit whose actions are the trajectories reachable under the behavior or
/// the target policy, in lexicographic order.
struct MdpReduction {
  BanditInstance bandit;
  std::vector<TrajectoryPath> paths;

  /// Index of a path among the reduced actions, if it is reachable.
  std::optional<std::size_t> find(const TrajectoryPath& path) const;
  /// Throws InvalidArgument for paths outside the reduction.
  Dataset to_dataset(std::span<const Trajectory> data) const;
};

/// Enumerates reachable trajectories depth-first. Throws BudgetExceeded once
/// more than `budget` partial trajectories have been expanded. Per-trajectory
/// rewards are the convolution of the per-step rewards.
MdpReduction mdp_to_bandit(const MdpInstance& mdp, std::uint64_t budget = kDefaultOracleBudget);

/// P(X(H+1) = state) under a policy, by forward propagation of the state
/// distribution.
double terminal_state_probability(const MdpInstance& mdp, const ConditionalPolicy& policy,
                                  std::size_t state);

inline constexpr std::size_t kLockLeft = 0;
inline constexpr std::size_t kLockRight = 1;

/// Chain MDP on states 0..N-1 starting at 0. Left returns to 0, right moves
/// to x+1 (N-1 is absorbing under right). The only reward, R_max, is paid on
/// the step that enters N-1. Behavior takes left with probability p_star in
/// every state; the target always goes right. Horizon defaults to N-1.
MdpInstance combination_lock(std::size_t num_states, double p_star, double rmax = 1.0,
                             std::optional<std::size_t> horizon = std::nullopt);

}  // namespace opeval

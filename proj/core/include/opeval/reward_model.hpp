#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace opeval {

struct PointMass {
  double value = 0.0;
};

/// Reward in {0, 1} with P(1) = p.
struct Bernoulli {
  double p = 0.0;
};

struct Normal {
  double mean = 0.0;
  double variance = 0.0;
};

/// Finite-support reward. Produced when per-step rewards of an MDP trajectory
/// are convolved; values are kept sorted and unique.
struct Discrete {
  std::vector<double> values;
  std::vector<double> probs;
};

using RewardDist = std::variant<PointMass, Bernoulli, Normal, Discrete>;

/// One (value, probability) atom of a discrete reward distribution.
struct RewardAtom {
  double value;
  double prob;
};

double mean(const RewardDist& d);
double variance(const RewardDist& d);
bool is_discrete(const RewardDist& d);
/// Support atoms of a discrete distribution with positive probability.
/// Throws InvalidArgument for Normal with positive variance.
std::vector<RewardAtom> atoms(const RewardDist& d);
/// Distribution of the sum of two independent rewards.
RewardDist convolve(const RewardDist& a, const RewardDist& b);

/// Per-action reward distributions with an optional mean cap R_max.
class RewardModel {
 public:
  explicit RewardModel(std::vector<RewardDist> dists,
                       std::optional<double> rmax = std::nullopt);

  std::size_t size() const noexcept { return dists_.size(); }
  const RewardDist& dist(std::size_t a) const { return dists_[a]; }
  std::span<const RewardDist> dists() const noexcept { return dists_; }
  double mean(std::size_t a) const { return means_[a]; }
  double variance(std::size_t a) const { return variances_[a]; }
  std::span<const double> means() const noexcept { return means_; }
  std::span<const double> variances() const noexcept { return variances_; }
  const std::optional<double>& rmax() const noexcept { return rmax_; }

  /// True when every action has a finite-support distribution.
  bool all_discrete() const noexcept;
  /// Throws InvalidArgument unless 0 <= mean(a) <= rmax for every action.
  /// Only bound computations call this; R_max is not enforced otherwise.
  void require_bounded_means(double rmax) const;

 private:
  std::vector<RewardDist> dists_;
  std::vector<double> means_;
  std::vector<double> variances_;
  std::optional<double> rmax_;
};

/// Draws one reward. Only the engine's uniform and normal streams are used.
template <class Engine>
double sample_reward(const RewardDist& d, Engine& rng);

}  // namespace opeval

#include "opeval/detail/reward_sampling.hpp"

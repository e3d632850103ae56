#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "opeval/bandit.hpp"
#include "opeval/montecarlo.hpp"

namespace opeval {

inline constexpr double kExperimentRewardVariance = 0.01;

struct ExperimentInstance {
  std::string id;
  BanditInstance instance;
  double v1 = 0.0;
  double v2 = 0.0;
};

struct ExperimentBundle {
  std::string experiment;
  std::vector<ExperimentInstance> instances;
  McResult result;
};

/// Actions a = 0..K-1 with r(a) = a/K, pi(a) ∝ a and Normal rewards of
/// variance 0.01. Behavior is one of "prop" (pi_D ∝ a), "uniform" or
/// "reverse" (pi_D ∝ K - a).
ExperimentInstance comparison_instance(const std::string& behavior, std::size_t num_actions = 10);

/// Uniform behavior over K actions, otherwise as comparison_instance.
ExperimentInstance kscaling_instance(std::size_t num_actions);

struct ComparisonOptions {
  std::size_t num_actions = 10;
  std::size_t replications = 10'000;
  std::vector<std::size_t> sample_sizes = decade_grid(10, 10'000);
  std::uint64_t seed = 20160317;
  std::size_t threads = 0;
};

/// LR and REG on the prop, uniform and reverse behavior instances.
ExperimentBundle experiment_estimator_comparison(const ComparisonOptions& options = {});

struct KScalingOptions {
  std::vector<std::size_t> num_actions{50, 100, 200, 500, 1000};
  std::size_t replications = 10'000;
  /// Per-K grid: log_grid(max(1, K/grid_lo_div), grid_hi_mult * K, grid_points).
  std::size_t grid_lo_div = 50;
  std::size_t grid_hi_mult = 20;
  std::size_t grid_points = 40;
  std::uint64_t seed = 20160317;
  std::size_t threads = 0;
};

/// REG on uniform-behavior instances of increasing K.
ExperimentBundle experiment_k_scaling(const KScalingOptions& options = {});

/// Sample size at which the estimator's nMSE peaks for one instance; the
/// curve decreases from there on.
std::size_t nmse_peak_n(const McResult& result, const std::string& instance_id,
                        EstimatorId estimator);

}  // namespace opeval

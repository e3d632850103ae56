#include "opeval/experiments.hpp"

#include <algorithm>
#include <string>

#include "opeval/analytics.hpp"
#include "opeval/errors.hpp"

namespace opeval {
namespace {

ExperimentInstance make_instance(std::string id, std::size_t k, std::vector<double> behavior_weights) {
  std::vector<double> target_weights(k);
  std::vector<RewardDist> rewards;
  for (std::size_t a = 0; a < k; ++a) {
    target_weights[a] = static_cast<double>(a);
    rewards.push_back(Normal{static_cast<double>(a) / static_cast<double>(k), kExperimentRewardVariance});
  }
  BanditInstance instance(Policy::proportional(behavior_weights), Policy::proportional(target_weights),
                          RewardModel(std::move(rewards), 1.0));
  const VarianceTerms vt = compute_v1_v2(instance);
  return {std::move(id), std::move(instance), vt.v1, vt.v2};
}

}  // namespace

ExperimentInstance comparison_instance(const std::string& behavior, std::size_t num_actions) {
  if (num_actions < 2) throw InvalidArgument("comparison instances need K >= 2");
  std::vector<double> w(num_actions);
  for (std::size_t a = 0; a < num_actions; ++a) {
    const auto ad = static_cast<double>(a);
    const auto kd = static_cast<double>(num_actions);
    if (behavior == "prop") {
      w[a] = ad;
    } else if (behavior == "uniform") {
      w[a] = 1.0;
    } else if (behavior == "reverse") {
      w[a] = kd - ad;
    } else {
      throw InvalidArgument("unknown behavior '" + behavior + "'");
    }
  }
  return make_instance(behavior, num_actions, std::move(w));
}

ExperimentInstance kscaling_instance(std::size_t num_actions) {
  if (num_actions < 2) throw InvalidArgument("K-scaling instances need K >= 2");
  return make_instance("K=" + std::to_string(num_actions), num_actions,
                       std::vector<double>(num_actions, 1.0));
}

ExperimentBundle experiment_estimator_comparison(const ComparisonOptions& options) {
  ExperimentBundle bundle;
  bundle.experiment = "comparison";
  McConfig config;
  config.replications = options.replications;
  config.sample_sizes = options.sample_sizes;
  config.seed = options.seed;
  config.threads = options.threads;
  config.estimators = {EstimatorId::kLr, EstimatorId::kReg};
  for (const char* behavior : {"prop", "uniform", "reverse"}) {
    ExperimentInstance inst = comparison_instance(behavior, options.num_actions);
    bundle.result.append(run_mc(inst.instance, config, bundle.experiment, inst.id));
    bundle.instances.push_back(std::move(inst));
  }
  return bundle;
}

ExperimentBundle experiment_k_scaling(const KScalingOptions& options) {
  ExperimentBundle bundle;
  bundle.experiment = "kscaling";
  for (std::size_t k : options.num_actions) {
    ExperimentInstance inst = kscaling_instance(k);
    McConfig config;
    config.replications = options.replications;
    config.sample_sizes = log_grid(std::max<std::size_t>(1, k / options.grid_lo_div),
                                   options.grid_hi_mult * k, options.grid_points);
    config.seed = options.seed;
    config.threads = options.threads;
    config.estimators = {EstimatorId::kReg};
    bundle.result.append(run_mc(inst.instance, config, bundle.experiment, inst.id));
    bundle.instances.push_back(std::move(inst));
  }
  return bundle;
}

std::size_t nmse_peak_n(const McResult& result, const std::string& instance_id,
                        EstimatorId estimator) {
  const McRow* best = nullptr;
  for (const McRow& row : result.rows) {
    if (row.instance_id != instance_id || row.estimator != estimator) continue;
    if (best == nullptr || row.nmse > best->nmse) best = &row;
  }
  if (best == nullptr) throw InvalidArgument("no rows for instance '" + instance_id + "'");
  return best->n;
}

}  // namespace opeval

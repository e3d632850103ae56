#include "opeval/estimators.hpp"

#include <string>

#include "opeval/errors.hpp"

namespace opeval {
namespace {

void require_dims(const Policy& target, const Dataset& data) {
  if (target.size() != data.num_actions())
    throw InvalidArgument("policy and dataset disagree on the number of actions");
}

std::vector<std::size_t> unseen(const Dataset& data) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < data.num_actions(); ++a)
    if (data.counts()[a] == 0) out.push_back(a);
  return out;
}

}  // namespace

EstimateReport lr_estimate(const Policy& target, const Policy& behavior, const Dataset& data) {
  require_dims(target, data);
  if (behavior.size() != target.size())
    throw InvalidArgument("target and behavior disagree on the number of actions");
  EstimateReport report;
  report.weights.reserve(data.size());
  double total = 0.0;
  for (const Sample& s : data.samples()) {
    const double propensity = behavior[s.action];
    if (propensity == 0.0) {
      throw ZeroPropensitySample("logged action " + std::to_string(s.action) +
                                 " has zero behavior probability");
    }
    const double w = target[s.action] / propensity;
    report.weights.push_back(w);
    total += w * s.reward;
  }
  report.value = data.size() == 0 ? 0.0 : total / static_cast<double>(data.size());
  report.unseen_actions = unseen(data);
  return report;
}

EstimateReport reg_estimate(const Policy& target, const Dataset& data) {
  require_dims(target, data);
  EstimateReport report;
  report.weights.assign(data.num_actions(), 0.0);
  double value = 0.0;
  for (std::size_t a = 0; a < data.num_actions(); ++a) {
    const std::size_t count = data.counts()[a];
    if (count == 0) {
      report.unseen_actions.push_back(a);
      continue;
    }
    report.weights[a] = target[a];
    value += target[a] * (data.sums()[a] / static_cast<double>(count));
  }
  report.value = value;
  return report;
}

EstimateReport reg_estimate_reweighted(const Policy& target, const Dataset& data) {
  require_dims(target, data);
  const std::vector<double> propensity = empirical_propensity(data, data.num_actions());
  EstimateReport report;
  report.weights.reserve(data.size());
  double total = 0.0;
  for (const Sample& s : data.samples()) {
    // Every logged action has n(a) >= 1, so the empirical propensity is positive.
    const double w = target[s.action] / propensity[s.action];
    report.weights.push_back(w);
    total += w * s.reward;
  }
  report.value = data.size() == 0 ? 0.0 : total / static_cast<double>(data.size());
  report.unseen_actions = unseen(data);
  return report;
}

std::vector<double> empirical_propensity(const Dataset& data, std::size_t num_actions) {
  if (num_actions != data.num_actions())
    throw InvalidArgument("dataset covers a different number of actions");
  std::vector<double> out(num_actions, 0.0);
  if (data.size() == 0) return out;
  const double n = static_cast<double>(data.size());
  for (std::size_t a = 0; a < num_actions; ++a) out[a] = static_cast<double>(data.counts()[a]) / n;
  return out;
}

}  // namespace opeval

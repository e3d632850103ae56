#include "opeval/bandit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "opeval/detail/categorical.hpp"
#include "opeval/errors.hpp"
#include "opeval/estimators.hpp"
#include "opeval/rng.hpp"

namespace opeval {

BanditInstance::BanditInstance(Policy behavior, Policy target, RewardModel rewards)
    : behavior_(std::move(behavior)), target_(std::move(target)), rewards_(std::move(rewards)) {
  if (target_.size() != behavior_.size() || rewards_.size() != behavior_.size()) {
    throw InvalidArgument("behavior, target and rewards must have the same number of actions");
  }
  for (std::size_t a = 0; a < behavior_.size(); ++a) {
    if (target_[a] > 0.0 && behavior_[a] == 0.0) unsupported_.push_back(a);
  }
}

void BanditInstance::require_identifiable() const {
  if (unsupported_.empty()) return;
  std::string list;
  for (std::size_t a : unsupported_) list += (list.empty() ? "" : ", ") + std::to_string(a);
  throw UnidentifiableError("target policy puts mass on action(s) " + list +
                                " never taken by the behavior policy",
                            unsupported_);
}

double policy_value(const BanditInstance& instance) {
  double v = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a)
    v += instance.target()[a] * instance.rewards().mean(a);
  return v;
}

Dataset sample_dataset(const BanditInstance& instance, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  Engine rng = make_engine(seed);
  const detail::CategoricalSampler pick(instance.behavior().probs());
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = pick(rng);
    samples.push_back({a, sample_reward(instance.rewards().dist(a), rng)});
  }
  return Dataset(instance.num_actions(), std::move(samples));
}

const char* to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::kLr: return "lr";
    case EstimatorId::kReg: return "reg";
    case EstimatorId::kRegReweighted: return "reg_reweighted";
  }
  return "?";
}

EstimatorId parse_estimator(const std::string& name) {
  if (name == "lr") return EstimatorId::kLr;
  if (name == "reg") return EstimatorId::kReg;
  if (name == "reg_reweighted") return EstimatorId::kRegReweighted;
  throw InvalidArgument("unknown estimator '" + name + "'");
}

std::uint64_t exact_outcome_count(const BanditInstance& instance, std::size_t n) {
  std::uint64_t branching = 0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    if (instance.behavior()[a] > 0.0) branching += atoms(instance.rewards().dist(a)).size();
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (branching != 0 && total > std::numeric_limits<std::uint64_t>::max() / branching)
      return std::numeric_limits<std::uint64_t>::max();
    total *= branching;
  }
  return total;
}

namespace {

struct Branch {
  std::size_t action;
  double value;
  double prob;
  double log_prob;
};

class Enumerator {
 public:
  Enumerator(const BanditInstance& instance, std::size_t n, EstimatorId estimator)
      : instance_(instance),
        estimator_(estimator),
        log_space_(n > 30),
        truth_(policy_value(instance)),
        sequence_(n) {
    for (std::size_t a = 0; a < instance.num_actions(); ++a) {
      const double pa = instance.behavior()[a];
      if (pa == 0.0) continue;
      for (const RewardAtom& atom : atoms(instance.rewards().dist(a))) {
        branches_.push_back({a, atom.value, pa * atom.prob, std::log(pa) + std::log(atom.prob)});
      }
    }
  }

  ExactMoments run() {
    walk(0, 1.0, 0.0);
    ExactMoments out;
    out.mean = first_;
    out.variance = std::max(0.0, second_ - first_ * first_);
    out.mse = squared_error_;
    out.outcomes = leaves_;
    return out;
  }

 private:
  void walk(std::size_t pos, double prob, double log_prob) {
    if (pos == sequence_.size()) {
      leaf(log_space_ ? std::exp(log_prob) : prob);
      return;
    }
    for (const Branch& b : branches_) {
      sequence_[pos] = {b.action, b.value};
      walk(pos + 1, prob * b.prob, log_prob + b.log_prob);
    }
  }

  void leaf(double weight) {
    const Dataset data(instance_.num_actions(), sequence_);
    double v = 0.0;
    switch (estimator_) {
      case EstimatorId::kLr:
        v = lr_estimate(instance_.target(), instance_.behavior(), data).value;
        break;
      case EstimatorId::kReg: v = reg_estimate(instance_.target(), data).value; break;
      case EstimatorId::kRegReweighted:
        v = reg_estimate_reweighted(instance_.target(), data).value;
        break;
    }
    first_ += weight * v;
    second_ += weight * v * v;
    squared_error_ += weight * (v - truth_) * (v - truth_);
    ++leaves_;
  }

  const BanditInstance& instance_;
  EstimatorId estimator_;
  bool log_space_;
  double truth_;
  std::vector<Sample> sequence_;
  std::vector<Branch> branches_;
  double first_ = 0.0;
  double second_ = 0.0;
  double squared_error_ = 0.0;
  std::uint64_t leaves_ = 0;
};

}  // namespace

ExactMoments enumerate_exact_moments(const BanditInstance& instance, std::size_t n,
                                     EstimatorId estimator, std::uint64_t budget) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  if (!instance.rewards().all_discrete())
    throw InvalidArgument("exact enumeration needs discrete rewards");
  if (estimator == EstimatorId::kLr) instance.require_identifiable();
  const std::uint64_t outcomes = exact_outcome_count(instance, n);
  if (outcomes > budget) {
    throw BudgetExceeded("exact enumeration needs " + std::to_string(outcomes) +
                         " outcomes, budget is " + std::to_string(budget));
  }
  return Enumerator(instance, n, estimator).run();
}

}  // namespace opeval

#include "opeval/random_instances.hpp"

#include <random>

namespace opeval {
namespace {

std::size_t draw_size(Engine& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(Engine& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Policy random_policy(Engine& rng, std::size_t num_actions, double zero_chance) {
  std::vector<double> w(num_actions);
  bool any = false;
  for (double& x : w) {
    x = uniform(rng, 0.05, 1.0);
    if (uniform(rng, 0.0, 1.0) < zero_chance) x = 0.0;
    any = any || x > 0.0;
  }
  if (!any) w[draw_size(rng, 0, num_actions - 1)] = 1.0;
  return Policy::proportional(w);
}

BanditInstance random_discrete_instance(Engine& rng, std::size_t max_actions) {
  const std::size_t k = draw_size(rng, 1, max_actions);
  std::vector<RewardDist> rewards;
  for (std::size_t a = 0; a < k; ++a) {
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      rewards.push_back(PointMass{uniform(rng, 0.0, 1.0)});
    } else {
      rewards.push_back(Bernoulli{uniform(rng, 0.0, 1.0)});
    }
  }
  Policy behavior = random_policy(rng, k);
  Policy target = random_policy(rng, k, 0.25);
  return BanditInstance(std::move(behavior), std::move(target), RewardModel(std::move(rewards), 1.0));
}

BanditInstance random_normal_instance(Engine& rng, std::size_t max_actions, double min_variance) {
  const std::size_t k = draw_size(rng, 1, max_actions);
  std::vector<RewardDist> rewards;
  for (std::size_t a = 0; a < k; ++a)
    rewards.push_back(Normal{uniform(rng, 0.0, 1.0), uniform(rng, min_variance, 0.25)});
  Policy behavior = random_policy(rng, k);
  Policy target = random_policy(rng, k, 0.25);
  return BanditInstance(std::move(behavior), std::move(target), RewardModel(std::move(rewards), 1.0));
}

ContextualInstance random_contextual_instance(Engine& rng, std::size_t max_contexts,
                                              std::size_t max_actions) {
  const std::size_t m = draw_size(rng, 1, max_contexts);
  const std::size_t k = draw_size(rng, 1, max_actions);
  ConditionalPolicy behavior;
  ConditionalPolicy target;
  std::vector<RewardDist> rewards;
  for (std::size_t x = 0; x < m; ++x) {
    behavior.push_back(random_policy(rng, k));
    target.push_back(random_policy(rng, k, 0.25));
    for (std::size_t a = 0; a < k; ++a) {
      if (uniform(rng, 0.0, 1.0) < 0.5) {
        rewards.push_back(Bernoulli{uniform(rng, 0.0, 1.0)});
      } else {
        rewards.push_back(Normal{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 0.1)});
      }
    }
  }
  return ContextualInstance(random_policy(rng, m, 0.2), std::move(behavior), std::move(target),
                            std::move(rewards));
}

MdpInstance random_mdp_instance(Engine& rng, std::size_t max_states, std::size_t max_actions,
                                std::size_t max_horizon) {
  const std::size_t n = draw_size(rng, 1, max_states);
  const std::size_t k = draw_size(rng, 1, max_actions);
  const std::size_t h = draw_size(rng, 1, max_horizon);
  const bool gaussian = uniform(rng, 0.0, 1.0) < 0.5;
  std::vector<Policy> transitions;
  std::vector<RewardDist> rewards;
  ConditionalPolicy behavior;
  ConditionalPolicy target;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t a = 0; a < k; ++a) {
      transitions.push_back(random_policy(rng, n, 0.3));
      if (gaussian) {
        rewards.push_back(Normal{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 0.1)});
      } else if (uniform(rng, 0.0, 1.0) < 0.5) {
        rewards.push_back(PointMass{uniform(rng, 0.0, 1.0)});
      } else {
        rewards.push_back(Bernoulli{uniform(rng, 0.0, 1.0)});
      }
    }
    behavior.push_back(random_policy(rng, k));
    target.push_back(random_policy(rng, k, 0.3));
  }
  return MdpInstance(n, k, h, random_policy(rng, n, 0.3), std::move(transitions), std::move(rewards),
                     std::move(behavior), std::move(target));
}

}  // namespace opeval

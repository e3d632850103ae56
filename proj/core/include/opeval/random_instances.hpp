#pragma once

#include <cstddef>

#include "opeval/bandit.hpp"
#include "opeval/reductions.hpp"
#include "opeval/rng.hpp"

namespace opeval {

/// Generators for property sweeps. All draw only from the supplied engine.

/// Random probability vector; with zero_chance each entry may be zeroed (at
/// least one entry stays positive).
Policy random_policy(Engine& rng, std::size_t num_actions, double zero_chance = 0.0);

/// K in [1, max_actions], fully supported behavior, target possibly sparse,
/// PointMass or Bernoulli rewards with means in [0, 1].
BanditInstance random_discrete_instance(Engine& rng, std::size_t max_actions);

/// K in [1, max_actions], Normal rewards with means in [0, 1] and variances in
/// [min_variance, 0.25].
BanditInstance random_normal_instance(Engine& rng, std::size_t max_actions,
                                      double min_variance = 0.01);

ContextualInstance random_contextual_instance(Engine& rng, std::size_t max_contexts,
                                              std::size_t max_actions);

/// Random kernels with some zero transitions; PointMass/Bernoulli/Normal
/// step rewards kept within one family per instance so trajectories reduce.
MdpInstance random_mdp_instance(Engine& rng, std::size_t max_states, std::size_t max_actions,
                                std::size_t max_horizon);

}  // namespace opeval

#include "opeval/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "opeval/detail/categorical.hpp"
#include "opeval/errors.hpp"
#include "opeval/estimators.hpp"
#include "opeval/rng.hpp"

namespace opeval {
namespace {

void check_rows(const ConditionalPolicy& table, std::size_t rows, std::size_t cols,
                const char* name) {
  if (table.size() != rows)
    throw InvalidArgument(std::string(name) + " must have one row per state/context");
  for (const Policy& row : table) {
    if (row.size() != cols)
      throw InvalidArgument(std::string(name) + " rows must cover every action");
  }
}

std::vector<detail::CategoricalSampler> samplers(const ConditionalPolicy& table) {
  std::vector<detail::CategoricalSampler> out;
  out.reserve(table.size());
  for (const Policy& row : table) out.emplace_back(row.probs());
  return out;
}

}  // namespace

ContextualInstance::ContextualInstance(Policy context_dist, ConditionalPolicy behavior,
                                       ConditionalPolicy target, std::vector<RewardDist> rewards)
    : context_(std::move(context_dist)),
      num_actions_(behavior.empty() ? 0 : behavior.front().size()),
      behavior_(std::move(behavior)),
      target_(std::move(target)),
      rewards_(std::move(rewards)) {
  if (num_actions_ == 0) throw InvalidArgument("contextual instance needs at least one action");
  check_rows(behavior_, context_.size(), num_actions_, "behavior");
  check_rows(target_, context_.size(), num_actions_, "target");
  if (rewards_.size() != context_.size() * num_actions_)
    throw InvalidArgument("contextual rewards must have M*K entries");
  // Validates every reward distribution.
  RewardModel check(rewards_);
}

BanditInstance contextual_to_bandit(const ContextualInstance& instance) {
  const std::size_t m = instance.num_contexts();
  const std::size_t k = instance.num_actions();
  std::vector<double> behavior(m * k);
  std::vector<double> target(m * k);
  for (std::size_t x = 0; x < m; ++x) {
    const double mu = instance.context_dist()[x];
    for (std::size_t a = 0; a < k; ++a) {
      behavior[instance.index(x, a)] = mu * instance.behavior()[x][a];
      target[instance.index(x, a)] = mu * instance.target()[x][a];
    }
  }
  std::vector<RewardDist> rewards(instance.rewards().begin(), instance.rewards().end());
  return BanditInstance(Policy(std::move(behavior)), Policy(std::move(target)),
                        RewardModel(std::move(rewards), 1.0));
}

double contextual_policy_value(const ContextualInstance& instance) {
  double v = 0.0;
  for (std::size_t x = 0; x < instance.num_contexts(); ++x) {
    double inner = 0.0;
    for (std::size_t a = 0; a < instance.num_actions(); ++a)
      inner += instance.target()[x][a] * mean(instance.reward(x, a));
    v += instance.context_dist()[x] * inner;
  }
  return v;
}

std::vector<ContextualSample> sample_contextual(const ContextualInstance& instance,
                                                std::size_t n, std::uint64_t seed) {
  Engine rng = make_engine(seed);
  const detail::CategoricalSampler pick_context(instance.context_dist().probs());
  const auto pick_action = samplers(instance.behavior());
  std::vector<ContextualSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = pick_context(rng);
    const std::size_t a = pick_action[x](rng);
    out.push_back({x, a, sample_reward(instance.reward(x, a), rng)});
  }
  return out;
}

Dataset to_bandit_dataset(const ContextualInstance& instance,
                          std::span<const ContextualSample> data) {
  std::vector<Sample> samples;
  samples.reserve(data.size());
  for (const ContextualSample& s : data) {
    if (s.context >= instance.num_contexts() || s.action >= instance.num_actions())
      throw InvalidArgument("contextual sample out of range");
    samples.push_back({instance.index(s.context, s.action), s.reward});
  }
  return Dataset(instance.num_contexts() * instance.num_actions(), std::move(samples));
}

double contextual_reg_fast(const ContextualInstance& instance,
                           std::span<const ContextualSample> data) {
  struct Cell {
    std::size_t count = 0;
    double sum = 0.0;
  };
  std::unordered_map<std::size_t, Cell> cells;
  cells.reserve(data.size());
  for (const ContextualSample& s : data) {
    if (s.context >= instance.num_contexts() || s.action >= instance.num_actions())
      throw InvalidArgument("contextual sample out of range");
    Cell& c = cells[instance.index(s.context, s.action)];
    ++c.count;
    c.sum += s.reward;
  }
  // Ascending composite index so the summation order matches reg_estimate.
  std::vector<std::size_t> keys;
  keys.reserve(cells.size());
  for (const auto& [key, cell] : cells) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  const std::size_t k = instance.num_actions();
  double value = 0.0;
  for (std::size_t key : keys) {
    const Cell& c = cells[key];
    const std::size_t x = key / k;
    const std::size_t a = key % k;
    const double weight = instance.context_dist()[x] * instance.target()[x][a];
    value += weight * (c.sum / static_cast<double>(c.count));
  }
  return value;
}

MdpInstance::MdpInstance(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                         Policy start, std::vector<Policy> transitions,
                         std::vector<RewardDist> rewards, ConditionalPolicy behavior,
                         ConditionalPolicy target)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      start_(std::move(start)),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      behavior_(std::move(behavior)),
      target_(std::move(target)) {
  if (num_states_ == 0 || num_actions_ == 0) throw InvalidArgument("MDP needs states and actions");
  if (horizon_ == 0) throw InvalidArgument("MDP horizon must be at least 1");
  if (start_.size() != num_states_) throw InvalidArgument("start distribution must cover N states");
  if (transitions_.size() != num_states_ * num_actions_)
    throw InvalidArgument("transition kernel must have N*K rows");
  for (const Policy& row : transitions_) {
    if (row.size() != num_states_) throw InvalidArgument("transition rows must cover N states");
  }
  if (rewards_.size() != num_states_ * num_actions_)
    throw InvalidArgument("MDP rewards must have N*K entries");
  RewardModel check(rewards_);
  check_rows(behavior_, num_states_, num_actions_, "behavior");
  check_rows(target_, num_states_, num_actions_, "target");
}

MdpInstance MdpInstance::with_horizon(std::size_t horizon) const {
  return MdpInstance(num_states_, num_actions_, horizon, start_, transitions_, rewards_, behavior_,
                     target_);
}

double trajectory_probability(const MdpInstance& mdp, const ConditionalPolicy& policy,
                              const TrajectoryPath& path) {
  const std::size_t h_max = mdp.horizon();
  if (path.states.size() != h_max + 1 || path.actions.size() != h_max)
    throw InvalidArgument("trajectory length does not match the horizon");
  double p = mdp.start()[path.states[0]];
  for (std::size_t h = 0; h < h_max; ++h) {
    const std::size_t x = path.states[h];
    const std::size_t a = path.actions[h];
    p *= policy[x][a] * mdp.transition(x, a)[path.states[h + 1]];
  }
  return p;
}

double mdp_policy_value(const MdpInstance& mdp, const ConditionalPolicy& policy) {
  const std::size_t n = mdp.num_states();
  std::vector<double> next(n, 0.0);
  std::vector<double> current(n, 0.0);
  for (std::size_t step = 0; step < mdp.horizon(); ++step) {
    for (std::size_t x = 0; x < n; ++x) {
      double v = 0.0;
      for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
        const double pa = policy[x][a];
        if (pa == 0.0) continue;
        double cont = 0.0;
        const Policy& row = mdp.transition(x, a);
        for (std::size_t y = 0; y < n; ++y) cont += row[y] * next[y];
        v += pa * (mean(mdp.reward(x, a)) + cont);
      }
      current[x] = v;
    }
    std::swap(current, next);
  }
  double value = 0.0;
  for (std::size_t x = 0; x < n; ++x) value += mdp.start()[x] * next[x];
  return value;
}

std::vector<Trajectory> sample_trajectories(const MdpInstance& mdp,
                                            const ConditionalPolicy& policy, std::size_t n,
                                            std::uint64_t seed) {
  Engine rng = make_engine(seed);
  const detail::CategoricalSampler pick_start(mdp.start().probs());
  const auto pick_action = samplers(policy);
  std::vector<detail::CategoricalSampler> pick_next;
  pick_next.reserve(mdp.transitions().size());
  for (const Policy& row : mdp.transitions()) pick_next.emplace_back(row.probs());

  std::vector<Trajectory> out(n);
  for (Trajectory& t : out) {
    std::size_t x = pick_start(rng);
    t.path.states.push_back(x);
    for (std::size_t h = 0; h < mdp.horizon(); ++h) {
      const std::size_t a = pick_action[x](rng);
      t.path.actions.push_back(a);
      t.rewards.push_back(sample_reward(mdp.reward(x, a), rng));
      x = pick_next[x * mdp.num_actions() + a](rng);
      t.path.states.push_back(x);
    }
  }
  return out;
}

double trajectory_lr_estimate(const MdpInstance& mdp, std::span<const Trajectory> data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const Trajectory& t : data) {
    double weight = 1.0;
    double ret = 0.0;
    for (std::size_t h = 0; h < t.path.actions.size(); ++h) {
      const std::size_t x = t.path.states[h];
      const std::size_t a = t.path.actions[h];
      const double pd = mdp.behavior()[x][a];
      if (pd == 0.0) throw ZeroPropensitySample("trajectory uses an action the behavior never takes");
      weight *= mdp.target()[x][a] / pd;
      ret += t.rewards[h];
    }
    total += weight * ret;
  }
  return total / static_cast<double>(data.size());
}

std::optional<std::size_t> MdpReduction::find(const TrajectoryPath& path) const {
  const auto it = std::lower_bound(paths.begin(), paths.end(), path);
  if (it == paths.end() || *it != path) return std::nullopt;
  return static_cast<std::size_t>(it - paths.begin());
}

Dataset MdpReduction::to_dataset(std::span<const Trajectory> data) const {
  std::vector<Sample> samples;
  samples.reserve(data.size());
  for (const Trajectory& t : data) {
    const auto idx = find(t.path);
    if (!idx) throw InvalidArgument("trajectory is not part of the reduction");
    double ret = 0.0;
    for (double r : t.rewards) ret += r;
    samples.push_back({*idx, ret});
  }
  return Dataset(paths.size(), std::move(samples));
}

namespace {

struct Leaf {
  TrajectoryPath path;
  double behavior_mass;
  double target_mass;
  RewardDist reward;
};

class TrajectoryEnumerator {
 public:
  TrajectoryEnumerator(const MdpInstance& mdp, std::uint64_t budget) : mdp_(mdp), budget_(budget) {}

  std::vector<Leaf> run() {
    for (std::size_t x = 0; x < mdp_.num_states(); ++x) {
      const double p = mdp_.start()[x];
      if (p == 0.0) continue;
      path_.states.assign(1, x);
      path_.actions.clear();
      expand(0, p, p, PointMass{0.0});
    }
    return std::move(leaves_);
  }

 private:
  void expand(std::size_t h, double behavior_mass, double target_mass, const RewardDist& reward) {
    if (++expanded_ > budget_) {
      throw BudgetExceeded("trajectory enumeration exceeded budget of " + std::to_string(budget_));
    }
    if (h == mdp_.horizon()) {
      leaves_.push_back({path_, behavior_mass, target_mass, reward});
      return;
    }
    const std::size_t x = path_.states.back();
    for (std::size_t a = 0; a < mdp_.num_actions(); ++a) {
      const double bd = behavior_mass * mdp_.behavior()[x][a];
      const double tg = target_mass * mdp_.target()[x][a];
      if (bd == 0.0 && tg == 0.0) continue;
      const RewardDist step_reward = convolve(reward, mdp_.reward(x, a));
      const Policy& row = mdp_.transition(x, a);
      for (std::size_t y = 0; y < mdp_.num_states(); ++y) {
        if (row[y] == 0.0) continue;
        path_.actions.push_back(a);
        path_.states.push_back(y);
        expand(h + 1, bd * row[y], tg * row[y], step_reward);
        path_.actions.pop_back();
        path_.states.pop_back();
      }
    }
  }

  const MdpInstance& mdp_;
  std::uint64_t budget_;
  std::uint64_t expanded_ = 0;
  TrajectoryPath path_;
  std::vector<Leaf> leaves_;
};

}  // namespace

MdpReduction mdp_to_bandit(const MdpInstance& mdp, std::uint64_t budget) {
  std::vector<Leaf> leaves = TrajectoryEnumerator(mdp, budget).run();
  std::sort(leaves.begin(), leaves.end(),
            [](const Leaf& a, const Leaf& b) { return a.path < b.path; });
  std::vector<double> behavior;
  std::vector<double> target;
  std::vector<RewardDist> rewards;
  std::vector<TrajectoryPath> paths;
  for (Leaf& leaf : leaves) {
    behavior.push_back(leaf.behavior_mass);
    target.push_back(leaf.target_mass);
    rewards.push_back(std::move(leaf.reward));
    paths.push_back(std::move(leaf.path));
  }
  return MdpReduction{BanditInstance(Policy(std::move(behavior)), Policy(std::move(target)),
                                     RewardModel(std::move(rewards))),
                      std::move(paths)};
}

double terminal_state_probability(const MdpInstance& mdp, const ConditionalPolicy& policy,
                                  std::size_t state) {
  if (state >= mdp.num_states()) throw InvalidArgument("state out of range");
  std::vector<double> dist(mdp.start().probs().begin(), mdp.start().probs().end());
  std::vector<double> next(mdp.num_states());
  for (std::size_t h = 0; h < mdp.horizon(); ++h) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
      if (dist[x] == 0.0) continue;
      for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
        const double pa = dist[x] * policy[x][a];
        if (pa == 0.0) continue;
        const Policy& row = mdp.transition(x, a);
        for (std::size_t y = 0; y < mdp.num_states(); ++y) next[y] += pa * row[y];
      }
    }
    std::swap(dist, next);
  }
  return dist[state];
}

MdpInstance combination_lock(std::size_t num_states, double p_star, double rmax,
                             std::optional<std::size_t> horizon) {
  if (num_states < 2) throw InvalidArgument("combination lock needs at least 2 states");
  if (!(p_star > 0.0 && p_star < 1.0)) throw InvalidArgument("p_star must be in (0,1)");
  if (!(rmax >= 0.0)) throw InvalidArgument("R_max must be nonnegative");
  const std::size_t n = num_states;
  std::vector<Policy> transitions;
  std::vector<RewardDist> rewards;
  ConditionalPolicy behavior;
  ConditionalPolicy target;
  for (std::size_t x = 0; x < n; ++x) {
    transitions.push_back(Policy::deterministic(n, 0));
    transitions.push_back(Policy::deterministic(n, std::min(x + 1, n - 1)));
    rewards.push_back(PointMass{0.0});
    rewards.push_back(PointMass{x + 2 == n ? rmax : 0.0});
    behavior.push_back(Policy({p_star, 1.0 - p_star}));
    target.push_back(Policy::deterministic(2, kLockRight));
  }
  return MdpInstance(n, 2, horizon.value_or(n - 1), Policy::deterministic(n, 0),
                     std::move(transitions), std::move(rewards), std::move(behavior),
                     std::move(target));
}

}  // namespace opeval

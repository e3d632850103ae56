#include "opeval/reward_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "opeval/errors.hpp"

namespace opeval {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void validate(const RewardDist& d, std::size_t a) {
  const auto where = " (action " + std::to_string(a) + ")";
  std::visit(Overloaded{
                 [&](const PointMass& pm) {
                   if (!std::isfinite(pm.value)) throw InvalidArgument("non-finite reward" + where);
                 },
                 [&](const Bernoulli& b) {
                   if (!(b.p >= 0.0 && b.p <= 1.0))
                     throw InvalidArgument("Bernoulli p outside [0,1]" + where);
                 },
                 [&](const Normal& n) {
                   if (!std::isfinite(n.mean)) throw InvalidArgument("non-finite mean" + where);
                   if (!(n.variance >= 0.0) || !std::isfinite(n.variance))
                     throw InvalidArgument("negative reward variance" + where);
                 },
                 [&](const Discrete& dd) {
                   if (dd.values.empty() || dd.values.size() != dd.probs.size())
                     throw InvalidArgument("discrete reward needs matching values/probs" + where);
                   double total = 0.0;
                   for (double p : dd.probs) {
                     if (!(p >= 0.0 && p <= 1.0))
                       throw InvalidArgument("discrete reward probability outside [0,1]" + where);
                     total += p;
                   }
                   if (std::abs(total - 1.0) > 1e-9)
                     throw InvalidArgument("discrete reward probabilities must sum to 1" + where);
                 },
             },
             d);
}

}  // namespace

double mean(const RewardDist& d) {
  return std::visit(Overloaded{
                        [](const PointMass& pm) { return pm.value; },
                        [](const Bernoulli& b) { return b.p; },
                        [](const Normal& n) { return n.mean; },
                        [](const Discrete& dd) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < dd.values.size(); ++i)
                            m += dd.values[i] * dd.probs[i];
                          return m;
                        },
                    },
                    d);
}

double variance(const RewardDist& d) {
  return std::visit(Overloaded{
                        [](const PointMass&) { return 0.0; },
                        [](const Bernoulli& b) { return b.p * (1.0 - b.p); },
                        [](const Normal& n) { return n.variance; },
                        [](const Discrete& dd) {
                          const double m = mean(RewardDist{dd});
                          double v = 0.0;
                          for (std::size_t i = 0; i < dd.values.size(); ++i)
                            v += dd.probs[i] * (dd.values[i] - m) * (dd.values[i] - m);
                          return v;
                        },
                    },
                    d);
}

bool is_discrete(const RewardDist& d) {
  if (const auto* n = std::get_if<Normal>(&d)) return n->variance == 0.0;
  return true;
}

std::vector<RewardAtom> atoms(const RewardDist& d) {
  return std::visit(
      Overloaded{
          [](const PointMass& pm) { return std::vector<RewardAtom>{{pm.value, 1.0}}; },
          [](const Bernoulli& b) {
            std::vector<RewardAtom> out;
            if (b.p < 1.0) out.push_back({0.0, 1.0 - b.p});
            if (b.p > 0.0) out.push_back({1.0, b.p});
            return out;
          },
          [](const Normal& n) {
            if (n.variance != 0.0)
              throw InvalidArgument("continuous rewards have no finite support");
            return std::vector<RewardAtom>{{n.mean, 1.0}};
          },
          [](const Discrete& dd) {
            std::vector<RewardAtom> out;
            for (std::size_t i = 0; i < dd.values.size(); ++i)
              if (dd.probs[i] > 0.0) out.push_back({dd.values[i], dd.probs[i]});
            return out;
          },
      },
      d);
}

RewardDist convolve(const RewardDist& a, const RewardDist& b) {
  if (const auto* pa = std::get_if<PointMass>(&a)) {
    if (const auto* pb = std::get_if<PointMass>(&b)) return PointMass{pa->value + pb->value};
  }
  const bool a_normal = std::holds_alternative<Normal>(a) && !is_discrete(a);
  const bool b_normal = std::holds_alternative<Normal>(b) && !is_discrete(b);
  if (a_normal || b_normal) {
    const bool a_gaussian = std::holds_alternative<Normal>(a) || std::holds_alternative<PointMass>(a);
    const bool b_gaussian = std::holds_alternative<Normal>(b) || std::holds_alternative<PointMass>(b);
    if (!a_gaussian || !b_gaussian)
      throw InvalidArgument("cannot sum a normal reward with a discrete non-degenerate reward");
    return Normal{mean(a) + mean(b), variance(a) + variance(b)};
  }
  std::map<double, double> mass;
  for (const auto& x : atoms(a))
    for (const auto& y : atoms(b)) mass[x.value + y.value] += x.prob * y.prob;
  if (mass.size() == 1) return PointMass{mass.begin()->first};
  Discrete out;
  for (const auto& [v, p] : mass) {
    out.values.push_back(v);
    out.probs.push_back(p);
  }
  return out;
}

RewardModel::RewardModel(std::vector<RewardDist> dists, std::optional<double> rmax)
    : dists_(std::move(dists)), rmax_(rmax) {
  if (dists_.empty()) throw InvalidArgument("reward model must cover at least one action");
  if (rmax_ && !(*rmax_ >= 0.0)) throw InvalidArgument("R_max must be nonnegative");
  means_.reserve(dists_.size());
  variances_.reserve(dists_.size());
  for (std::size_t a = 0; a < dists_.size(); ++a) {
    validate(dists_[a], a);
    means_.push_back(opeval::mean(dists_[a]));
    variances_.push_back(opeval::variance(dists_[a]));
  }
}

bool RewardModel::all_discrete() const noexcept {
  return std::all_of(dists_.begin(), dists_.end(), [](const RewardDist& d) { return is_discrete(d); });
}

void RewardModel::require_bounded_means(double cap) const {
  for (std::size_t a = 0; a < means_.size(); ++a) {
    if (means_[a] < 0.0 || means_[a] > cap) {
      throw InvalidArgument("mean reward of action " + std::to_string(a) + " is outside [0, " +
                            std::to_string(cap) + "]");
    }
  }
}

}  // namespace opeval

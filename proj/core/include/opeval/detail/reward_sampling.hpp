#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

namespace opeval {

template <class Engine>
double sample_reward(const RewardDist& d, Engine& rng) {
  struct Visitor {
    Engine& rng;
    double operator()(const PointMass& pm) const { return pm.value; }
    double operator()(const Bernoulli& b) const {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      return u(rng) < b.p ? 1.0 : 0.0;
    }
    double operator()(const Normal& n) const {
      if (n.variance == 0.0) return n.mean;
      std::normal_distribution<double> g(n.mean, std::sqrt(n.variance));
      return g(rng);
    }
    double operator()(const Discrete& dd) const {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double x = u(rng);
      for (std::size_t i = 0; i + 1 < dd.values.size(); ++i) {
        if (x < dd.probs[i]) return dd.values[i];
        x -= dd.probs[i];
      }
      return dd.values.back();
    }
  };
  return std::visit(Visitor{rng}, d);
}

}  // namespace opeval

#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace opeval::detail {

/// Inverse-CDF sampler over a probability vector. Zero-probability entries
/// are never returned.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> probs) : cdf_(probs.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cdf_[i] = acc;
      if (probs[i] > 0.0) last_positive_ = i;
    }
  }

  template <class Engine>
  std::size_t operator()(Engine& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
    if (it == cdf_.end()) return last_positive_;
    return static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

}  // namespace opeval::detail

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace opeval {

struct Sample {
  std::size_t action;
  double reward;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ordered log of (action, reward) draws with per-action counts n(a) and
/// reward totals R(a).
class Dataset {
 public:
  Dataset(std::size_t num_actions, std::vector<Sample> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t num_actions() const noexcept { return counts_.size(); }
  std::span<const Sample> samples() const noexcept { return samples_; }
  std::span<const std::size_t> counts() const noexcept { return counts_; }
  std::span<const double> sums() const noexcept { return sums_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Sample> samples_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
};

}  // namespace opeval

#include "opeval/dataset.hpp"

#include "opeval/errors.hpp"

namespace opeval {

Dataset::Dataset(std::size_t num_actions, std::vector<Sample> samples)
    : samples_(std::move(samples)), counts_(num_actions, 0), sums_(num_actions, 0.0) {
  for (const Sample& s : samples_) {
    if (s.action >= num_actions) throw InvalidArgument("sample action index out of range");
    ++counts_[s.action];
    sums_[s.action] += s.reward;
  }
}

}  // namespace opeval

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace opeval {

/// Malformed input: bad probabilities, mismatched dimensions, unparseable files.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The target policy puts mass on actions the behavior policy never takes.
class UnidentifiableError : public std::domain_error {
 public:
  UnidentifiableError(const std::string& what, std::vector<std::size_t> actions)
      : std::domain_error(what), actions_(std::move(actions)) {}

  const std::vector<std::size_t>& actions() const noexcept { return actions_; }

 private:
  std::vector<std::size_t> actions_;
};

/// An exhaustive enumeration would exceed its configured outcome budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LR was asked to reweight a logged sample whose logging probability is zero.
class ZeroPropensitySample : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace opeval

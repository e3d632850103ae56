#include "opeval/binomial.hpp"

#include <algorithm>
#include <cmath>

#include "opeval/errors.hpp"

namespace opeval {
namespace {

constexpr std::size_t kDirectLimit = 60;

double direct_coefficient(std::size_t n, std::size_t k) {
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

}  // namespace

double log_binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) throw InvalidArgument("binomial coefficient with k > n");
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double binomial_pmf(std::size_t n, std::size_t k, double p) {
  if (k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  const double rest = static_cast<double>(n - k);
  if (n <= kDirectLimit) {
    return direct_coefficient(n, k) * std::pow(p, kd) * std::pow(1.0 - p, rest);
  }
  return std::exp(log_binomial_coefficient(n, k) + kd * std::log(p) + rest * std::log1p(-p));
}

double binomial_cdf(std::size_t n, std::size_t k, double p) {
  if (k >= n) return 1.0;
  double total = 0.0;
  for (std::size_t j = 0; j <= k; ++j) total += binomial_pmf(n, j, p);
  return std::min(total, 1.0);
}

}  // namespace opeval

#pragma once

#include <cstddef>

namespace opeval {

/// log C(n, k) via lgamma.
double log_binomial_coefficient(std::size_t n, std::size_t k);

/// C(n,k) p^k (1-p)^(n-k). Exact products for n <= 60, log space above.
double binomial_pmf(std::size_t n, std::size_t k, double p);

/// P(S_n <= k) for S_n ~ Bin(n, p).
double binomial_cdf(std::size_t n, std::size_t k, double p);

}  // namespace opeval

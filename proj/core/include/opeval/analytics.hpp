#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "opeval/bandit.hpp"

namespace opeval {

struct VarianceTerms {
  double v1 = 0.0;
  double v2 = 0.0;
  /// False when pi(a) > 0 = pi_D(a) for some a; v1 and v2 are then +inf.
  bool finite = true;
};

/// V1 = sum pi^2 sigma^2 / pi_D, V2 = sum pi^2 r^2 / pi_D - (v^pi)^2.
VarianceTerms compute_v1_v2(const BanditInstance& instance);

/// p_{a,n} = (1 - pi_D(a))^n for each action.
std::vector<double> p_missing(const Policy& behavior, std::size_t n);
/// p_{B,n} = (1 - pi_D(B))^n.
double p_missing_set(const Policy& behavior, std::span<const std::size_t> subset, std::size_t n);

struct BiasVarianceTerms {
  double v0n = 0.0;
  /// Signed; the expectation inside can be negative for small n.
  double v3n = 0.0;
};

/// V0n and V3n, the latter through the exact binomial inverse moment.
BiasVarianceTerms compute_v0n_v3n(const BanditInstance& instance, std::size_t n);

/// (V1 + V2)/n.
double lr_mse(const BanditInstance& instance, std::size_t n);
/// b_n = sum pi(a) r(a) p_{a,n}, so that E[v_reg] = v^pi - b_n.
double reg_bias(const BanditInstance& instance, std::size_t n);
/// V0n + (V1 + V3n)/n. Valid when every r(a) >= 0.
double reg_mse_upper(const BanditInstance& instance, std::size_t n);
/// V1/n + 4 b_n^2 (1 + V1/n) + (2/n) sum pi^2 sigma^2 p_{a,n} / pi_D.
/// Throws InvalidArgument unless every reward is Normal (point masses count
/// as zero-variance normals).
double reg_mse_lower_normal(const BanditInstance& instance, std::size_t n);

/// Environment class of the minimax problem: mean rewards in [0, R_max] and
/// reward variances capped per action.
struct MinimaxClass {
  Policy target;
  Policy behavior;
  double rmax = 1.0;
  std::vector<double> sigma2;

  /// Caps at the instance's own variances; R_max from the argument, else the
  /// reward model, else 1.
  static MinimaxClass from_instance(const BanditInstance& instance,
                                    std::optional<double> rmax = std::nullopt);
};

inline constexpr std::size_t kExhaustiveSubsetLimit = 20;

struct MinimaxBound {
  double value = 0.0;
  /// R_max^2 max_B pi(B)^2 p_{B,n}.
  double coverage_term = 0.0;
  /// V1/n evaluated at the variance caps.
  double variance_term = 0.0;
  std::vector<std::size_t> best_subset;
  /// True when the subset came from the sorted-prefix search (K > 20).
  bool heuristic = false;
};

/// 1/4 max(R_max^2 max_B pi(B)^2 p_{B,n}, V1/n). Exhaustive over subsets
/// for K <= kExhaustiveSubsetLimit, otherwise over prefixes of actions sorted
/// by decreasing pi/pi_D. Any subset yields a valid bound.
MinimaxBound minimax_lower_bound(const MinimaxClass& cls, std::size_t n);
/// Same with an explicit choice of search.
MinimaxBound minimax_lower_bound(const MinimaxClass& cls, std::size_t n, bool force_heuristic);

/// E[1{S>0}/(S/n) - 1/p] for S ~ Bin(n, p), by binomial summation.
double inverse_moment_exact(std::size_t n, double p);

struct InverseMomentBounds {
  double basic = 0.0;                 ///< 4/p
  std::optional<double> refined;      ///< present iff n p >= 34
};

InverseMomentBounds inverse_moment_bounds(std::size_t n, double p);

struct IndicatorVariance {
  /// V(sum_a w_a 1{n(a)>0}) with w_a = pi(a) r(a).
  double variance = 0.0;
  /// sum_a w_a^2 p_{a,n}(1 - p_{a,n}).
  double bound = 0.0;
  /// False when the count enumeration exceeded budget and the variance is a
  /// Monte Carlo estimate.
  bool exact = true;
};

IndicatorVariance indicator_variance_bound(const BanditInstance& instance, std::size_t n,
                                           std::uint64_t budget = kDefaultOracleBudget,
                                           std::uint64_t seed = 0);

/// exp(-beta^2 n p / 2), bounding P(S_n/n <= (1-beta) p).
double chernoff_lower_tail(std::size_t n, double p, double beta);
/// Exact P(S_n/n <= (1-beta) p).
double binomial_lower_tail(std::size_t n, double p, double beta);

/// Fisher information of the Gaussian reward-mean family at the instance.
struct FisherInfo {
  std::vector<double> diagonal;  ///< pi_D(a)/sigma^2(a)
  std::vector<double> gradient;  ///< pi
  /// gradient^T F^{-1} gradient.
  double quadratic_form() const;
};

/// Requires sigma^2(a) > 0 for every action.
FisherInfo fisher_information(const BanditInstance& instance);

/// K { min(4K, max_a r^2/sigma^2) + 5 }, the REG-to-minimax constant.
double reg_minimax_constant(const BanditInstance& instance);

/// n exp(-2n/(K-1)): lower bound on MSE_reg / R*_n for pi = pi_D uniform,
/// r = 1, sigma^2 = 0.
double reg_ratio_lower_bound(std::size_t num_actions, double n);

struct AnalyticReport {
  std::size_t n = 0;
  double v1 = 0.0;
  double v2 = 0.0;
  std::vector<double> p_missing;
  double v0n = 0.0;
  double v3n = 0.0;
  double bias_bn = 0.0;
  double lr_mse = 0.0;
  double reg_mse_upper = 0.0;
  /// Empty unless every reward is Normal or a point mass.
  std::optional<double> reg_mse_lower_normal;
  double minimax_lower = 0.0;
  std::vector<std::size_t> best_subset;
  bool heuristic = false;
};

/// Throws UnidentifiableError for unidentifiable instances.
AnalyticReport analytic_report(const BanditInstance& instance, std::size_t n,
                               std::optional<double> rmax = std::nullopt);

}  // namespace opeval

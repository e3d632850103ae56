#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opeval/analytics.hpp"
#include "opeval/binomial.hpp"
#include "opeval/errors.hpp"
#include "opeval/random_instances.hpp"
#include "oracles.hpp"

using namespace opeval;

namespace {

BanditInstance points(std::vector<double> pi_d, std::vector<double> pi, std::vector<double> r) {
  std::vector<RewardDist> d;
  for (double x : r) d.push_back(PointMass{x});
  return BanditInstance(Policy(std::move(pi_d)), Policy(std::move(pi)), RewardModel(std::move(d)));
}

double direct_v1(const BanditInstance& inst) {
  double v = 0.0;
  for (std::size_t a = 0; a < inst.num_actions(); ++a) {
    const double pi = inst.target()[a];
    if (pi > 0.0) v += pi * pi * inst.rewards().variance(a) / inst.behavior()[a];
  }
  return v;
}

}  // namespace

TEST(VarianceTerms, Examples) {
  EXPECT_EQ(compute_v1_v2(points({0.3, 0.7}, {0.6, 0.4}, {0.2, 0.9})).v1, 0.0);
  for (std::size_t k : {1u, 2u, 5u, 17u}) {
    const std::vector<double> u(k, 1.0 / static_cast<double>(k));
    EXPECT_NEAR(compute_v1_v2(points(u, u, std::vector<double>(k, 1.0))).v2, 0.0, 1e-14);
  }
  EXPECT_DOUBLE_EQ(compute_v1_v2(points({0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0})).v2, 0.25);
}

TEST(VarianceTerms, InfiniteWhenUnsupported) {
  const VarianceTerms t = compute_v1_v2(points({1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}));
  EXPECT_FALSE(t.finite);
}

TEST(PMissing, Examples) {
  EXPECT_EQ(p_missing(Policy({1.0, 0.0}), 5)[0], 0.0);
  EXPECT_EQ(p_missing(Policy({1.0, 0.0}), 5)[1], 1.0);
  EXPECT_DOUBLE_EQ(p_missing(Policy({0.5, 0.5}), 2)[0], 0.25);
  for (std::size_t k : {4u, 9u, 16u, 50u, 100u, 1000u}) {
    const auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(k))));
    std::vector<std::size_t> b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = i;
    const double target = 0.176;  // (1 - 1/sqrt 2)^{sqrt 2}
    EXPECT_GE(p_missing_set(Policy::uniform(k), b, m), target) << k;
  }
}

TEST(PMissing, StrictlyDecreasingInN) {
  const Policy p({0.1, 0.3, 0.6});
  for (std::size_t n = 1; n < 200; ++n) {
    const auto a = p_missing(p, n);
    const auto b = p_missing(p, n + 1);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(b[i], a[i]);
  }
}

TEST(V0nV3n, Examples) {
  EXPECT_EQ(compute_v0n_v3n(points({0.2, 0.8}, {0.5, 0.5}, {0.0, 0.0}), 7).v0n, 0.0);
  EXPECT_EQ(compute_v0n_v3n(points({0.2, 0.8}, {0.5, 0.5}, {0.3, 0.9}), 7).v3n, 0.0);
  EXPECT_NEAR(inverse_moment_exact(3, 0.5), -0.1875, 1e-15);
  // Single arm with unit variance: V3n is exactly the inner expectation.
  const BanditInstance one(Policy({0.5, 0.5}), Policy({1.0, 0.0}),
                           RewardModel({Normal{0.0, 1.0}, PointMass{0.0}}));
  EXPECT_NEAR(compute_v0n_v3n(one, 3).v3n, -0.1875, 1e-15);
}

TEST(InverseMoment, MatchesNaiveSum) {
  EXPECT_EQ(inverse_moment_exact(5, 1.0), 0.0);
  for (std::size_t n = 1; n <= 60; ++n)
    for (double p : {0.05, 0.2, 0.5, 0.85})
      EXPECT_NEAR(inverse_moment_exact(n, p), oracle::inverse_moment(n, p), 1e-11) << n << " " << p;
}

TEST(InverseMoment, BoundsOnGrid) {
  for (std::size_t n = 1; n <= 200; ++n) {
    for (int j = 1; j <= 20; ++j) {
      const double p = 0.05 * j;
      const auto b = inverse_moment_bounds(n, p);
      EXPECT_DOUBLE_EQ(b.basic, 4.0 / p);
      EXPECT_EQ(b.refined.has_value(), static_cast<double>(n) * p >= 34.0);
      const double exact = inverse_moment_exact(n, p);
      EXPECT_LE(exact, b.basic);
      if (b.refined) EXPECT_LE(exact, *b.refined);
    }
  }
  EXPECT_LE(inverse_moment_exact(3, 0.5), 8.0);
}

TEST(Binomial, PmfSumsToOneAcrossLogSpaceSwitch) {
  for (std::size_t n : {10u, 60u, 61u, 500u}) {
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) s += binomial_pmf(n, k, 0.3);
    EXPECT_NEAR(s, 1.0, 1e-12) << n;
  }
  EXPECT_NEAR(binomial_pmf(61, 30, 0.5), binomial_pmf(60, 30, 0.5) * 61.0 / 31.0 * 0.5, 1e-14);
}

TEST(RegBias, Examples) {
  EXPECT_DOUBLE_EQ(reg_bias(points({0.5, 0.5}, {0.5, 0.5}, {1.0, 1.0}), 1), 0.5);
}

TEST(Mse, ClosedFormsAgreeWithNaiveOracle) {
  Engine rng = make_engine(17);
  for (int i = 0; i < 60; ++i) {
    const BanditInstance inst = random_discrete_instance(rng, 3);
    const std::size_t n = 1 + static_cast<std::size_t>(i % 5);
    const auto lr = oracle::lr_moments(inst, n);
    const auto reg = oracle::reg_moments(inst, n);
    EXPECT_NEAR(lr_mse(inst, n), lr.mse, 1e-10);
    EXPECT_NEAR(oracle::truth(inst) - reg.mean, reg_bias(inst, n), 1e-10);
    EXPECT_LE(reg.mse, reg_mse_upper(inst, n) + 1e-10);
  }
}

TEST(Mse, LrNmseConstantInN) {
  const BanditInstance inst(Policy({0.2, 0.8}), Policy({0.6, 0.4}),
                            RewardModel({Normal{0.5, 0.1}, Bernoulli{0.3}}));
  const VarianceTerms t = compute_v1_v2(inst);
  for (std::size_t n : {1u, 10u, 1000u, 1000000u})
    EXPECT_NEAR(lr_mse(inst, n) * static_cast<double>(n), t.v1 + t.v2, 1e-12);
}

TEST(Mse, LowerBoundNeedsNormal) {
  const BanditInstance bern(Policy({0.5, 0.5}), Policy({0.5, 0.5}),
                            RewardModel({Bernoulli{0.5}, PointMass{1}}));
  EXPECT_THROW(reg_mse_lower_normal(bern, 3), InvalidArgument);
  EXPECT_NO_THROW(reg_mse_lower_normal(points({0.5, 0.5}, {0.5, 0.5}, {1.0, 1.0}), 3));
}

TEST(Minimax, ZeroClass) {
  MinimaxClass cls{Policy({0.5, 0.5}), Policy({0.5, 0.5}), 0.0, {0.0, 0.0}};
  EXPECT_EQ(minimax_lower_bound(cls, 5).value, 0.0);
}

TEST(Minimax, TwoArmExample) {
  MinimaxClass cls{Policy({1.0, 0.0}), Policy({0.5, 0.5}), 1.0, {0.0, 0.0}};
  const MinimaxBound b = minimax_lower_bound(cls, 1);
  EXPECT_DOUBLE_EQ(b.coverage_term, 0.5);
  EXPECT_DOUBLE_EQ(b.value, 0.125);
  EXPECT_EQ(b.best_subset, (std::vector<std::size_t>{0}));
  EXPECT_FALSE(b.heuristic);
}

TEST(Minimax, HeuristicAboveLimit) {
  const std::size_t k = kExhaustiveSubsetLimit + 5;
  MinimaxClass cls{Policy::uniform(k), Policy::uniform(k), 1.0, std::vector<double>(k, 0.01)};
  const MinimaxBound b = minimax_lower_bound(cls, 10);
  EXPECT_TRUE(b.heuristic);
  EXPECT_GT(b.value, 0.0);
}

TEST(Minimax, ExhaustiveMatchesBruteForce) {
  Engine rng = make_engine(31);
  for (int i = 0; i < 40; ++i) {
    const std::size_t k = 1 + i % 10;
    MinimaxClass cls{random_policy(rng, k, 0.3), random_policy(rng, k), 1.0,
                     std::vector<double>(k, 0.0)};
    for (double& s : cls.sigma2) s = std::uniform_real_distribution<double>(0, 0.25)(rng);
    const std::size_t n = 1 + rng() % 30;
    double best = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      double t = 0.0, d = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        if (!(mask >> a & 1)) continue;
        t += cls.target[a];
        d += cls.behavior[a];
      }
      best = std::max(best, t * t * std::pow(std::max(0.0, 1.0 - d), static_cast<double>(n)));
    }
    double v1 = 0.0;
    for (std::size_t a = 0; a < k; ++a) v1 += cls.target[a] * cls.target[a] * cls.sigma2[a] / cls.behavior[a];
    const MinimaxBound b = minimax_lower_bound(cls, n);
    EXPECT_NEAR(b.value, 0.25 * std::max(best, v1 / static_cast<double>(n)), 1e-12);
    EXPECT_LE(minimax_lower_bound(cls, n, true).value, b.value + 1e-15);
  }
}

TEST(IndicatorVariance, SingleArm) {
  const BanditInstance inst = points({1.0}, {1.0}, {0.7});
  const IndicatorVariance v = indicator_variance_bound(inst, 4);
  EXPECT_NEAR(v.variance, v.bound, 1e-15);
  const BanditInstance half = points({0.5, 0.5}, {1.0, 0.0}, {1.0, 0.0});
  const IndicatorVariance h = indicator_variance_bound(half, 2);
  EXPECT_NEAR(h.variance, 0.25 * 0.75, 1e-15);
  EXPECT_NEAR(h.bound, 0.25 * 0.75, 1e-15);
}

TEST(IndicatorVariance, TwoArmUniform) {
  // Sequences 00, 01, 10, 11: the sum is 1, 2, 2, 1 so the variance is 1/4.
  const BanditInstance inst = points({0.5, 0.5}, {0.5, 0.5}, {2.0, 2.0});
  const IndicatorVariance v = indicator_variance_bound(inst, 2);
  EXPECT_TRUE(v.exact);
  EXPECT_NEAR(v.variance, 0.25, 1e-15);
  EXPECT_LE(v.variance, 2 * 0.25 * 0.75);
}

TEST(IndicatorVariance, MatchesPairwiseCovarianceOracle) {
  Engine rng = make_engine(8);
  for (int i = 0; i < 100; ++i) {
    const BanditInstance inst = random_discrete_instance(rng, 5);
    const std::size_t n = 1 + rng() % 10;
    std::vector<double> w, pd;
    for (std::size_t a = 0; a < inst.num_actions(); ++a) {
      w.push_back(inst.target()[a] * inst.rewards().mean(a));
      pd.push_back(inst.behavior()[a]);
    }
    const IndicatorVariance v = indicator_variance_bound(inst, n);
    EXPECT_NEAR(v.variance, oracle::indicator_variance(pd, w, n), 1e-12);
    EXPECT_LE(v.variance, v.bound + 1e-12);
  }
}

TEST(IndicatorVariance, MonteCarloFallbackFlagged) {
  const std::size_t k = 30;
  std::vector<double> u(k, 1.0 / k), r(k, 0.5);
  const IndicatorVariance v = indicator_variance_bound(points(u, u, r), 40, 1000);
  EXPECT_FALSE(v.exact);
  EXPECT_NEAR(v.variance, oracle::indicator_variance(u, std::vector<double>(k, 0.5 / k), 40), 2e-5);
}

TEST(Chernoff, Examples) {
  EXPECT_EQ(chernoff_lower_tail(50, 0.3, 0.0), 1.0);
  EXPECT_NEAR(chernoff_lower_tail(100, 0.5, 0.2), std::exp(-1.0), 1e-15);
  double tail = 0.0;
  for (int k = 0; k <= 40; ++k)
    tail += std::exp(std::lgamma(101.0) - std::lgamma(k + 1.0) - std::lgamma(101.0 - k) - 100 * std::log(2.0));
  EXPECT_NEAR(binomial_lower_tail(100, 0.5, 0.2), tail, 1e-13);
  EXPECT_LE(binomial_lower_tail(100, 0.5, 0.2), std::exp(-1.0));
}

TEST(Chernoff, GridSweep) {
  for (std::size_t n = 1; n <= 200; ++n)
    for (int j = 1; j <= 20; ++j)
      for (int b = 0; b < 10; ++b)
        EXPECT_LE(binomial_lower_tail(n, 0.05 * j, 0.1 * b), chernoff_lower_tail(n, 0.05 * j, 0.1 * b) + 1e-12);
}

TEST(Fisher, QuadraticFormIsV1) {
  Engine rng = make_engine(3);
  for (int i = 0; i < 100; ++i) {
    const BanditInstance inst = random_normal_instance(rng, 8);
    const FisherInfo f = fisher_information(inst);
    for (std::size_t a = 0; a < inst.num_actions(); ++a) {
      EXPECT_DOUBLE_EQ(f.diagonal[a], inst.behavior()[a] / inst.rewards().variance(a));
      EXPECT_EQ(f.gradient[a], inst.target()[a]);
    }
    EXPECT_NEAR(f.quadratic_form(), direct_v1(inst), 1e-12);
  }
}

TEST(RegMinimaxConstant, ConstantAndRatio) {
  const BanditInstance inst(Policy::uniform(2), Policy::uniform(2),
                            RewardModel({Normal{1.0, 0.5}, Normal{0.5, 1.0}}));
  // max r^2 / sigma^2 = 2 < 4K = 8.
  EXPECT_DOUBLE_EQ(reg_minimax_constant(inst), 2.0 * (2.0 + 5.0));
  const BanditInstance flat = points({0.5, 0.5}, {0.5, 0.5}, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(reg_minimax_constant(flat), 2.0 * (8.0 + 5.0));
  for (std::size_t k = 3; k <= 200; ++k) {
    const double n = (static_cast<double>(k) - 1.0) / 2.0;
    EXPECT_GE(reg_ratio_lower_bound(k, n), (k - 1.0) / (2.0 * std::exp(1.0)) * (1.0 - 1e-9));
  }
}

TEST(AnalyticReport, Fields) {
  const BanditInstance inst(Policy({0.25, 0.75}), Policy({0.5, 0.5}),
                            RewardModel({Normal{0.2, 0.01}, Normal{0.6, 0.02}}, 1.0));
  const AnalyticReport r = analytic_report(inst, 10);
  EXPECT_EQ(r.n, 10u);
  EXPECT_DOUBLE_EQ(r.lr_mse, (r.v1 + r.v2) / 10.0);
  EXPECT_GE(r.v0n, 0.0);
  ASSERT_TRUE(r.reg_mse_lower_normal.has_value());
  for (double p : r.p_missing) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  EXPECT_THROW(analytic_report(points({1.0, 0.0}, {0.5, 0.5}, {1, 1}), 3), UnidentifiableError);
}

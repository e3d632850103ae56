#include <gtest/gtest.h>

#include <cmath>

#include "opeval/bandit.hpp"
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

}  // namespace

TEST(Policy, RejectsBadVectors) {
  EXPECT_THROW(Policy({0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(Policy({-0.1, 1.1}), InvalidArgument);
  EXPECT_THROW(Policy(std::vector<double>{}), InvalidArgument);
  EXPECT_NO_THROW(Policy({0.5, 0.5 + 5e-13}));
}

TEST(Policy, Accessors) {
  const Policy p({0.2, 0.3, 0.5});
  EXPECT_DOUBLE_EQ(p.min_prob(), 0.2);
  const std::vector<std::size_t> b{0, 2};
  EXPECT_DOUBLE_EQ(p.mass(b), 0.7);
  EXPECT_EQ(Policy::uniform(4)[3], 0.25);
  EXPECT_EQ(Policy::deterministic(3, 1)[1], 1.0);
}

TEST(RewardModel, MeansAndVariances) {
  const RewardModel m({PointMass{0.3}, Bernoulli{0.25}, Normal{0.5, 0.04}});
  EXPECT_DOUBLE_EQ(m.mean(0), 0.3);
  EXPECT_DOUBLE_EQ(m.variance(0), 0.0);
  EXPECT_DOUBLE_EQ(m.variance(1), 0.1875);
  EXPECT_DOUBLE_EQ(m.variance(2), 0.04);
  EXPECT_FALSE(m.all_discrete());
  EXPECT_THROW(RewardModel({Bernoulli{1.5}}), InvalidArgument);
  EXPECT_THROW(RewardModel({Normal{0.0, -1.0}}), InvalidArgument);
  // The cap is only enforced when a bound asks for it.
  const RewardModel capped({PointMass{2.0}}, 1.0);
  EXPECT_THROW(capped.require_bounded_means(1.0), InvalidArgument);
  EXPECT_NO_THROW(capped.require_bounded_means(2.0));
}

TEST(BanditInstance, FlagsUnidentifiable) {
  const BanditInstance inst = points({1.0, 0.0}, {0.5, 0.5}, {1.0, 0.0});
  EXPECT_FALSE(inst.identifiable());
  ASSERT_EQ(inst.unsupported_actions().size(), 1u);
  EXPECT_EQ(inst.unsupported_actions()[0], 1u);
  EXPECT_THROW(inst.require_identifiable(), UnidentifiableError);
  EXPECT_THROW(points({0.5, 0.5}, {1.0}, {1.0, 0.0}), InvalidArgument);
}

TEST(PolicyValue, Examples) {
  EXPECT_DOUBLE_EQ(policy_value(points({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25},
                                       {0.7, 0.7, 0.7, 0.7})),
                   0.7);
  EXPECT_DOUBLE_EQ(policy_value(points({0.5, 0.5}, {1.0, 0.0}, {0.3, 9.9})), 0.3);
  EXPECT_DOUBLE_EQ(policy_value(points({0.5, 0.5}, {0.25, 0.75}, {0.2, 0.6})), 0.5);
}

TEST(SampleDataset, DegenerateBehavior) {
  const Dataset d = sample_dataset(points({1.0, 0.0}, {1.0, 0.0}, {0.1, 0.2}), 50, 3);
  for (const Sample& s : d.samples()) EXPECT_EQ(s.action, 0u);
  EXPECT_EQ(d.counts()[0], 50u);
  EXPECT_EQ(d.sums()[1], 0.0);
}

TEST(SampleDataset, BinomialMean) {
  const std::size_t n = 100'000;
  const Dataset d = sample_dataset(points({0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0}), n, 11);
  double mean = 0.0;
  for (const Sample& s : d.samples()) mean += s.reward;
  mean /= static_cast<double>(n);
  EXPECT_NEAR(mean, 0.5, 5.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(SampleDataset, DeterministicAndCountsConsistent) {
  const BanditInstance inst(Policy({0.2, 0.3, 0.5}), Policy::uniform(3),
                            RewardModel({Normal{0, 1}, Bernoulli{0.3}, PointMass{2}}));
  const Dataset a = sample_dataset(inst, 500, 42);
  EXPECT_EQ(a, sample_dataset(inst, 500, 42));
  EXPECT_NE(a, sample_dataset(inst, 500, 43));
  std::size_t total = 0;
  for (std::size_t c : a.counts()) total += c;
  EXPECT_EQ(total, a.size());
}

TEST(Oracle, SingleArm) {
  const BanditInstance inst = points({1.0}, {1.0}, {1.0});
  for (std::size_t n : {1u, 4u, 9u}) {
    const ExactMoments m = enumerate_exact_moments(inst, n, EstimatorId::kLr);
    EXPECT_DOUBLE_EQ(m.mean, 1.0);
    EXPECT_DOUBLE_EQ(m.variance, 0.0);
    EXPECT_DOUBLE_EQ(m.mse, 0.0);
  }
}

TEST(Oracle, TwoArmLrMse) {
  const BanditInstance inst = points({0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0});
  const ExactMoments m = enumerate_exact_moments(inst, 3, EstimatorId::kLr);
  EXPECT_NEAR(m.mse, 1.0 / 12.0, 1e-15);
}

TEST(Oracle, TwoArmRegBias) {
  const BanditInstance inst = points({0.5, 0.5}, {0.5, 0.5}, {1.0, 1.0});
  const ExactMoments m = enumerate_exact_moments(inst, 1, EstimatorId::kReg);
  EXPECT_DOUBLE_EQ(m.mean, 0.5);
  EXPECT_DOUBLE_EQ(m.mean - policy_value(inst), -0.5);
}

TEST(Oracle, RejectsContinuousAndBudget) {
  const BanditInstance normal(Policy::uniform(2), Policy::uniform(2),
                              RewardModel({Normal{0, 1}, PointMass{1}}));
  EXPECT_THROW(enumerate_exact_moments(normal, 2, EstimatorId::kLr), InvalidArgument);
  const BanditInstance wide = points(std::vector<double>(10, 0.1), std::vector<double>(10, 0.1),
                                     std::vector<double>(10, 0.5));
  EXPECT_THROW(enumerate_exact_moments(wide, 8, EstimatorId::kLr, 1000), BudgetExceeded);
}

TEST(Oracle, MatchesNaiveEnumeration) {
  Engine rng = make_engine(2024);
  for (int i = 0; i < 80; ++i) {
    const BanditInstance inst = random_discrete_instance(rng, 3);
    const std::size_t n = 1 + static_cast<std::size_t>(i % 4);
    const oracle::Moments lr = oracle::lr_moments(inst, n);
    const oracle::Moments reg = oracle::reg_moments(inst, n);
    const ExactMoments lr_lib = enumerate_exact_moments(inst, n, EstimatorId::kLr);
    const ExactMoments reg_lib = enumerate_exact_moments(inst, n, EstimatorId::kReg);
    EXPECT_NEAR(lr_lib.mean, lr.mean, 1e-12);
    EXPECT_NEAR(lr_lib.mse, lr.mse, 1e-12);
    EXPECT_NEAR(reg_lib.mean, reg.mean, 1e-12);
    EXPECT_NEAR(reg_lib.mse, reg.mse, 1e-12);
    EXPECT_NEAR(lr_lib.mean, policy_value(inst), 1e-12);
  }
}

TEST(Oracle, LogSpaceForLongSequences) {
  // n > 30 takes the log-space path; K = 1 keeps the enumeration tiny.
  const BanditInstance inst = points({1.0}, {1.0}, {0.4});
  const ExactMoments m = enumerate_exact_moments(inst, 40, EstimatorId::kReg);
  EXPECT_NEAR(m.mean, 0.4, 1e-15);
  EXPECT_NEAR(m.mse, 0.0, 1e-15);
}

#include <gtest/gtest.h>

#include <cmath>

#include "opeval/analytics.hpp"
#include "opeval/errors.hpp"
#include "opeval/experiments.hpp"
#include "opeval/montecarlo.hpp"
#include "opeval/rng.hpp"

using namespace opeval;

namespace {

bool same_rows(const McResult& a, const McResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const McRow& x = a.rows[i];
    const McRow& y = b.rows[i];
    if (x.estimator != y.estimator || x.n != y.n || x.mse != y.mse || x.nmse != y.nmse ||
        x.stderr_mse != y.stderr_mse)
      return false;
  }
  return true;
}

}  // namespace

TEST(Rng, StreamSeedsDiffer) {
  EXPECT_NE(stream_seed(1, 10, 0), stream_seed(1, 10, 1));
  EXPECT_NE(stream_seed(1, 10, 0), stream_seed(1, 11, 0));
  EXPECT_NE(stream_seed(1, 10, 0), stream_seed(2, 10, 0));
  EXPECT_EQ(make_engine(5)(), make_engine(5)());
}

TEST(Grid, Shapes) {
  EXPECT_EQ(decade_grid(10, 1000), (std::vector<std::size_t>{10, 20, 50, 100, 200, 500, 1000}));
  const auto g = log_grid(5, 500, 10);
  EXPECT_EQ(g.front(), 5u);
  EXPECT_EQ(g.back(), 500u);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i - 1], g[i]);
}

TEST(McConfig, Validation) {
  McConfig c;
  c.sample_sizes = {10};
  c.replications = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.replications = 2;
  c.sample_sizes = {};
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(RunMc, ZeroErrorWhenNothingVaries) {
  const BanditInstance inst(Policy({0.4, 0.6}), Policy({0.4, 0.6}),
                            RewardModel({PointMass{0.5}, PointMass{0.5}}));
  const McResult r = run_mc(inst, McConfig{200, {1, 7, 30}, 1, {EstimatorId::kLr}, 0});
  for (const McRow& row : r.rows) EXPECT_EQ(row.mse, 0.0);
}

TEST(RunMc, RowInvariants) {
  const McResult r = run_mc(comparison_instance("uniform").instance,
                            McConfig{500, {10, 100}, 3, {EstimatorId::kLr, EstimatorId::kReg}, 1});
  ASSERT_EQ(r.rows.size(), 4u);
  for (const McRow& row : r.rows) {
    EXPECT_EQ(row.nmse, static_cast<double>(row.n) * row.mse);
    EXPECT_EQ(row.replications, 500u);
    EXPECT_EQ(row.seed, 3u);
    EXPECT_GT(row.stderr_mse, 0.0);
  }
}

TEST(RunMc, DeterministicAcrossThreadCounts) {
  const BanditInstance inst = comparison_instance("reverse").instance;
  McConfig c{300, {5, 50, 200}, 77, {EstimatorId::kLr, EstimatorId::kReg, EstimatorId::kRegReweighted}, 1};
  const McResult one = run_mc(inst, c);
  for (std::size_t t : {2u, 3u, 8u}) {
    c.threads = t;
    EXPECT_TRUE(same_rows(one, run_mc(inst, c))) << t;
  }
}

TEST(RunMc, UnidentifiableRejectedForLr) {
  const BanditInstance inst(Policy({1.0, 0.0}), Policy({0.5, 0.5}),
                            RewardModel({PointMass{1}, PointMass{0}}));
  EXPECT_THROW(run_mc(inst, McConfig{10, {5}, 1, {EstimatorId::kLr}, 1}), UnidentifiableError);
  EXPECT_NO_THROW(run_mc(inst, McConfig{10, {5}, 1, {EstimatorId::kReg}, 1}));
}

TEST(RunMc, AgreesWithExactOracle) {
  const BanditInstance inst(Policy({0.3, 0.7}), Policy({0.8, 0.2}),
                            RewardModel({Bernoulli{0.6}, PointMass{0.9}}));
  const McResult r = run_mc(inst, McConfig{10'000, {1, 3, 6}, 4, {EstimatorId::kLr, EstimatorId::kReg}, 0});
  for (const McRow& row : r.rows) {
    const double exact = enumerate_exact_moments(inst, row.n, row.estimator).mse;
    EXPECT_NEAR(row.mse, exact, 4.0 * row.stderr_mse) << to_string(row.estimator) << " n=" << row.n;
  }
}

TEST(RunMc, LrNmseFlatAndNearClosedForm) {
  const ExperimentInstance e = comparison_instance("prop");
  const McResult r = run_mc(e.instance, McConfig{4000, {10, 100, 1000}, 9, {EstimatorId::kLr}, 0});
  double lo = 1e300, hi = -1e300, se = 0.0;
  for (const McRow& row : r.rows) {
    EXPECT_NEAR(row.nmse, e.v1 + e.v2, 3.5 * row.stderr_mse * row.n);
    lo = std::min(lo, row.nmse);
    hi = std::max(hi, row.nmse);
    se = std::max(se, row.stderr_mse * row.n);
  }
  EXPECT_LE(hi - lo, 6.0 * se);
}

TEST(Experiments, ComparisonInstances) {
  const auto prop = comparison_instance("prop");
  const auto uni = comparison_instance("uniform");
  const auto rev = comparison_instance("reverse");
  EXPECT_LT(prop.v2, uni.v2);
  EXPECT_LT(uni.v2, rev.v2);
  EXPECT_NEAR(prop.v1, 0.01, 1e-15);
  EXPECT_NEAR(rev.v2, compute_v1_v2(rev.instance).v2, 0.0);
  EXPECT_THROW(comparison_instance("other"), InvalidArgument);
}

TEST(Experiments, SmallKScalingPeak) {
  KScalingOptions o;
  o.num_actions = {20};
  o.replications = 300;
  const ExperimentBundle b = experiment_k_scaling(o);
  const std::size_t peak = nmse_peak_n(b.result, "K=20", EstimatorId::kReg);
  EXPECT_GE(peak * 2, 19u / 2);
  EXPECT_LE(peak, 2 * 19u);
}

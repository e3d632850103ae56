#include <gtest/gtest.h>

#include <sstream>

#include "opeval/errors.hpp"
#include "opeval/io.hpp"
#include "opeval/random_instances.hpp"

using namespace opeval;

TEST(Io, BanditRoundTrip) {
  Engine rng = make_engine(1);
  for (int i = 0; i < 20; ++i) {
    const BanditInstance a = random_normal_instance(rng, 6);
    const BanditInstance b = io::parse_bandit(io::dump_bandit(a));
    EXPECT_EQ(a.behavior(), b.behavior());
    EXPECT_EQ(a.target(), b.target());
    for (std::size_t k = 0; k < a.num_actions(); ++k) {
      EXPECT_EQ(a.rewards().mean(k), b.rewards().mean(k));
      EXPECT_EQ(a.rewards().variance(k), b.rewards().variance(k));
    }
  }
}

TEST(Io, ContextualAndMdpRoundTrip) {
  Engine rng = make_engine(2);
  const ContextualInstance c = random_contextual_instance(rng, 3, 3);
  EXPECT_EQ(io::dump_contextual(io::parse_contextual(io::dump_contextual(c))), io::dump_contextual(c));
  const MdpInstance m = random_mdp_instance(rng, 3, 2, 3);
  EXPECT_EQ(io::dump_mdp(io::parse_mdp(io::dump_mdp(m))), io::dump_mdp(m));
}

TEST(Io, ParseErrors) {
  EXPECT_THROW(io::parse_bandit("{"), InvalidArgument);
  EXPECT_THROW(io::parse_bandit(R"({"K":2,"behavior":[0.5,0.5],"target":[1,0]})"), InvalidArgument);
  EXPECT_THROW(io::parse_bandit(
                   R"({"K":2,"behavior":[0.5,0.5],"target":[1,0],"rewards":[{"kind":"cauchy"},{"kind":"point","value":0}]})"),
               InvalidArgument);
  EXPECT_THROW(io::parse_bandit(
                   R"({"K":3,"behavior":[0.5,0.5],"target":[1,0],"rewards":[{"kind":"point","value":0},{"kind":"point","value":0}]})"),
               InvalidArgument);
  EXPECT_THROW(io::parse_mc_config(R"({"replications":10})"), InvalidArgument);
  EXPECT_THROW(io::read_file("/nonexistent/file.json"), InvalidArgument);
}

TEST(Io, McConfigFields) {
  const McConfig c = io::parse_mc_config(
      R"({"replications":50,"sample_sizes":[5,10],"seed":9,"estimators":["reg_reweighted"],"threads":2})");
  EXPECT_EQ(c.replications, 50u);
  EXPECT_EQ(c.sample_sizes, (std::vector<std::size_t>{5, 10}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.estimators, (std::vector<EstimatorId>{EstimatorId::kRegReweighted}));
  EXPECT_EQ(c.threads, 2u);
}

TEST(Io, CsvSchema) {
  McResult r;
  r.rows.push_back({"exp", "inst", EstimatorId::kReg, 10, 100, 0.5, 5.0, 0.01, 7});
  std::ostringstream out;
  io::write_mc_csv(out, r);
  EXPECT_EQ(out.str(),
            "experiment,instance_id,estimator,n,replications,mse,nmse,stderr,seed\n"
            "exp,inst,reg,10,100,0.5,5,0.01,7\n");
}

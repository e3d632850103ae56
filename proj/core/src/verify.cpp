#include "opeval/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "json.hpp"
#include "opeval/errors.hpp"
#include "opeval/random_instances.hpp"
#include "opeval/reductions.hpp"
#include "opeval/rng.hpp"

namespace opeval {
namespace {

constexpr double kExactTol = 1e-10;
constexpr double kSweepTol = 1e-12;
constexpr std::uint64_t kSweepBudget = 2'000'000;

class Checker {
 public:
  explicit Checker(SuiteResult& out) : out_(out) {}

  void expect(bool ok, const char* what, double lhs, double rhs) {
    ++out_.checks;
    if (ok) return;
    ++out_.failures;
    if (out_.detail.empty()) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s: %.17g vs %.17g (check %zu)", what, lhs, rhs,
                    out_.checks);
      out_.detail = buf;
    }
  }

  void near(double lhs, double rhs, double tol, const char* what) {
    expect(std::abs(lhs - rhs) <= tol, what, lhs, rhs);
  }
  void at_most(double lhs, double rhs, double tol, const char* what) {
    expect(lhs <= rhs + tol, what, lhs, rhs);
  }

 private:
  SuiteResult& out_;
};

// Draws n in [1, max_n], shrinking it until the oracle fits the budget.
std::size_t draw_n(Engine& rng, const BanditInstance& inst, std::size_t max_n) {
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
  while (n > 1 && exact_outcome_count(inst, n) > kSweepBudget) --n;
  return n;
}

struct Case {
  BanditInstance instance;
  std::size_t n;
};

std::vector<Case> discrete_cases(std::uint64_t seed, std::size_t count) {
  Engine rng = make_engine(seed);
  std::vector<Case> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    BanditInstance inst = random_discrete_instance(rng, 4);
    const std::size_t n = draw_n(rng, inst, 6);
    out.push_back({std::move(inst), n});
  }
  return out;
}

void suite_lr_mse_identity(Checker& c, std::uint64_t seed, const VerifyHooks& hooks) {
  for (const Case& k : discrete_cases(seed, 60)) {
    const ExactMoments m = enumerate_exact_moments(k.instance, k.n, EstimatorId::kLr);
    const VarianceTerms t = hooks.v1_v2(k.instance);
    c.near(m.mse, (t.v1 + t.v2) / static_cast<double>(k.n), kExactTol, "LR MSE vs (V1+V2)/n");
    c.near(m.mean, policy_value(k.instance), kExactTol, "LR mean vs value");
  }
}

void suite_reg_bias(Checker& c, std::uint64_t seed) {
  for (const Case& k : discrete_cases(seed, 60)) {
    const ExactMoments m = enumerate_exact_moments(k.instance, k.n, EstimatorId::kReg);
    const auto p = p_missing(k.instance.behavior(), k.n);
    double expected = 0.0;
    for (std::size_t a = 0; a < k.instance.num_actions(); ++a)
      expected += k.instance.target()[a] * k.instance.rewards().mean(a) * (1.0 - p[a]);
    c.near(m.mean, expected, kExactTol, "REG mean vs sum pi r (1-p)");
    c.near(policy_value(k.instance) - m.mean, reg_bias(k.instance, k.n), kExactTol, "REG bias");
  }
}

void suite_reg_mse_upper(Checker& c, std::uint64_t seed) {
  for (const Case& k : discrete_cases(seed, 60)) {
    const ExactMoments m = enumerate_exact_moments(k.instance, k.n, EstimatorId::kReg);
    c.at_most(m.mse, reg_mse_upper(k.instance, k.n), kExactTol, "REG MSE vs upper bound");
  }
}

void suite_inverse_moment(Checker& c) {
  for (std::size_t n = 1; n <= 200; ++n) {
    for (int j = 1; j <= 20; ++j) {
      const double p = 0.05 * j;
      const double exact = inverse_moment_exact(n, p);
      const InverseMomentBounds b = inverse_moment_bounds(n, p);
      c.at_most(exact, b.basic, kSweepTol, "E[Z] vs 4/p");
      if (b.refined) c.at_most(exact, *b.refined, kSweepTol, "E[Z] vs refined bound");
    }
  }
}

void suite_indicator_variance(Checker& c, std::uint64_t seed) {
  Engine rng = make_engine(seed);
  for (int i = 0; i < 100; ++i) {
    const BanditInstance inst = random_discrete_instance(rng, 4);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const IndicatorVariance iv = indicator_variance_bound(inst, n);
    c.expect(iv.exact, "indicator variance computed exactly", 0.0, 0.0);
    c.at_most(iv.variance, iv.bound, kSweepTol, "indicator variance vs bound");
  }
}

void suite_chernoff(Checker& c) {
  for (std::size_t n = 1; n <= 200; ++n) {
    for (int j = 1; j <= 20; ++j) {
      const double p = 0.05 * j;
      for (int b = 0; b < 10; ++b) {
        const double beta = 0.1 * b;
        c.at_most(binomial_lower_tail(n, p, beta), chernoff_lower_tail(n, p, beta), kSweepTol,
                  "binomial lower tail vs Chernoff");
      }
    }
  }
}

void suite_fisher(Checker& c, std::uint64_t seed, const VerifyHooks& hooks) {
  Engine rng = make_engine(seed);
  for (int i = 0; i < 100; ++i) {
    const BanditInstance inst = random_normal_instance(rng, 8);
    c.near(fisher_information(inst).quadratic_form(), hooks.v1_v2(inst).v1, kSweepTol,
           "pi' F^-1 pi vs V1");
  }
}

void suite_reductions(Checker& c, std::uint64_t seed) {
  Engine rng = make_engine(seed);
  for (int i = 0; i < 50; ++i) {
    const ContextualInstance ctx = random_contextual_instance(rng, 3, 3);
    c.near(policy_value(contextual_to_bandit(ctx)), contextual_policy_value(ctx), kExactTol,
           "contextual reduction value");
    const MdpInstance mdp = random_mdp_instance(rng, 3, 3, 3);
    const MdpReduction red = mdp_to_bandit(mdp);
    c.near(policy_value(red.bandit), mdp_policy_value(mdp, mdp.target()), kExactTol,
           "trajectory reduction value");
  }
  for (std::size_t n = 2; n <= 8; ++n) {
    for (double p : {0.1, 0.25, 0.5, 0.9}) {
      const MdpInstance lock = combination_lock(n, p);
      double expected = 1.0;
      for (std::size_t i = 0; i + 1 < n; ++i) expected *= 1.0 - p;
      const double reach = terminal_state_probability(lock, lock.behavior(), n - 1);
      c.near(reach, expected, 4 * std::numeric_limits<double>::epsilon() * expected,
             "combination lock reach probability");
    }
  }
}

// Any single subset gives a valid bound, so the exhaustive search has to agree
// with a plain scan over all masks and dominate the sorted-prefix heuristic.
void suite_minimax(Checker& c, std::uint64_t seed) {
  Engine rng = make_engine(seed);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    MinimaxClass cls{random_policy(rng, k, 0.3), random_policy(rng, k), 1.0,
                     std::vector<double>(k, 0.0)};
    for (double& s : cls.sigma2) s = std::uniform_real_distribution<double>(0.0, 0.25)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);

    double coverage = 0.0;
    std::vector<std::size_t> subset;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      subset.clear();
      for (std::size_t a = 0; a < k; ++a)
        if (mask & (std::size_t{1} << a)) subset.push_back(a);
      const double t = cls.target.mass(subset);
      coverage = std::max(coverage, t * t * p_missing_set(cls.behavior, subset, n));
    }
    double v1 = 0.0;
    for (std::size_t a = 0; a < k; ++a)
      v1 += cls.target[a] * cls.target[a] * cls.sigma2[a] / cls.behavior[a];
    const MinimaxBound exhaustive = minimax_lower_bound(cls, n);
    const double expected = 0.25 * std::max(coverage, v1 / static_cast<double>(n));
    c.near(exhaustive.value, expected, 1e-12 * std::max(1.0, expected),
           "exhaustive vs brute-force subsets");
    const MinimaxBound heuristic = minimax_lower_bound(cls, n, true);
    c.at_most(heuristic.value, exhaustive.value, 1e-15, "heuristic vs exhaustive");
  }
}

}  // namespace

const char* to_string(SuiteStatus status) {
  switch (status) {
    case SuiteStatus::kPass:
      return "pass";
    case SuiteStatus::kFail:
      return "fail";
    case SuiteStatus::kSkipped:
      return "skipped";
  }
  return "unknown";
}

const std::vector<std::string>& verify_suite_ids() {
  static const std::vector<std::string> ids = {"lr_mse_identity",  "reg_bias", "reg_mse_upper",
                                               "inverse_moment", "indicator_variance",   "chernoff",
                                               "fisher", "reductions", "minimax"};
  return ids;
}

std::vector<SuiteResult> run_verify(std::string_view suite, std::uint64_t seed,
                                    const VerifyHooks& hooks) {
  const auto& ids = verify_suite_ids();
  if (suite != "all" && std::find(ids.begin(), ids.end(), suite) == ids.end())
    throw InvalidArgument("unknown verify suite: " + std::string(suite));

  std::vector<SuiteResult> results;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SuiteResult r;
    r.id = ids[i];
    if (suite == "all" || suite == ids[i]) {
      Checker c(r);
      const std::uint64_t s = stream_seed(seed, i, 0);
      try {
        if (r.id == "lr_mse_identity") suite_lr_mse_identity(c, s, hooks);
        else if (r.id == "reg_bias") suite_reg_bias(c, s);
        else if (r.id == "reg_mse_upper") suite_reg_mse_upper(c, s);
        else if (r.id == "inverse_moment") suite_inverse_moment(c);
        else if (r.id == "indicator_variance") suite_indicator_variance(c, s);
        else if (r.id == "chernoff") suite_chernoff(c);
        else if (r.id == "fisher") suite_fisher(c, s, hooks);
        else if (r.id == "reductions") suite_reductions(c, s);
        else if (r.id == "minimax") suite_minimax(c, s);
      } catch (const std::exception& e) {
        ++r.failures;
        r.detail = std::string("exception: ") + e.what();
      }
      r.status = r.failures == 0 ? SuiteStatus::kPass : SuiteStatus::kFail;
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string verify_report_json(const std::vector<SuiteResult>& results) {
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  bool ok = true;
  for (const SuiteResult& r : results) {
    ok = ok && r.status != SuiteStatus::kFail;
    suites.push_back({{"id", r.id},
                      {"status", to_string(r.status)},
                      {"checks", r.checks},
                      {"failures", r.failures},
                      {"detail", r.detail}});
  }
  nlohmann::ordered_json out = {{"passed", ok}, {"suites", std::move(suites)}};
  return out.dump(2) + "\n";
}

}  // namespace opeval

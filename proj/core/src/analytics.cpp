#include "opeval/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "opeval/binomial.hpp"
#include "opeval/detail/categorical.hpp"
#include "opeval/errors.hpp"
#include "opeval/rng.hpp"

namespace opeval {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_missing(double mass, std::size_t n) {
  return std::pow(std::clamp(1.0 - mass, 0.0, 1.0), static_cast<double>(n));
}

void require_n(std::size_t n) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
}

bool gaussian_family(const RewardDist& d) {
  return std::holds_alternative<Normal>(d) || std::holds_alternative<PointMass>(d);
}

}  // namespace

VarianceTerms compute_v1_v2(const BanditInstance& instance) {
  if (!instance.identifiable()) return {kInf, kInf, false};
  const Policy& pi = instance.target();
  const Policy& pd = instance.behavior();
  const RewardModel& rw = instance.rewards();
  double v1 = 0.0;
  double second = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    if (pi[a] == 0.0) continue;
    const double ratio = pi[a] * pi[a] / pd[a];
    v1 += ratio * rw.variance(a);
    second += ratio * rw.mean(a) * rw.mean(a);
  }
  const double v = policy_value(instance);
  return {v1, std::max(0.0, second - v * v), true};
}

std::vector<double> p_missing(const Policy& behavior, std::size_t n) {
  std::vector<double> out(behavior.size());
  for (std::size_t a = 0; a < behavior.size(); ++a) out[a] = power_missing(behavior[a], n);
  return out;
}

double p_missing_set(const Policy& behavior, std::span<const std::size_t> subset, std::size_t n) {
  return power_missing(behavior.mass(subset), n);
}

BiasVarianceTerms compute_v0n_v3n(const BanditInstance& instance, std::size_t n) {
  require_n(n);
  instance.require_identifiable();
  const Policy& pi = instance.target();
  const Policy& pd = instance.behavior();
  const RewardModel& rw = instance.rewards();
  const std::vector<double> p = p_missing(pd, n);

  double bias = 0.0;
  double spread = 0.0;
  double v3n = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    if (pi[a] == 0.0) continue;
    const double w = pi[a] * rw.mean(a);
    bias += w * p[a];
    spread += w * w * p[a] * (1.0 - p[a]);
    const double noise = pi[a] * pi[a] * rw.variance(a);
    if (noise > 0.0) v3n += inverse_moment_exact(n, pd[a]) * noise;
  }
  return {bias * bias + spread, v3n};
}

double lr_mse(const BanditInstance& instance, std::size_t n) {
  require_n(n);
  instance.require_identifiable();
  const VarianceTerms vt = compute_v1_v2(instance);
  return (vt.v1 + vt.v2) / static_cast<double>(n);
}

double reg_bias(const BanditInstance& instance, std::size_t n) {
  require_n(n);
  const std::vector<double> p = p_missing(instance.behavior(), n);
  double b = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a)
    b += instance.target()[a] * instance.rewards().mean(a) * p[a];
  return b;
}

double reg_mse_upper(const BanditInstance& instance, std::size_t n) {
  require_n(n);
  const VarianceTerms vt = compute_v1_v2(instance);
  const BiasVarianceTerms bv = compute_v0n_v3n(instance, n);
  return bv.v0n + (vt.v1 + bv.v3n) / static_cast<double>(n);
}

double reg_mse_lower_normal(const BanditInstance& instance, std::size_t n) {
  require_n(n);
  instance.require_identifiable();
  for (const RewardDist& d : instance.rewards().dists()) {
    if (!gaussian_family(d)) throw InvalidArgument("REG lower bound requires normal rewards");
  }
  const Policy& pi = instance.target();
  const Policy& pd = instance.behavior();
  const double nd = static_cast<double>(n);
  const double v1 = compute_v1_v2(instance).v1;
  const double b = reg_bias(instance, n);
  const std::vector<double> p = p_missing(pd, n);
  double missing_noise = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    if (pi[a] == 0.0) continue;
    missing_noise += pi[a] * pi[a] / pd[a] * instance.rewards().variance(a) * p[a];
  }
  return v1 / nd + 4.0 * b * b * (1.0 + v1 / nd) + 2.0 / nd * missing_noise;
}

MinimaxClass MinimaxClass::from_instance(const BanditInstance& instance, std::optional<double> rmax) {
  const RewardModel& rw = instance.rewards();
  double cap = 1.0;
  if (rmax) {
    cap = *rmax;
  } else if (rw.rmax()) {
    cap = *rw.rmax();
  } else {
    for (double m : rw.means()) cap = std::max(cap, m);
  }
  rw.require_bounded_means(cap);
  return MinimaxClass{instance.target(), instance.behavior(), cap,
                      std::vector<double>(rw.variances().begin(), rw.variances().end())};
}

MinimaxBound minimax_lower_bound(const MinimaxClass& cls, std::size_t n) {
  return minimax_lower_bound(cls, n, cls.target.size() > kExhaustiveSubsetLimit);
}

MinimaxBound minimax_lower_bound(const MinimaxClass& cls, std::size_t n, bool force_heuristic) {
  require_n(n);
  const std::size_t k = cls.target.size();
  if (cls.behavior.size() != k || cls.sigma2.size() != k)
    throw InvalidArgument("minimax class dimensions disagree");
  if (!(cls.rmax >= 0.0)) throw InvalidArgument("R_max must be nonnegative");

  MinimaxBound out;
  double v1 = 0.0;
  std::vector<std::size_t> unsupported;
  for (std::size_t a = 0; a < k; ++a) {
    if (cls.sigma2[a] < 0.0) throw InvalidArgument("variance caps must be nonnegative");
    if (cls.target[a] == 0.0 || cls.sigma2[a] == 0.0) continue;
    if (cls.behavior[a] == 0.0) {
      unsupported.push_back(a);
      continue;
    }
    v1 += cls.target[a] * cls.target[a] * cls.sigma2[a] / cls.behavior[a];
  }
  if (!unsupported.empty())
    throw UnidentifiableError("noisy actions never taken by the behavior policy", unsupported);
  out.variance_term = v1 / static_cast<double>(n);

  double best = 0.0;
  if (!force_heuristic) {
    if (k > 30) throw InvalidArgument("exhaustive subset search is limited to 30 actions");
    const std::size_t subsets = std::size_t{1} << k;
    std::vector<double> target_mass(subsets, 0.0);
    std::vector<double> behavior_mass(subsets, 0.0);
    std::size_t best_mask = 0;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      const std::size_t a = static_cast<std::size_t>(std::countr_zero(mask));
      const std::size_t rest = mask & (mask - 1);
      target_mass[mask] = target_mass[rest] + cls.target[a];
      behavior_mass[mask] = behavior_mass[rest] + cls.behavior[a];
      const double value = target_mass[mask] * target_mass[mask] * power_missing(behavior_mass[mask], n);
      if (value > best) {
        best = value;
        best_mask = mask;
      }
    }
    for (std::size_t a = 0; a < k; ++a)
      if (best_mask & (std::size_t{1} << a)) out.best_subset.push_back(a);
  } else {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    auto ratio = [&](std::size_t a) {
      if (cls.behavior[a] == 0.0) return cls.target[a] > 0.0 ? kInf : 0.0;
      return cls.target[a] / cls.behavior[a];
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return ratio(x) > ratio(y); });
    double target_mass = 0.0;
    double behavior_mass = 0.0;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < k; ++i) {
      target_mass += cls.target[order[i]];
      behavior_mass += cls.behavior[order[i]];
      const double value = target_mass * target_mass * power_missing(behavior_mass, n);
      if (value > best) {
        best = value;
        best_len = i + 1;
      }
    }
    out.best_subset.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len));
    std::sort(out.best_subset.begin(), out.best_subset.end());
    out.heuristic = true;
  }
  out.coverage_term = cls.rmax * cls.rmax * best;
  out.value = 0.25 * std::max(out.coverage_term, out.variance_term);
  return out;
}

double inverse_moment_exact(std::size_t n, double p) {
  require_n(n);
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("inverse moment needs 0 < p <= 1");
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t k = 1; k <= n; ++k) total += nd / static_cast<double>(k) * binomial_pmf(n, k, p);
  return total - 1.0 / p;
}

InverseMomentBounds inverse_moment_bounds(std::size_t n, double p) {
  require_n(n);
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("inverse moment needs 0 < p <= 1");
  InverseMomentBounds out;
  out.basic = 4.0 / p;
  const double np = static_cast<double>(n) * p;
  if (np >= 34.0) {
    out.refined = 2.0 / p * std::sqrt(2.0 / np) * (std::sqrt(1.5 * std::log(np / 2.0)) + 1.0);
  }
  return out;
}

namespace {

// Walks every count vector (n_a) over the supported actions with its
// multinomial probability and accumulates the centred second moment.
class CountEnumerator {
 public:
  CountEnumerator(std::vector<double> probs, std::vector<double> weights, std::size_t n, double mean)
      : probs_(std::move(probs)), weights_(std::move(weights)), n_(n), mean_(mean) {
    for (double p : probs_) log_probs_.push_back(std::log(p));
  }

  double run() {
    walk(0, n_, std::lgamma(static_cast<double>(n_) + 1.0), 0.0);
    return centred_;
  }

 private:
  void walk(std::size_t idx, std::size_t remaining, double log_weight, double s) {
    if (idx + 1 == probs_.size()) {
      const double lw = log_weight - std::lgamma(static_cast<double>(remaining) + 1.0) +
                        static_cast<double>(remaining) * log_probs_[idx];
      const double total = s + (remaining > 0 ? weights_[idx] : 0.0);
      centred_ += std::exp(lw) * (total - mean_) * (total - mean_);
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      const double lw = log_weight - std::lgamma(static_cast<double>(c) + 1.0) +
                        static_cast<double>(c) * log_probs_[idx];
      walk(idx + 1, remaining - c, lw, s + (c > 0 ? weights_[idx] : 0.0));
    }
  }

  std::vector<double> probs_;
  std::vector<double> log_probs_;
  std::vector<double> weights_;
  std::size_t n_;
  double mean_;
  double centred_ = 0.0;
};

double composition_count(std::size_t n, std::size_t parts) {
  if (parts == 0) return 1.0;
  return std::exp(log_binomial_coefficient(n + parts - 1, parts - 1));
}

}  // namespace

IndicatorVariance indicator_variance_bound(const BanditInstance& instance, std::size_t n,
                                           std::uint64_t budget, std::uint64_t seed) {
  require_n(n);
  const Policy& pi = instance.target();
  const Policy& pd = instance.behavior();
  const RewardModel& rw = instance.rewards();
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    if (rw.mean(a) < 0.0) throw InvalidArgument("indicator variance bound needs r(a) >= 0");
  }
  const std::vector<double> p = p_missing(pd, n);

  IndicatorVariance out;
  std::vector<double> probs;
  std::vector<double> weights;
  double mean = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    const double w = pi[a] * rw.mean(a);
    out.bound += w * w * p[a] * (1.0 - p[a]);
    if (pd[a] == 0.0) continue;
    probs.push_back(pd[a]);
    weights.push_back(w);
    mean += w * (1.0 - p[a]);
  }

  if (composition_count(n, probs.size()) <= static_cast<double>(budget)) {
    out.variance = CountEnumerator(probs, weights, n, mean).run();
    out.exact = true;
    return out;
  }

  constexpr std::size_t kDraws = 20'000;
  const detail::CategoricalSampler pick(pd.probs());
  std::vector<std::size_t> seen(instance.num_actions());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < kDraws; ++r) {
    Engine rng = make_engine(stream_seed(seed, n, r));
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t i = 0; i < n; ++i) seen[pick(rng)] = 1;
    double s = 0.0;
    for (std::size_t a = 0; a < seen.size(); ++a)
      if (seen[a]) s += pi[a] * rw.mean(a);
    sum += s;
    sum_sq += s * s;
  }
  const double m = sum / kDraws;
  out.variance = (sum_sq - kDraws * m * m) / (kDraws - 1);
  out.exact = false;
  return out;
}

double chernoff_lower_tail(std::size_t n, double p, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("Chernoff bound needs 0 <= beta < 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must be in [0,1]");
  return std::exp(-beta * beta * static_cast<double>(n) * p / 2.0);
}

double binomial_lower_tail(std::size_t n, double p, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("tail needs 0 <= beta < 1");
  require_n(n);
  // Counts within 1e-9 of the threshold are included so that rounding in
  // (1-beta) n p never drops a boundary term.
  const double threshold = (1.0 - beta) * static_cast<double>(n) * p;
  const auto k = static_cast<std::size_t>(std::floor(threshold + 1e-9));
  return binomial_cdf(n, k, p);
}

double FisherInfo::quadratic_form() const {
  double q = 0.0;
  for (std::size_t a = 0; a < diagonal.size(); ++a) {
    if (gradient[a] == 0.0) continue;
    if (diagonal[a] == 0.0) return kInf;
    q += gradient[a] * gradient[a] / diagonal[a];
  }
  return q;
}

FisherInfo fisher_information(const BanditInstance& instance) {
  FisherInfo info;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    const double s2 = instance.rewards().variance(a);
    if (!(s2 > 0.0)) throw InvalidArgument("Fisher information needs positive reward variances");
    info.diagonal.push_back(instance.behavior()[a] / s2);
    info.gradient.push_back(instance.target()[a]);
  }
  return info;
}

double reg_minimax_constant(const BanditInstance& instance) {
  const double k = static_cast<double>(instance.num_actions());
  double ratio = 0.0;
  for (std::size_t a = 0; a < instance.num_actions(); ++a) {
    const double r = instance.rewards().mean(a);
    const double s2 = instance.rewards().variance(a);
    if (r == 0.0) continue;
    ratio = std::max(ratio, s2 > 0.0 ? r * r / s2 : kInf);
  }
  return k * (std::min(4.0 * k, ratio) + 5.0);
}

double reg_ratio_lower_bound(std::size_t num_actions, double n) {
  if (num_actions < 2) throw InvalidArgument("ratio bound needs K >= 2");
  return n * std::exp(-2.0 * n / static_cast<double>(num_actions - 1));
}

AnalyticReport analytic_report(const BanditInstance& instance, std::size_t n,
                               std::optional<double> rmax) {
  require_n(n);
  instance.require_identifiable();
  AnalyticReport r;
  r.n = n;
  const VarianceTerms vt = compute_v1_v2(instance);
  r.v1 = vt.v1;
  r.v2 = vt.v2;
  r.p_missing = p_missing(instance.behavior(), n);
  const BiasVarianceTerms bv = compute_v0n_v3n(instance, n);
  r.v0n = bv.v0n;
  r.v3n = bv.v3n;
  r.bias_bn = reg_bias(instance, n);
  r.lr_mse = lr_mse(instance, n);
  r.reg_mse_upper = reg_mse_upper(instance, n);
  const auto& dists = instance.rewards().dists();
  if (std::all_of(dists.begin(), dists.end(), gaussian_family)) {
    r.reg_mse_lower_normal = reg_mse_lower_normal(instance, n);
  }
  const MinimaxBound mb = minimax_lower_bound(MinimaxClass::from_instance(instance, rmax), n);
  r.minimax_lower = mb.value;
  r.best_subset = mb.best_subset;
  r.heuristic = mb.heuristic;
  return r;
}

}  // namespace opeval

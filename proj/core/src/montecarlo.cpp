#include "opeval/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "opeval/errors.hpp"
#include "opeval/estimators.hpp"
#include "opeval/rng.hpp"

namespace opeval {

void McConfig::validate() const {
  if (replications < 2) throw InvalidArgument("need at least 2 replications");
  if (sample_sizes.empty()) throw InvalidArgument("need at least one sample size");
  if (!std::is_sorted(sample_sizes.begin(), sample_sizes.end()))
    throw InvalidArgument("sample sizes must be sorted");
  if (sample_sizes.front() == 0) throw InvalidArgument("sample sizes must be positive");
  if (estimators.empty()) throw InvalidArgument("need at least one estimator");
}

const McRow& McResult::find(std::string_view instance_id, EstimatorId estimator,
                            std::size_t n) const {
  for (const McRow& row : rows) {
    if (row.instance_id == instance_id && row.estimator == estimator && row.n == n) return row;
  }
  throw InvalidArgument("no Monte Carlo row for instance '" + std::string(instance_id) + "'");
}

void McResult::append(const McResult& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

namespace {

double estimate(EstimatorId id, const BanditInstance& instance, const Dataset& data) {
  switch (id) {
    case EstimatorId::kLr: return lr_estimate(instance.target(), instance.behavior(), data).value;
    case EstimatorId::kReg: return reg_estimate(instance.target(), data).value;
    case EstimatorId::kRegReweighted: return reg_estimate_reweighted(instance.target(), data).value;
  }
  return 0.0;
}

std::size_t resolve_threads(std::size_t requested, std::size_t work) {
  std::size_t t = requested;
  if (t == 0) t = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::clamp<std::size_t>(t, 1, std::max<std::size_t>(1, work));
}

}  // namespace

McResult run_mc(const BanditInstance& instance, const McConfig& config,
                std::string_view experiment, std::string_view instance_id) {
  config.validate();
  const bool needs_lr = std::find(config.estimators.begin(), config.estimators.end(),
                                  EstimatorId::kLr) != config.estimators.end();
  if (needs_lr) instance.require_identifiable();

  const double truth = policy_value(instance);
  const std::size_t reps = config.replications;
  const std::size_t num_est = config.estimators.size();
  const std::size_t threads = resolve_threads(config.threads, reps);

  McResult result;
  // squared[e * reps + i] holds estimator e's squared error on replication i.
  std::vector<double> squared(num_est * reps);
  for (std::size_t n : config.sample_sizes) {
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Dataset data = sample_dataset(instance, n, stream_seed(config.seed, n, i));
        for (std::size_t e = 0; e < num_est; ++e) {
          const double err = estimate(config.estimators[e], instance, data) - truth;
          squared[e * reps + i] = err * err;
        }
      }
    };
    if (threads == 1) {
      work(0, reps);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(work, reps * t / threads, reps * (t + 1) / threads);
      }
    }

    const double r = static_cast<double>(reps);
    for (std::size_t e = 0; e < num_est; ++e) {
      const double* sq = squared.data() + e * reps;
      double sum = 0.0;
      for (std::size_t i = 0; i < reps; ++i) sum += sq[i];
      const double mse = sum / r;
      double dev = 0.0;
      for (std::size_t i = 0; i < reps; ++i) dev += (sq[i] - mse) * (sq[i] - mse);
      const double sd = std::sqrt(dev / (r - 1.0));

      McRow row;
      row.experiment = std::string(experiment);
      row.instance_id = std::string(instance_id);
      row.estimator = config.estimators[e];
      row.n = n;
      row.replications = reps;
      row.mse = mse;
      row.nmse = static_cast<double>(n) * mse;
      row.stderr_mse = sd / std::sqrt(r);
      row.seed = config.seed;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  if (lo == 0 || hi < lo) throw InvalidArgument("log grid needs 1 <= lo <= hi");
  if (points < 2 || lo == hi) return {lo};
  std::vector<std::size_t> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    const auto n = static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a))));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  out.back() = hi;
  return out;
}

std::vector<std::size_t> decade_grid(std::size_t lo, std::size_t hi) {
  if (lo == 0 || hi < lo) throw InvalidArgument("grid needs 1 <= lo <= hi");
  std::vector<std::size_t> out;
  for (std::size_t decade = 1; decade <= hi; decade *= 10) {
    for (std::size_t m : {1, 2, 5}) {
      const std::size_t n = m * decade;
      if (n >= lo && n <= hi) out.push_back(n);
    }
    if (decade > hi / 10) break;
  }
  return out;
}

}  // namespace opeval

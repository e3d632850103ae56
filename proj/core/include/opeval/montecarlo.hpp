#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "opeval/bandit.hpp"

namespace opeval {

struct McConfig {
  std::size_t replications = 10'000;
  std::vector<std::size_t> sample_sizes;
  std::uint64_t seed = 20160317;
  std::vector<EstimatorId> estimators{EstimatorId::kLr, EstimatorId::kReg};
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;

  /// Throws InvalidArgument on fewer than 2 replications, an empty or
  /// unsorted n grid, n = 0, or no estimators.
  void validate() const;
};

struct McRow {
  std::string experiment;
  std::string instance_id;
  EstimatorId estimator = EstimatorId::kLr;
  std::size_t n = 0;
  std::size_t replications = 0;
  double mse = 0.0;
  double nmse = 0.0;
  /// Sample standard deviation of the squared errors over sqrt(replications).
  double stderr_mse = 0.0;
  std::uint64_t seed = 0;
};

struct McResult {
  std::vector<McRow> rows;

  /// Throws InvalidArgument when no row matches.
  const McRow& find(std::string_view instance_id, EstimatorId estimator, std::size_t n) const;
  void append(const McResult& other);
};

/// For every n and estimator, draws `replications` datasets and averages the
/// squared error against the true policy value. Replication i at sample size
/// n uses the stream stream_seed(seed, n, i) and feeds every estimator the
/// same dataset. Output is bit-identical for any thread count.
McResult run_mc(const BanditInstance& instance, const McConfig& config,
                std::string_view experiment = "", std::string_view instance_id = "");

/// Roughly log-spaced integer grid from lo to hi inclusive, duplicates removed.
std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points);

/// 1-2-5 grid from lo to hi inclusive (10, 20, 50, 100, ...).
std::vector<std::size_t> decade_grid(std::size_t lo, std::size_t hi);

}  // namespace opeval

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "opeval/analytics.hpp"

namespace opeval {

enum class SuiteStatus { kPass, kFail, kSkipped };

const char* to_string(SuiteStatus status);

struct SuiteResult {
  std::string id;
  SuiteStatus status = SuiteStatus::kSkipped;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;  ///< first failure, if any
};

/// Injection points so the harness can check that the sweeps catch a broken
/// formula.
struct VerifyHooks {
  std::function<VarianceTerms(const BanditInstance&)> v1_v2 = compute_v1_v2;
};

/// lr_mse_identity, reg_bias, reg_mse_upper, inverse_moment, indicator_variance, chernoff, fisher, reductions,
/// minimax.
const std::vector<std::string>& verify_suite_ids();

/// Runs one suite, or every suite for "all". The result always lists every
/// suite; those not selected are reported as skipped. Throws InvalidArgument
/// for unknown ids.
std::vector<SuiteResult> run_verify(std::string_view suite, std::uint64_t seed = 1,
                                    const VerifyHooks& hooks = {});

std::string verify_report_json(const std::vector<SuiteResult>& results);

}  // namespace opeval

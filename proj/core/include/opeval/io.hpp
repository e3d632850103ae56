#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "opeval/analytics.hpp"
#include "opeval/bandit.hpp"
#include "opeval/montecarlo.hpp"
#include "opeval/reductions.hpp"

namespace opeval::io {

// Instance documents:
//   bandit:     {"K", "behavior", "target", "rewards", "rmax"?}
//   contextual: {"M", "K", "context", "behavior", "target", "rewards"}
//   mdp:        {"N", "K", "H", "start", "transitions", "rewards",
//                "behavior", "target"}
// Reward entries: {"kind":"point","value"}, {"kind":"bernoulli","p"},
// {"kind":"normal","mean","var"}, {"kind":"discrete","values","probs"}.
// Parse failures throw InvalidArgument.

BanditInstance parse_bandit(const std::string& json_text);
std::string dump_bandit(const BanditInstance& instance);

ContextualInstance parse_contextual(const std::string& json_text);
std::string dump_contextual(const ContextualInstance& instance);

MdpInstance parse_mdp(const std::string& json_text);
std::string dump_mdp(const MdpInstance& instance);

/// {"replications", "sample_sizes", "seed"?, "estimators"?, "threads"?}
McConfig parse_mc_config(const std::string& json_text);

std::string to_json(const AnalyticReport& report);

/// Header: experiment,instance_id,estimator,n,replications,mse,nmse,stderr,seed
inline constexpr const char* kMcCsvHeader =
    "experiment,instance_id,estimator,n,replications,mse,nmse,stderr,seed";

void write_mc_csv(std::ostream& out, const McResult& result);
std::string to_json(const McResult& result);

/// Throws InvalidArgument when the file cannot be read.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace opeval::io

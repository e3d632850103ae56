#include "opeval/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "opeval/errors.hpp"

namespace opeval::io {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + key + "': " + e.what());
  }
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  return j.at(key);
}

RewardDist reward_from_json(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "point") return PointMass{field<double>(j, "value")};
  if (kind == "bernoulli") return Bernoulli{field<double>(j, "p")};
  if (kind == "normal") return Normal{field<double>(j, "mean"), field<double>(j, "var")};
  if (kind == "discrete") {
    return Discrete{field<std::vector<double>>(j, "values"), field<std::vector<double>>(j, "probs")};
  }
  throw InvalidArgument("unknown reward kind '" + kind + "'");
}

json reward_to_json(const RewardDist& d) {
  return std::visit(Overloaded{
                        [](const PointMass& pm) { return json{{"kind", "point"}, {"value", pm.value}}; },
                        [](const Bernoulli& b) { return json{{"kind", "bernoulli"}, {"p", b.p}}; },
                        [](const Normal& n) {
                          return json{{"kind", "normal"}, {"mean", n.mean}, {"var", n.variance}};
                        },
                        [](const Discrete& dd) {
                          return json{{"kind", "discrete"}, {"values", dd.values}, {"probs", dd.probs}};
                        },
                    },
                    d);
}

std::vector<RewardDist> rewards_from_json(const json& arr, std::size_t expected, const char* what) {
  if (!arr.is_array() || arr.size() != expected)
    throw InvalidArgument(std::string(what) + " must list " + std::to_string(expected) + " rewards");
  std::vector<RewardDist> out;
  for (const json& r : arr) out.push_back(reward_from_json(r));
  return out;
}

Policy policy_from(const json& j, const char* key, std::size_t expected) {
  auto probs = field<std::vector<double>>(j, key);
  if (probs.size() != expected)
    throw InvalidArgument(std::string(key) + " must have " + std::to_string(expected) + " entries");
  return Policy(std::move(probs));
}

ConditionalPolicy table_from(const json& j, const char* key, std::size_t rows, std::size_t cols) {
  auto table = field<std::vector<std::vector<double>>>(j, key);
  if (table.size() != rows)
    throw InvalidArgument(std::string(key) + " must have " + std::to_string(rows) + " rows");
  ConditionalPolicy out;
  for (auto& row : table) {
    if (row.size() != cols)
      throw InvalidArgument(std::string(key) + " rows must have " + std::to_string(cols) + " entries");
    out.emplace_back(std::move(row));
  }
  return out;
}

json table_to_json(const ConditionalPolicy& table) {
  json out = json::array();
  for (const Policy& row : table) out.push_back(std::vector<double>(row.probs().begin(), row.probs().end()));
  return out;
}

std::vector<double> to_vec(const Policy& p) { return {p.probs().begin(), p.probs().end()}; }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

BanditInstance parse_bandit(const std::string& json_text) {
  const json j = parse_text(json_text);
  const auto k = field<std::size_t>(j, "K");
  std::optional<double> rmax;
  if (j.contains("rmax") && !j.at("rmax").is_null()) rmax = field<double>(j, "rmax");
  return BanditInstance(policy_from(j, "behavior", k), policy_from(j, "target", k),
                        RewardModel(rewards_from_json(member(j, "rewards"), k, "rewards"), rmax));
}

std::string dump_bandit(const BanditInstance& instance) {
  json rewards = json::array();
  for (const RewardDist& d : instance.rewards().dists()) rewards.push_back(reward_to_json(d));
  json j{{"K", instance.num_actions()},
         {"behavior", to_vec(instance.behavior())},
         {"target", to_vec(instance.target())},
         {"rewards", rewards}};
  if (instance.rewards().rmax()) j["rmax"] = *instance.rewards().rmax();
  return j.dump(2);
}

ContextualInstance parse_contextual(const std::string& json_text) {
  const json j = parse_text(json_text);
  const auto m = field<std::size_t>(j, "M");
  const auto k = field<std::size_t>(j, "K");
  const json& rw = member(j, "rewards");
  if (!rw.is_array() || rw.size() != m) throw InvalidArgument("rewards must have M rows");
  std::vector<RewardDist> rewards;
  for (const json& row : rw) {
    auto part = rewards_from_json(row, k, "contextual reward rows");
    rewards.insert(rewards.end(), part.begin(), part.end());
  }
  return ContextualInstance(policy_from(j, "context", m), table_from(j, "behavior", m, k),
                            table_from(j, "target", m, k), std::move(rewards));
}

std::string dump_contextual(const ContextualInstance& instance) {
  json rewards = json::array();
  for (std::size_t x = 0; x < instance.num_contexts(); ++x) {
    json row = json::array();
    for (std::size_t a = 0; a < instance.num_actions(); ++a) row.push_back(reward_to_json(instance.reward(x, a)));
    rewards.push_back(row);
  }
  return json{{"M", instance.num_contexts()},
              {"K", instance.num_actions()},
              {"context", to_vec(instance.context_dist())},
              {"behavior", table_to_json(instance.behavior())},
              {"target", table_to_json(instance.target())},
              {"rewards", rewards}}
      .dump(2);
}

MdpInstance parse_mdp(const std::string& json_text) {
  const json j = parse_text(json_text);
  const auto n = field<std::size_t>(j, "N");
  const auto k = field<std::size_t>(j, "K");
  const auto h = field<std::size_t>(j, "H");
  auto kernel = field<std::vector<std::vector<std::vector<double>>>>(j, "transitions");
  if (kernel.size() != n) throw InvalidArgument("transitions must have N rows");
  std::vector<Policy> transitions;
  for (auto& per_state : kernel) {
    if (per_state.size() != k) throw InvalidArgument("transitions[x] must have K rows");
    for (auto& row : per_state) {
      if (row.size() != n) throw InvalidArgument("transition rows must have N entries");
      transitions.emplace_back(std::move(row));
    }
  }
  const json& rw = member(j, "rewards");
  if (!rw.is_array() || rw.size() != n) throw InvalidArgument("rewards must have N rows");
  std::vector<RewardDist> rewards;
  for (const json& row : rw) {
    auto part = rewards_from_json(row, k, "MDP reward rows");
    rewards.insert(rewards.end(), part.begin(), part.end());
  }
  return MdpInstance(n, k, h, policy_from(j, "start", n), std::move(transitions), std::move(rewards),
                     table_from(j, "behavior", n, k), table_from(j, "target", n, k));
}

std::string dump_mdp(const MdpInstance& mdp) {
  json kernel = json::array();
  json rewards = json::array();
  for (std::size_t x = 0; x < mdp.num_states(); ++x) {
    json per_state = json::array();
    json reward_row = json::array();
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      per_state.push_back(to_vec(mdp.transition(x, a)));
      reward_row.push_back(reward_to_json(mdp.reward(x, a)));
    }
    kernel.push_back(per_state);
    rewards.push_back(reward_row);
  }
  return json{{"N", mdp.num_states()},
              {"K", mdp.num_actions()},
              {"H", mdp.horizon()},
              {"start", to_vec(mdp.start())},
              {"transitions", kernel},
              {"rewards", rewards},
              {"behavior", table_to_json(mdp.behavior())},
              {"target", table_to_json(mdp.target())}}
      .dump(2);
}

McConfig parse_mc_config(const std::string& json_text) {
  const json j = parse_text(json_text);
  McConfig config;
  config.replications = field<std::size_t>(j, "replications");
  config.sample_sizes = field<std::vector<std::size_t>>(j, "sample_sizes");
  if (j.contains("seed")) config.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("threads")) config.threads = field<std::size_t>(j, "threads");
  if (j.contains("estimators")) {
    config.estimators.clear();
    for (const auto& name : field<std::vector<std::string>>(j, "estimators"))
      config.estimators.push_back(parse_estimator(name));
  }
  config.validate();
  return config;
}

std::string to_json(const AnalyticReport& r) {
  json j{{"n", r.n},
         {"v1", r.v1},
         {"v2", r.v2},
         {"p_missing", r.p_missing},
         {"v0n", r.v0n},
         {"v3n", r.v3n},
         {"bias_bn", r.bias_bn},
         {"lr_mse", r.lr_mse},
         {"reg_mse_upper", r.reg_mse_upper},
         {"reg_mse_lower_normal", nullptr},
         {"minimax_lower", r.minimax_lower},
         {"best_subset", r.best_subset},
         {"heuristic", r.heuristic}};
  if (r.reg_mse_lower_normal) j["reg_mse_lower_normal"] = *r.reg_mse_lower_normal;
  return j.dump(2);
}

void write_mc_csv(std::ostream& out, const McResult& result) {
  out << kMcCsvHeader << '\n';
  for (const McRow& row : result.rows) {
    out << row.experiment << ',' << row.instance_id << ',' << to_string(row.estimator) << ','
        << row.n << ',' << row.replications << ',' << num(row.mse) << ',' << num(row.nmse) << ','
        << num(row.stderr_mse) << ',' << row.seed << '\n';
  }
}

std::string to_json(const McResult& result) {
  json rows = json::array();
  for (const McRow& row : result.rows) {
    rows.push_back({{"experiment", row.experiment},
                    {"instance_id", row.instance_id},
                    {"estimator", to_string(row.estimator)},
                    {"n", row.n},
                    {"replications", row.replications},
                    {"mse", row.mse},
                    {"nmse", row.nmse},
                    {"stderr", row.stderr_mse},
                    {"seed", row.seed}});
  }
  return rows.dump(2);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << contents;
}

}  // namespace opeval::io

// opeval: command-line front end for the off-policy evaluation toolkit.
//
//   opeval analytic --instance inst.json --n 100 [--out report.json]
//   opeval simulate --instance inst.json --config mc.json --out mse.csv
//   opeval figure   --experiment comparison|kscaling --out dir/
//   opeval verify   [--suite all] [--out report.json]
//   opeval locks    --states 5 --p-star 0.5 --out lock.json
//
// Exit codes: 0 ok, 1 verify failure, 2 input error, 3 model error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "opeval/analytics.hpp"
#include "opeval/errors.hpp"
#include "opeval/experiments.hpp"
#include "opeval/io.hpp"
#include "opeval/montecarlo.hpp"
#include "opeval/reductions.hpp"
#include "opeval/verify.hpp"

#ifndef OPEVAL_VERSION
#define OPEVAL_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitModel = 3;

struct Manifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

fs::path manifest_path(const fs::path& output) {
  if (fs::is_directory(output)) return output / "manifest.json";
  return fs::path(output.string() + ".manifest.json");
}

void write_manifest(const fs::path& output, const Manifest& m) {
  ordered_json j = {{"subcommand", m.subcommand}, {"inputs", m.inputs},  {"outputs", m.outputs},
                    {"seed", m.seed},             {"threads", m.threads}, {"version", OPEVAL_VERSION}};
  opeval::io::write_file(manifest_path(output), j.dump(2) + "\n");
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    opeval::io::write_file(out, text);
  }
}

// Instance files hold a bandit, a contextual bandit ("M") or an MDP ("N");
// the latter two are reduced to a bandit over composite actions.
opeval::BanditInstance load_instance(const std::string& path) {
  const std::string text = opeval::io::read_file(path);
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw opeval::InvalidArgument(path + ": malformed JSON: " + e.what());
  }
  if (j.is_object() && j.contains("N")) return opeval::mdp_to_bandit(opeval::io::parse_mdp(text)).bandit;
  if (j.is_object() && j.contains("M"))
    return opeval::contextual_to_bandit(opeval::io::parse_contextual(text));
  return opeval::io::parse_bandit(text);
}

struct Options {
  std::string instance;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::size_t n = 0;
  std::optional<double> rmax;
  std::string experiment;
  std::optional<std::size_t> replications;
  std::vector<std::size_t> ks;
  std::string suite = "all";
  std::size_t states = 0;
  double p_star = 0.5;
  std::optional<std::size_t> horizon;
};

int cmd_analytic(const Options& o) {
  const opeval::BanditInstance inst = load_instance(o.instance);
  inst.require_identifiable();
  const opeval::AnalyticReport report = opeval::analytic_report(inst, o.n, o.rmax);
  emit(o.out, opeval::io::to_json(report));
  if (!o.out.empty()) write_manifest(o.out, {"analytic", {o.instance}, {o.out}, 0, 1});
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const opeval::BanditInstance inst = load_instance(o.instance);
  opeval::McConfig cfg = opeval::io::parse_mc_config(opeval::io::read_file(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  const opeval::McResult result =
      opeval::run_mc(inst, cfg, "simulate", fs::path(o.instance).stem().string());
  std::ostringstream csv;
  opeval::io::write_mc_csv(csv, result);
  emit(o.out, csv.str());
  if (!o.out.empty())
    write_manifest(o.out, {"simulate", {o.instance, o.config}, {o.out}, cfg.seed, cfg.threads});
  return kExitOk;
}

int cmd_figure(const Options& o) {
  const std::uint64_t seed = o.seed.value_or(opeval::McConfig{}.seed);
  const std::size_t threads = o.threads.value_or(0);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  opeval::ExperimentBundle bundle;
  std::string name;
  if (o.experiment == "comparison") {
    opeval::ComparisonOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    if (o.replications) opt.replications = *o.replications;
    bundle = opeval::experiment_estimator_comparison(opt);
    name = "fig1_left";
  } else if (o.experiment == "kscaling") {
    opeval::KScalingOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    if (o.replications) opt.replications = *o.replications;
    if (!o.ks.empty()) opt.num_actions = o.ks;
    bundle = opeval::experiment_k_scaling(opt);
    name = "fig1_right";
  } else {
    throw opeval::InvalidArgument("unknown experiment '" + o.experiment + "'");
  }

  std::ostringstream csv;
  opeval::io::write_mc_csv(csv, bundle.result);
  const fs::path csv_path = dir / (name + ".csv");
  opeval::io::write_file(csv_path, csv.str());

  ordered_json refs = ordered_json::array();
  for (const auto& inst : bundle.instances)
    refs.push_back({{"instance_id", inst.id}, {"v1", inst.v1}, {"v2", inst.v2}});
  const fs::path ref_path = dir / (name + "_reference.json");
  opeval::io::write_file(ref_path, refs.dump(2) + "\n");

  write_manifest(dir, {"figure", {}, {csv_path.string(), ref_path.string()}, seed, threads});
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const std::uint64_t seed = o.seed.value_or(1);
  const auto results = opeval::run_verify(o.suite, seed);
  const std::string report = opeval::verify_report_json(results);
  emit(o.out, report);
  if (!o.out.empty()) write_manifest(o.out, {"verify", {}, {o.out}, seed, 1});
  for (const auto& r : results) {
    if (r.status == opeval::SuiteStatus::kFail) return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_locks(const Options& o) {
  const opeval::MdpInstance lock = opeval::combination_lock(o.states, o.p_star, o.rmax.value_or(1.0), o.horizon);
  emit(o.out, opeval::io::dump_mdp(lock));
  if (!o.out.empty()) write_manifest(o.out, {"locks", {}, {o.out}, 0, 1});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-policy evaluation: estimators, exact oracles and Monte Carlo experiments"};
  app.set_version_flag("--version", std::string(OPEVAL_VERSION));
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (stdout when omitted)");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  };

  auto* analytic = app.add_subcommand("analytic", "Closed-form MSE terms and lower bound");
  analytic->add_option("--instance", o.instance, "Instance JSON")->required();
  analytic->add_option("--n", o.n, "Sample size")->required()->check(CLI::PositiveNumber);
  analytic->add_option("--rmax", o.rmax, "Mean-reward cap for the lower bound");
  add_common(analytic);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo MSE of the estimators");
  simulate->add_option("--instance", o.instance, "Instance JSON")->required();
  simulate->add_option("--config", o.config, "Monte Carlo config JSON")->required();
  add_common(simulate);

  auto* figure = app.add_subcommand("figure", "Run a canned experiment and write its CSV");
  figure->add_option("--experiment", o.experiment, "comparison or kscaling")->required();
  figure->add_option("--replications", o.replications, "Replications per sample size");
  figure->add_option("--ks", o.ks, "Action counts for kscaling")->delimiter(',');
  add_common(figure);

  auto* verify = app.add_subcommand("verify", "Run oracle and inequality sweeps");
  verify->add_option("--suite", o.suite, "Suite id or 'all'");
  add_common(verify);

  auto* locks = app.add_subcommand("locks", "Write a combination-lock MDP instance");
  locks->add_option("--states", o.states, "Number of states")->required()->check(CLI::Range(2, 64));
  locks->add_option("--p-star", o.p_star, "Behavior probability of the reset action")
      ->check(CLI::Range(0.0, 1.0));
  locks->add_option("--rmax", o.rmax, "Reward paid on opening the lock");
  locks->add_option("--horizon", o.horizon, "Horizon (default states - 1)");
  add_common(locks);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (analytic->parsed()) return cmd_analytic(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (figure->parsed()) return cmd_figure(o);
    if (verify->parsed()) return cmd_verify(o);
    if (locks->parsed()) return cmd_locks(o);
  } catch (const opeval::UnidentifiableError& e) {
    std::cerr << "opeval: model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const opeval::ZeroPropensitySample& e) {
    std::cerr << "opeval: model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const opeval::BudgetExceeded& e) {
    std::cerr << "opeval: model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const opeval::InvalidArgument& e) {
    std::cerr << "opeval: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "opeval: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

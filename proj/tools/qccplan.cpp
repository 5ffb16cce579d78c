// qccplan: provisioning plans, parameter sweeps and model comparisons.
//
// Exit codes: 0 success, 2 infeasible, 1 usage or I/O error. QCC_LOG_LEVEL
// (trace, debug, info, warn, error, off) sets the stderr log level.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "qcc/benders.hpp"
#include "qcc/experiments.hpp"
#include "qcc/purification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("qccplan");
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::info);
  if (const char* level = std::getenv("QCC_LOG_LEVEL")) {
    logger->set_level(spdlog::level::from_str(level));
  }
  spdlog::set_default_logger(logger);
}

// Writes `text` to `path`, or stdout for "-".
void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qcc::InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw qcc::InputError("write to '" + path + "' failed");
  spdlog::info("wrote {}", path);
}

std::vector<qcc::PlanMode> parse_modes(const std::string& list) {
  std::vector<qcc::PlanMode> modes;
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    const auto mode = qcc::parse_plan_mode(name);
    if (!mode) throw CLI::ValidationError("--modes", "unknown mode '" + name + "'");
    modes.push_back(*mode);
  }
  if (modes.empty()) throw CLI::ValidationError("--modes", "no modes given");
  return modes;
}

bool any_infeasible(const std::vector<qcc::ModeOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (o.status == "infeasible") return true;
  }
  return false;
}

struct PlanArgs {
  std::string topology, costs, requests, scenarios, mode = "sp", out = "-", trajectory;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  int num_scenarios = 4;
  bool disaggregate = false;
};

int run_plan(const PlanArgs& a) {
  const auto mode = qcc::parse_plan_mode(a.mode);
  if (!mode) throw CLI::ValidationError("--mode", "unknown mode '" + a.mode + "'");
  const auto instance = qcc::parse_instance(qcc::read_file(a.topology), qcc::read_file(a.costs),
                                            qcc::read_file(a.requests));
  const auto space = a.scenarios.empty()
                         ? qcc::preset_scenarios(instance, a.num_scenarios, a.seed)
                         : qcc::parse_scenarios(qcc::read_file(a.scenarios), instance);
  spdlog::info("{} requests, {} links, {} scenarios", instance.requests.size(),
               instance.topology.num_links(), space.size());

  qcc::BendersConfig config;
  config.epsilon_pairs = config.epsilon_qubits = a.epsilon;
  config.disaggregate_cuts = a.disaggregate;
  config.validate();

  qcc::DecomposedReport report;
  const auto outcome = qcc::run_mode(instance, space, *mode, config, std::nullopt, &report);

  std::ostringstream csv;
  csv << "# " << qcc::kCsvSchema << '\n' << qcc::csv_header() << '\n'
      << qcc::csv_row("plan", 0, outcome) << '\n';
  write_output(a.out, csv.str());
  if (*mode == qcc::PlanMode::kBenders && outcome.ok && !a.trajectory.empty()) {
    std::ostringstream t;
    qcc::write_trajectory(report, t);
    write_output(a.trajectory, t.str());
  }
  if (outcome.status == "infeasible") {
    spdlog::warn("plan is infeasible");
    return kExitInfeasible;
  }
  if (!outcome.ok) {
    spdlog::error("solve failed: {}", outcome.status);
    return kExitError;
  }
  spdlog::info("total cost {}", outcome.cost.total);
  return kExitOk;
}

struct SweepArgs {
  std::string preset = "nsfnet", var, range, modes = "sp", out = "-";
  std::vector<std::string> fixed;
  int requests = 1;
  int num_scenarios = 2;
  std::uint64_t seed = 1;
  double epsilon = 0.05;
};

int run_sweep(const SweepArgs& a) {
  qcc::ExperimentSpec spec;
  spec.preset = a.preset;
  const auto variable = qcc::parse_sweep_variable(a.var);
  if (!variable) throw CLI::ValidationError("--var", "unknown sweep variable '" + a.var + "'");
  spec.variable = *variable;
  spec.range = qcc::parse_range(a.range);
  for (const auto& item : a.fixed) {
    const auto eq = item.find('=');
    const auto name = item.substr(0, eq);
    const auto v = qcc::parse_sweep_variable(name);
    if (eq == std::string::npos || !v) {
      throw CLI::ValidationError("--set", "expected VAR=VALUE, got '" + item + "'");
    }
    const auto values = qcc::parse_range(item.substr(eq + 1)).values();
    if (values.size() != 1) throw CLI::ValidationError("--set", "one value per variable");
    spec.fixed.emplace_back(*v, values.front());
  }
  spec.modes = parse_modes(a.modes);
  spec.requests = a.requests;
  spec.num_scenarios = a.num_scenarios;
  spec.seed = a.seed;
  spec.benders.epsilon_pairs = spec.benders.epsilon_qubits = a.epsilon;
  std::ostringstream csv;
  const auto outcomes = qcc::sweep(spec, csv);
  write_output(a.out, csv.str());
  if (any_infeasible(outcomes)) {
    spdlog::warn("some sweep points are infeasible");
    return kExitInfeasible;
  }
  return kExitOk;
}

struct CompareArgs {
  std::string preset = "nsfnet", out = "-";
  int requests = 3;
  int num_scenarios = 4;
  std::uint64_t seed = 1;
};

int run_compare(const CompareArgs& a) {
  qcc::Instance instance;
  if (a.preset == "nsfnet") {
    instance = qcc::run_preset_defaults(a.requests);
  } else if (a.preset == "chain") {
    instance = qcc::saturation_chain();
  } else {
    throw CLI::ValidationError("--preset", "unknown preset '" + a.preset + "'");
  }
  const auto space = qcc::preset_scenarios(instance, a.num_scenarios, a.seed);
  const auto comparison = qcc::compare_models(instance, space);
  std::ostringstream csv;
  qcc::write_comparison(comparison, csv);
  write_output(a.out, csv.str());
  std::vector<qcc::ModeOutcome> outcomes;
  for (const auto& row : comparison.rows) outcomes.push_back(row.outcome);
  if (any_infeasible(outcomes)) return kExitInfeasible;
  if (!comparison.ordering_holds) spdlog::warn("det <= sp <= ev ordering violated");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Quantum cloud provisioning planner"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Solve one instance");
  plan_cmd->add_option("--topology", plan.topology, "Topology file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--costs", plan.costs, "Cost file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--requests", plan.requests, "Requests and providers file")
      ->required()
      ->check(CLI::ExistingFile);
  plan_cmd->add_option("--scenarios", plan.scenarios,
                       "Scenario file; sampled from the preset ranges when omitted")
      ->check(CLI::ExistingFile);
  plan_cmd->add_option("--mode", plan.mode, "sp, ev, det or benders")->capture_default_str();
  plan_cmd->add_option("--epsilon", plan.epsilon, "Benders convergence gap")->capture_default_str();
  plan_cmd->add_option("--seed", plan.seed, "Seed for sampled scenarios")->capture_default_str();
  plan_cmd->add_option("--num-scenarios", plan.num_scenarios, "Sampled scenario count")
      ->capture_default_str();
  plan_cmd->add_flag("--disaggregate-cuts", plan.disaggregate,
                     "Benders: one cut per block instead of one per problem");
  plan_cmd->add_option("--trajectory", plan.trajectory, "Benders bound trajectory CSV");
  plan_cmd->add_option("--out", plan.out, "Report CSV, - for stdout")->capture_default_str();

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter over a preset");
  sweep_cmd->add_option("--preset", sw.preset, "nsfnet or chain")->capture_default_str();
  sweep_cmd->add_option("--var", sw.var,
                        "reserved-pairs, fidelity-demand, reservation-price, penalty-price, "
                        "waiting-time or request-count")
      ->required();
  sweep_cmd->add_option("--range", sw.range, "A:B:STEP")->required();
  sweep_cmd->add_option("--set", sw.fixed,
                        "Hold another variable at one value, VAR=VALUE (repeatable)");
  sweep_cmd->add_option("--modes", sw.modes, "Comma-separated modes")->capture_default_str();
  sweep_cmd->add_option("--requests", sw.requests, "Preset request count")->capture_default_str();
  sweep_cmd->add_option("--num-scenarios", sw.num_scenarios, "Sampled scenario count")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed, "Scenario seed")->capture_default_str();
  sweep_cmd->add_option("--epsilon", sw.epsilon, "Benders convergence gap")->capture_default_str();
  sweep_cmd->add_option("--out", sw.out, "Report CSV, - for stdout")->capture_default_str();

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare sp, ev and det models");
  compare_cmd->add_option("--preset", cmp.preset, "nsfnet or chain")->capture_default_str();
  compare_cmd->add_option("--requests", cmp.requests, "Preset request count")->capture_default_str();
  compare_cmd->add_option("--num-scenarios", cmp.num_scenarios, "Sampled scenario count")
      ->capture_default_str();
  compare_cmd->add_option("--seed", cmp.seed, "Scenario seed")->capture_default_str();
  compare_cmd->add_option("--out", cmp.out, "Report CSV, - for stdout")->capture_default_str();

  double base = 0.0, target = 0.0;
  int max_pairs = 60;
  auto* purify_cmd = app.add_subcommand("purify", "Print the pairs needed to reach a fidelity");
  purify_cmd->add_option("--base", base, "Base fidelity")->required();
  purify_cmd->add_option("--target", target, "Target fidelity")->required();
  purify_cmd->add_option("--max-pairs", max_pairs, "Pair budget")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*plan_cmd) return run_plan(plan);
    if (*sweep_cmd) return run_sweep(sw);
    if (*compare_cmd) return run_compare(cmp);
    if (*purify_cmd) {
      const auto k = qcc::min_pairs_for_target(base, target, max_pairs);
      if (!k) {
        std::cout << "unreachable\n";
        return kExitInfeasible;
      }
      std::cout << *k << '\n';
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  } catch (const qcc::InfeasibleModelError& e) {
    spdlog::error("{}", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}

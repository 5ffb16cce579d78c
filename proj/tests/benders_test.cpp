#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qcc/benders.hpp"
#include "qcc/experiments.hpp"
#include "support/tiny_instances.hpp"

using namespace qcc;

namespace {

void check_bounds(const BendersState& state) {
  REQUIRE(!state.history.empty());
  for (size_t i = 1; i < state.history.size(); ++i) {
    CHECK(state.history[i].lower >= state.history[i - 1].lower - 1e-9);
    CHECK(state.history[i].upper_best <= state.history[i - 1].upper_best + 1e-9);
  }
  CHECK(state.converged);
}

// Every cut must under-estimate its block's recourse at a known feasible
// plan, here the direct optimum.
template <typename Decomposition>
void check_cuts(const Decomposition& d, const BendersState& state, const PlanSolution& plan) {
  const auto point = d.complicating_of(plan);
  const auto recourse = d.block_recourse_of(plan);
  for (const auto& cut : state.cuts) {
    CAPTURE(cut.iteration);
    CAPTURE(cut.block);
    const double bound = cut.block < 0 ? d.recourse_cost_of(plan) : recourse.at(cut.block);
    CHECK(cut.evaluate(point) <= bound + 1e-6);
  }
}

void check_against_direct(const Instance& inst, const ScenarioSpace& space,
                          const BendersConfig& config = {}) {
  DecomposedReport report;
  const auto plan = run_decomposed(inst, space, config, &report);
  ModelOptions fixed;
  fixed.fixed_routes = report.routes;
  const auto direct = solve_direct(inst, space, fixed);
  REQUIRE(direct.status == lp::SolveStatus::kOptimal);
  CHECK(std::abs(report.total - direct.objective) <= 0.1);
  CHECK(std::abs(plan.cost.total - report.total) < 1e-9);
  check_bounds(report.pairs);
  check_bounds(report.qubits);
  check_cuts(PairDecomposition(inst, space, report.routes), report.pairs, direct.plan);
  check_cuts(QubitDecomposition(inst, space), report.qubits, direct.plan);
}

}  // namespace

TEST_CASE("decomposition matches the direct solve on tiny instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    const auto tc = testing::random_tiny_case(seed);
    check_against_direct(tc.instance, tc.space);
  }
}

TEST_CASE("decomposition matches the direct solve on the preset") {
  const auto inst = run_preset_defaults(2);
  check_against_direct(inst, preset_scenarios(inst, 4, 7));
}

TEST_CASE("decomposition converges on the medium preset") {
  const auto inst = run_preset_defaults(3);
  // A single aggregated cut tails for a long time here.
  BendersConfig config;
  config.disaggregate_cuts = true;
  check_against_direct(inst, preset_scenarios(inst, 4, 1), config);
}

TEST_CASE("cheap reservations leave on-demand pairs unused") {
  auto inst = run_preset_defaults(1);
  const auto space = preset_scenarios(inst, 2, 3);
  DecomposedReport report;
  const auto plan = run_decomposed(inst, space, {}, &report);
  for (const auto& per_scenario : plan.pairs_ondemand) {
    for (const auto& row : per_scenario) {
      for (int y : row) CHECK(y == 0);
    }
  }
}

TEST_CASE("one scenario yields a single on-demand subproblem") {
  const auto inst = run_preset_defaults(1);
  const auto space = preset_scenarios(inst, 1, 1);
  REQUIRE(space.size() == 1);
  DecomposedReport report;
  run_decomposed(inst, space, {}, &report);
  // One dual vector per iteration, each summed over S1 and the only S2.
  CHECK(report.pairs.duals.size() == report.pairs.history.size());
  CHECK(report.pairs.converged);
  CHECK(report.qubits.converged);
}

TEST_CASE("waits longer than execution leave no overwait") {
  const auto inst = run_preset_defaults(2);
  // Preset execution times are under 0.01 s.
  const auto space = build_scenario_space(
      {{{{0.8}, {12, 18}, {0.05}, {}, {}, {}}}, {{{0.9}, {10}, {0.05}, {}, {}, {}}}});
  PlanSolution plan = PlanSolution::zeros(inst, space.size());
  const auto state = QubitDecomposition(inst, space).run({}, plan);
  CHECK(state.converged);
  for (const auto& row : plan.overwait) {
    for (double y : row) CHECK(y == 0.0);
  }
}

TEST_CASE("zero qubit demand converges at once") {
  auto inst = run_preset_defaults(1);
  for (auto& p : inst.providers) {
    for (auto& m : p.machines) m.execution_time.clear();
  }
  const auto space = build_scenario_space({{{{0.8}, {0}, {0.001}, {}, {}, {}}}});
  PlanSolution plan = PlanSolution::zeros(inst, space.size());
  const auto state = QubitDecomposition(inst, space).run({}, plan);
  CHECK(state.converged);
  CHECK(state.iteration == 1);
  CHECK(state.upper_bound_best == doctest::Approx(0.0));
}

TEST_CASE("trajectory lists both problems") {
  const auto tc = testing::random_tiny_case(3);
  DecomposedReport report;
  run_decomposed(tc.instance, tc.space, {}, &report);
  std::ostringstream out;
  write_trajectory(report, out);
  const auto text = out.str();
  CHECK(text.rfind("problem,iteration,lower,upper,upper_best,gap\n", 0) == 0);
  CHECK(text.find("\npairs,1,") != std::string::npos);
  CHECK(text.find("\nqubits,1,") != std::string::npos);
}

TEST_CASE("invalid configuration is rejected") {
  BendersConfig config;
  config.epsilon_pairs = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.max_iterations = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

#include <cmath>

#include "doctest.h"
#include "qcc/formulation.hpp"
#include "support/de_oracle.hpp"
#include "support/tiny_instances.hpp"

using namespace qcc;

namespace {

// 1 -> 2 -> 3 with one request and one machine; scenarios differ in the
// first circuit's fidelity demand.
Instance path_instance(double second_fidelity = 0.55) {
  Instance inst;
  for (int n = 1; n <= 3; ++n) inst.topology.add_node({std::to_string(n), 5.0, 151.0});
  inst.topology.add_arc(0, 1, 0.9, 0.6, 9, 60);
  inst.topology.add_arc(1, 2, second_fidelity, 0.6, 9, 60);
  inst.costs.set_pair_cost("*", "*", {10.0, 1.0, 200.0});
  inst.costs.set_qubit_cost("*", "*", {1.68, 0.1, 7.0, 10.0});
  Machine m{"m1", 30, {}};
  m.execution_time[{"r1", "qft"}] = 0.005;
  inst.providers.push_back({"p1", {m}});
  inst.requests.push_back({"r1", 0, 2, {"qft"}});
  inst.validate();
  return inst;
}

ScenarioSpace two_fidelities(double a, double b) {
  return build_scenario_space({{{{a, b}, {12}, {0.004}, {}, {}, {}}}});
}

}  // namespace

TEST_CASE("path instance has the expected variable index sets") {
  const auto inst = path_instance();
  const auto model = build_model(inst, two_fidelities(0.7, 0.8));
  const auto& v = model.vars;
  CHECK(v.count(Symbol::kRoute) == 2);
  CHECK(v.count(Symbol::kPairsReserved) == 2);
  CHECK(v.count(Symbol::kPairsUtilized) == 4);
  CHECK(v.count(Symbol::kPairsOndemand) == 4);
  CHECK(v.count(Symbol::kQubitsReserved) == 1);
  CHECK(v.count(Symbol::kQubitsUtilized) == 2);
  CHECK(v.count(Symbol::kQubitsOndemand) == 2);
  CHECK(v.count(Symbol::kOverwait) == 2);
  int decision = 0;
  for (auto s : {Symbol::kRoute, Symbol::kPairsReserved, Symbol::kPairsUtilized,
                 Symbol::kPairsOndemand, Symbol::kQubitsReserved, Symbol::kQubitsUtilized,
                 Symbol::kQubitsOndemand, Symbol::kOverwait}) {
    decision += v.count(s);
  }
  CHECK(decision == 19);
  // One placement binary for the single machine.
  CHECK(v.count(Symbol::kAssignment) == 1);
}

TEST_CASE("fidelity row carries the purification pair count") {
  const auto inst = path_instance();
  CHECK(required_pairs(inst, 1, 0.80) == 7);
  const auto model = build_model(inst, two_fidelities(0.7, 0.8));
  CHECK(model.required_pairs[1][0][1] == 7);
  const int w = model.vars.route[0][1];
  bool found = false;
  for (const auto& row : model.program.constraints()) {
    if (row.name != "fid[r1,2->3,s1]") continue;
    found = true;
    for (const auto& t : row.terms) {
      if (t.var == w) CHECK(t.coef == -7.0);
    }
  }
  CHECK(found);
}

TEST_CASE("expected-value mode uses the mean demand") {
  const auto space = two_fidelities(0.7, 0.9);
  const auto ev = effective_space(space, ModelMode::kExpectedValue, 0);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].fidelity[0][0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ev[0].probability == 1.0);
}

TEST_CASE("only path is routed and cost round-trips") {
  const auto inst = path_instance();
  const auto space = two_fidelities(0.7, 0.8);
  const auto direct = solve_direct(inst, space);
  REQUIRE(direct.status == lp::SolveStatus::kOptimal);
  CHECK(direct.plan.route[0] == std::vector<int>{1, 1});
  CHECK(direct.plan.path(inst, 0) == std::vector<int>{0, 1});
  CHECK(direct.plan.cost.total == doctest::Approx(direct.objective).epsilon(1e-9));
  CHECK(std::abs(evaluate_cost(direct.plan, inst, space).total - direct.objective) < 1e-5);
  // 2 -> 3 needs 7 pairs in the demanding scenario.
  CHECK(direct.plan.pairs_utilized[1][0][1] + direct.plan.pairs_ondemand[1][0][1] >= 7);
}

TEST_CASE("zero qubit demand and no late start leave qubit recourse empty") {
  auto inst = path_instance();
  inst.providers[0].machines[0].execution_time.clear();
  const auto space = build_scenario_space({{{{0.7, 0.8}, {0}, {0.004}, {}, {}, {}}}});
  const auto direct = solve_direct(inst, space);
  REQUIRE(direct.status == lp::SolveStatus::kOptimal);
  for (int k = 0; k < space.size(); ++k) {
    CHECK(direct.plan.qubits_utilized[k][0] == 0);
    CHECK(direct.plan.qubits_ondemand[k][0] == 0);
    CHECK(direct.plan.overwait[k][0] == 0.0);
  }
  CHECK(direct.plan.qubits_reserved[0] == 0);
}

TEST_CASE("unreachable fidelity reports the blocking link") {
  const auto inst = path_instance(0.5);
  try {
    build_model(inst, two_fidelities(0.7, 0.8));
    FAIL("expected InfeasibleModelError");
  } catch (const InfeasibleModelError& e) {
    CHECK(e.request() == "r1");
    REQUIRE(e.blocked_links().size() == 1);
    CHECK(e.blocked_links()[0] == "2->3");
  }
}

TEST_CASE("direct solve matches exhaustive enumeration on tiny instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    const auto tc = testing::random_tiny_case(seed);
    const double oracle = testing::brute_force_total(tc.instance, tc.space);
    if (oracle == testing::kNoSolution) {
      // Either a blocked link up front or shared capacity running out.
      try {
        CHECK(solve_direct(tc.instance, tc.space).status == lp::SolveStatus::kInfeasible);
      } catch (const InfeasibleModelError&) {
      }
      continue;
    }
    const auto direct = solve_direct(tc.instance, tc.space);
    REQUIRE(direct.status == lp::SolveStatus::kOptimal);
    CHECK(direct.objective == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(direct.plan.cost.total - direct.objective) < 1e-5);
  }
}

TEST_CASE("freezing the stochastic optimum reproduces its cost") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    CAPTURE(seed);
    const auto tc = testing::random_tiny_case(seed);
    DirectResult direct;
    try {
      direct = solve_direct(tc.instance, tc.space);
    } catch (const InfeasibleModelError&) {
      continue;
    }
    if (direct.status != lp::SolveStatus::kOptimal) continue;
    const auto eval = evaluate_first_stage_against(direct.plan, tc.instance, tc.space);
    REQUIRE(eval.feasible);
    CHECK(std::abs(eval.total - direct.objective) < 1e-5);
  }
}

TEST_CASE("expected-value first stage never beats the stochastic optimum") {
  for (std::uint64_t seed = 40; seed < 48; ++seed) {
    CAPTURE(seed);
    const auto tc = testing::random_tiny_case(seed);
    DirectResult sp, ev;
    try {
      sp = solve_direct(tc.instance, tc.space);
      ModelOptions opts;
      opts.mode = ModelMode::kExpectedValue;
      ev = solve_direct(tc.instance, tc.space, opts);
    } catch (const InfeasibleModelError&) {
      continue;
    }
    if (sp.status != lp::SolveStatus::kOptimal || ev.status != lp::SolveStatus::kOptimal) continue;
    const auto eval = evaluate_first_stage_against(ev.plan, tc.instance, tc.space);
    if (!eval.feasible) continue;
    CHECK(eval.total >= sp.objective - 1e-5);
  }
}

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qcc/benders.hpp"
#include "qcc/experiments.hpp"
#include "qcc/formulation.hpp"
#include "qcc/lp/solver.hpp"
#include "qcc/purification.hpp"
#include "qcc/qft_cost.hpp"
#include "support/csv_report.hpp"
#include "support/de_oracle.hpp"
#include "support/milp_oracle.hpp"
#include "support/tiny_instances.hpp"
#include "support/trends.hpp"

using namespace qcc;
using testing::Check;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kChainTolerance = 5e-4;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kOracleRelTolerance = 1e-9;
constexpr double kBendersTolerance = 0.1;
constexpr double kCutSlack = 1e-6;
constexpr double kBoundSlack = 1e-9;
constexpr double kFastLimit = 1e-3;       // seconds
constexpr double kMilpLimit = 30.0;
constexpr double kTinyLimit = 60.0;
constexpr double kSuiteLimit = 180.0;
constexpr int kTinyCount = 20;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool close(double a, double b) {
  return std::abs(a - b) <= kOracleRelTolerance * std::max(1.0, std::abs(b));
}

void time_limit(Check& c, Clock::time_point start, double limit) {
  const double t = seconds_since(start);
  if (t > limit) c.fail("took " + fmt(t) + " s, limit " + fmt(limit) + " s");
}

Check purification_chain() {
  Check c;
  const auto start = Clock::now();
  const double f = purify_chain(0.79, 4);
  time_limit(c, start, kFastLimit);
  if (std::abs(f - 0.995) > kChainTolerance) c.fail("purify_chain(0.79, 4) = " + fmt(f));
  return c;
}

Check minimum_pairs() {
  Check c;
  const auto start = Clock::now();
  const auto k = min_pairs_for_target(0.55, 0.80, 60);
  time_limit(c, start, kFastLimit);
  if (!k || *k != 7) c.fail("min_pairs_for_target(0.55, 0.80) = " + (k ? std::to_string(*k) : "none"));
  return c;
}

Check purification_identities() {
  Check c;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      const double a = i / 10.0, b = j / 10.0;
      if (std::abs(purify_pair(0.5, b) - b) > kIdentityTolerance) {
        c.fail("purify_pair(0.5, " + fmt(b) + ") != " + fmt(b));
      }
      if (std::abs(purify_pair(a, b) - purify_pair(b, a)) > kIdentityTolerance) {
        c.fail("asymmetric at " + fmt(a) + ", " + fmt(b));
      }
    }
  }
  return c;
}

Check qft_counts() {
  Check c;
  if (qubits_for_number(16383) != 14) c.fail("qubits_for_number(16383) != 14");
  // Constructed circuit: H per qubit, one rotation per later qubit, l/2 swaps.
  int h = 0, rot = 0, swaps = 0;
  const int l = 4;
  for (int i = 0; i < l; ++i) {
    ++h;
    for (int j = i + 1; j < l; ++j) ++rot;
  }
  for (int i = 0; i < l - 1 - i; ++i) ++swaps;
  const auto p = qft_gate_counts(l);
  if (p.hadamard_count != h || p.controlled_rotation_count != rot || p.swap_count != swaps ||
      h != 4 || rot != 6 || swaps != 2) {
    c.fail("qft_gate_counts(4) = (" + std::to_string(p.hadamard_count) + ", " +
           std::to_string(p.controlled_rotation_count) + ", " + std::to_string(p.swap_count) + ")");
  }
  return c;
}

Check milp_lattice() {
  Check c;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  lp::MilpOptions opts;
  opts.relative_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing::random_integer_program(rng, 6, 5, 8);
    const auto oracle = testing::enumerate_lattice(p);
    const auto s = lp::solve_milp(p, opts);
    const auto tag = " on program " + std::to_string(trial);
    if (!oracle) {
      if (s.status != lp::SolveStatus::kInfeasible) c.fail("missed infeasibility" + tag);
    } else if (!s.optimal() || s.objective != *oracle) {
      c.fail("objective " + fmt(s.objective) + " vs " + fmt(*oracle) + tag);
    }
  }
  time_limit(c, start, kMilpLimit);
  return c;
}

Check direct_vs_brute_force() {
  Check c;
  const auto start = Clock::now();
  for (std::uint64_t seed = 1; seed <= kTinyCount; ++seed) {
    const auto tc = testing::random_tiny_case(seed);
    const double oracle = testing::brute_force_total(tc.instance, tc.space);
    const auto tag = " on seed " + std::to_string(seed);
    lp::SolveStatus status;
    double objective = 0.0;
    try {
      const auto direct = solve_direct(tc.instance, tc.space);
      status = direct.status;
      objective = direct.objective;
    } catch (const InfeasibleModelError&) {
      status = lp::SolveStatus::kInfeasible;
    }
    if (oracle == testing::kNoSolution) {
      if (status != lp::SolveStatus::kInfeasible) c.fail("oracle infeasible, solver not" + tag);
    } else if (status != lp::SolveStatus::kOptimal || !close(objective, oracle)) {
      c.fail("direct " + fmt(objective) + " vs " + fmt(oracle) + tag);
    }
  }
  time_limit(c, start, kTinyLimit);
  return c;
}

void check_history(Check& c, const BendersState& state, const std::string& tag) {
  if (!state.converged) c.fail("not converged" + tag);
  for (size_t i = 1; i < state.history.size(); ++i) {
    if (state.history[i].lower < state.history[i - 1].lower - kBoundSlack) {
      c.fail("lower bound drops" + tag);
    }
    if (state.history[i].upper_best > state.history[i - 1].upper_best + kBoundSlack) {
      c.fail("best upper bound rises" + tag);
    }
  }
}

template <typename Decomposition>
void check_cuts(Check& c, const Decomposition& d, const BendersState& state,
                const PlanSolution& plan, const std::string& tag) {
  const auto point = d.complicating_of(plan);
  const auto recourse = d.block_recourse_of(plan);
  for (const auto& cut : state.cuts) {
    const double bound = cut.block < 0 ? d.recourse_cost_of(plan) : recourse.at(cut.block);
    if (cut.evaluate(point) > bound + kCutSlack) {
      c.fail("cut " + std::to_string(cut.iteration) + " overestimates" + tag);
    }
  }
}

Check benders_vs_direct() {
  Check c;
  const auto start = Clock::now();
  for (std::uint64_t seed = 1; seed <= kTinyCount; ++seed) {
    const auto tc = testing::random_tiny_case(seed);
    const auto tag = " on seed " + std::to_string(seed);
    bool direct_infeasible = false;
    DirectResult direct;
    try {
      direct = solve_direct(tc.instance, tc.space);
      direct_infeasible = direct.status == lp::SolveStatus::kInfeasible;
    } catch (const InfeasibleModelError&) {
      direct_infeasible = true;
    }
    DecomposedReport report;
    try {
      run_decomposed(tc.instance, tc.space, {}, &report);
    } catch (const std::runtime_error& e) {
      if (!direct_infeasible) c.fail(std::string("decomposition failed: ") + e.what() + tag);
      continue;
    }
    if (direct_infeasible) {
      c.fail("decomposition solved an infeasible instance" + tag);
      continue;
    }
    if (std::abs(report.total - direct.objective) > kBendersTolerance) {
      c.fail("total " + fmt(report.total) + " vs direct " + fmt(direct.objective) + tag);
    }
    check_history(c, report.pairs, " (pairs)" + tag);
    check_history(c, report.qubits, " (qubits)" + tag);
    // Cuts are checked at a direct optimum on the decomposition's routes.
    ModelOptions fixed;
    fixed.fixed_routes = report.routes;
    const auto on_routes = solve_direct(tc.instance, tc.space, fixed);
    if (on_routes.status != lp::SolveStatus::kOptimal) {
      c.fail("direct solve on fixed routes failed" + tag);
      continue;
    }
    check_cuts(c, PairDecomposition(tc.instance, tc.space, report.routes), report.pairs,
               on_routes.plan, " (pairs)" + tag);
    check_cuts(c, QubitDecomposition(tc.instance, tc.space), report.qubits, on_routes.plan,
               " (qubits)" + tag);
  }
  time_limit(c, start, kTinyLimit);
  return c;
}

Check trends() {
  Check c;
  const auto reserved =
      testing::reserved_pair_shape(testing::read_report(testing::run_sweep(testing::reserved_pair_spec())));
  if (!reserved.ok) c.fail("reserved-pair sweep: " + reserved.detail);
  const auto saturation =
      testing::saturation_shape(testing::read_report(testing::run_sweep(testing::saturation_spec())));
  if (!saturation.ok) c.fail("saturation sweep: " + saturation.detail);
  return c;
}

// Every seeded sweep the suite uses, concatenated.
std::string seeded_reports() {
  std::string all = testing::run_sweep(testing::reserved_pair_spec());
  all += testing::run_sweep(testing::saturation_spec());
  ExperimentSpec spec;
  spec.preset = "nsfnet";
  spec.requests = 2;
  spec.num_scenarios = 4;
  spec.seed = 11;
  spec.variable = SweepVariable::kPenaltyPrice;
  spec.range = parse_range("5:15:5");
  spec.modes = {PlanMode::kStochastic, PlanMode::kExpectedValue, PlanMode::kDeterministic,
                PlanMode::kBenders};
  all += testing::run_sweep(spec);
  const auto inst = run_preset_defaults(2);
  std::ostringstream out;
  write_comparison(compare_models(inst, preset_scenarios(inst, 4, 11)), out);
  return all + out.str();
}

Check determinism() {
  Check c;
  if (seeded_reports() != seeded_reports()) c.fail("reports differ between runs");
  return c;
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"AC1 purify_chain(0.79, 4) = 0.995", purification_chain},
      {"AC2 min pairs 0.55 -> 0.80 is 7", minimum_pairs},
      {"AC3 purify_pair identities on a 10x10 grid", purification_identities},
      {"AC4 qubit count and QFT gate counts", qft_counts},
      {"AC5 200 random MILPs match lattice enumeration", milp_lattice},
      {"AC6 direct solve matches brute force on 20 tiny instances", direct_vs_brute_force},
      {"AC7 decomposition matches the direct solve on 20 tiny instances", benders_vs_direct},
      {"AC8 det <= sp <= ev on 20 tiny instances",
       [] { return testing::stochastic_ordering(kTinyCount); }},
      {"AC9 reserved-pair and saturation trends", trends},
      {"AC10 byte-identical reports on rerun", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.fail(std::string("threw: ") + e.what());
    }
    const double t = seconds_since(start);
    // The last criterion also bounds the whole run.
    if (&run == &criteria.back().second && seconds_since(suite_start) > kSuiteLimit) {
      c.fail("suite took " + fmt(seconds_since(suite_start)) + " s");
    }
    std::printf("%s %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", name.c_str(), t,
                c.ok ? "" : ": ", c.detail.c_str());
    failures += !c.ok;
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), seconds_since(suite_start));
  return failures == 0 ? 0 : 1;
}

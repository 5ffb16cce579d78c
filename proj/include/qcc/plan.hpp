#pragma once

#include <vector>

#include "qcc/instance.hpp"
#include "qcc/scenario.hpp"

namespace qcc {

struct CostBreakdown {
  double first_stage = 0.0;
  // Expected recourse cost, sum over scenarios of probability * cost.
  double second_stage = 0.0;
  double total = 0.0;
  // Unweighted recourse cost of each scenario.
  std::vector<double> per_scenario;
};

// Full decision assignment. Pair quantities are indexed [request][link] and
// [scenario][request][link]; qubit quantities by the position of the slot in
// Instance::qubit_slots(), optionally preceded by [scenario].
struct PlanSolution {
  std::vector<std::vector<int>> route;
  std::vector<std::vector<int>> pairs_reserved;
  std::vector<std::vector<std::vector<int>>> pairs_utilized;
  std::vector<std::vector<std::vector<int>>> pairs_ondemand;

  // 1 where the circuit runs on that (provider, machine).
  std::vector<int> assignment;
  std::vector<int> qubits_reserved;
  std::vector<std::vector<int>> qubits_utilized;
  std::vector<std::vector<int>> qubits_ondemand;
  std::vector<std::vector<double>> overwait;

  CostBreakdown cost;

  // All-zero plan sized for the instance and space.
  static PlanSolution zeros(const Instance& instance, int num_scenarios);

  // Links with route 1 for `request`, in path order from source to
  // destination. Empty when the routed links do not form such a path.
  std::vector<int> path(const Instance& instance, int request) const;
};

// Throws InputError when the solution's shape does not match.
CostBreakdown evaluate_cost(const PlanSolution& solution, const Instance& instance,
                            const ScenarioSpace& space);

}  // namespace qcc

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcc/formulation.hpp"
#include "qcc/instance.hpp"
#include "qcc/lp/linear_program.hpp"
#include "qcc/plan.hpp"
#include "qcc/scenario.hpp"

namespace qcc {

struct BendersConfig {
  double epsilon_pairs = 0.05;
  double epsilon_qubits = 0.05;
  int max_iterations = 500;
  // One recourse estimate and cut per independent block (fiber, qubit slot)
  // instead of a single aggregated cut per iteration.
  bool disaggregate_cuts = false;

  void validate() const;
};

// estimate >= sum coef * (x - anchor) + constant, over master complicating
// variables (indices into the decomposition's complicating vector). With
// disaggregated cuts the estimate is that of `block` and coefficients outside
// the block are 0; an aggregated cut has block -1.
struct Cut {
  std::vector<double> coefficients;
  std::vector<double> anchor;
  double constant = 0.0;
  int iteration = 0;
  int block = -1;

  double evaluate(const std::vector<double>& point) const;
};

struct BoundRecord {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;       // this iteration's upper bound
  double upper_best = 0.0;  // best so far
  double gap = 0.0;         // upper_best - lower
};

struct BendersState {
  int iteration = 0;
  // alpha or theta from the last master, summed over blocks when cuts are
  // disaggregated.
  double recourse_estimate = 0.0;
  double lower_bound = 0.0;
  double upper_bound_best = lp::kInf;
  bool converged = false;
  std::vector<Cut> cuts;
  std::vector<BoundRecord> history;
  // Subproblem duals of the fixing rows, one vector per iteration, summed
  // over subproblems (the cut slopes).
  std::vector<std::vector<double>> duals;
  // Complicating values the master proposed last.
  std::vector<double> fixed;
};

// Result of one subproblem solve with complicating values fixed.
struct SubproblemResult {
  bool feasible = false;
  double value = 0.0;            // MIP optimum
  double relaxation = 0.0;       // LP optimum
  std::vector<double> duals;     // per complicating variable
  std::vector<double> solution;  // subproblem variables
  // Shares of value / relaxation per independent block.
  std::vector<double> block_values;
  std::vector<double> block_relaxations;
};

// Entangled-pair side with routes fixed. Complicating variables are the
// utilized pair counts of every routed (request, link) in every scenario.
// Recourse separates by fiber.
class PairDecomposition {
 public:
  PairDecomposition(const Instance& instance, const ScenarioSpace& space,
                    std::vector<std::vector<int>> routes);

  int num_complicating() const { return static_cast<int>(keys_.size()); }
  int num_blocks() const;
  int block_of(int complicating) const;
  // The utilized-pair vector of `plan` in complicating order.
  std::vector<double> complicating_of(const PlanSolution& plan) const;
  // Reservation plus expected on-demand cost of `plan`: the recourse value
  // the master estimates. Per block, then summed.
  std::vector<double> block_recourse_of(const PlanSolution& plan) const;
  double recourse_cost_of(const PlanSolution& plan) const;

  SubproblemResult solve_reservation(const std::vector<double>& fixed) const;
  SubproblemResult solve_ondemand(int scenario, const std::vector<double>& fixed) const;

  // Runs the loop; fills the pair half of `plan`.
  BendersState run(const BendersConfig& config, PlanSolution& plan) const;

 private:
  struct Key {
    int request, link, scenario, need;
  };
  lp::LinearProgram master_template() const;

  const Instance& instance_;
  const ScenarioSpace& space_;
  std::vector<std::vector<int>> routes_;
  std::vector<Key> keys_;
};

// Qubit side. Complicating variables are the machine assignments followed by
// the utilized qubit counts of every slot in every scenario. Recourse
// separates by slot.
class QubitDecomposition {
 public:
  QubitDecomposition(const Instance& instance, const ScenarioSpace& space);

  int num_complicating() const { return num_slots_ * (1 + space_.size()); }
  int num_blocks() const { return num_slots_; }
  int block_of(int complicating) const;
  std::vector<double> complicating_of(const PlanSolution& plan) const;
  std::vector<double> block_recourse_of(const PlanSolution& plan) const;
  double recourse_cost_of(const PlanSolution& plan) const;

  SubproblemResult solve_reservation(const std::vector<double>& fixed) const;
  SubproblemResult solve_ondemand(int scenario, const std::vector<double>& fixed) const;

  BendersState run(const BendersConfig& config, PlanSolution& plan) const;

 private:
  int assignment_index(int slot) const { return slot; }
  int utilized_index(int scenario, int slot) const {
    return num_slots_ * (1 + scenario) + slot;
  }
  lp::LinearProgram master_template() const;

  const Instance& instance_;
  const ScenarioSpace& space_;
  std::vector<QubitSlot> slots_;
  std::vector<int> group_;  // per slot
  int num_slots_ = 0;
  int num_groups_ = 0;
};

struct DecomposedReport {
  std::vector<std::vector<int>> routes;
  BendersState pairs;
  BendersState qubits;
  double total = 0.0;
};

// No routing fits the shared link capacities.
class RouteSelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Routes from a direct pairs-only solve, then the pair and qubit loops run
// independently and are assembled into one plan. Throws RouteSelectionError
// when the route solve is infeasible.
PlanSolution run_decomposed(const Instance& instance, const ScenarioSpace& space,
                            const BendersConfig& config, DecomposedReport* report = nullptr);

// Writes "problem,iteration,lower,upper,upper_best,gap" rows.
void write_trajectory(const DecomposedReport& report, std::ostream& out);

}  // namespace qcc

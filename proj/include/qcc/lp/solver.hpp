#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qcc/lp/linear_program.hpp"

namespace qcc::lp {

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNodeLimit,
  kNumericalFailure,
};

std::string_view to_string(SolveStatus status);

struct SimplexOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_pivot_limit = 1000;
  // 0 selects a limit proportional to the program size.
  std::int64_t iteration_limit = 0;
};

struct LpSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<double> primal;
  // One multiplier per constraint: d(objective)/d(rhs) at the optimum.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  // b'y plus the bound contributions of nonbasic reduced costs.
  double dual_objective = 0.0;
  std::int64_t iterations = 0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Bounded-variable primal simplex on a dense tableau. Integrality is ignored.
LpSolution solve_lp(const LinearProgram& program,
                    const SimplexOptions& options = {});

// Same as above with variable bounds overridden by `lower` / `upper`.
LpSolution solve_lp(const LinearProgram& program,
                    const std::vector<double>& lower,
                    const std::vector<double>& upper,
                    const SimplexOptions& options = {});

struct MilpOptions {
  double relative_gap = 1e-6;
  double absolute_gap = 1e-9;
  double integrality_tolerance = 1e-6;
  std::int64_t node_limit = 200000;
  SimplexOptions simplex;
};

struct MilpSolution {
  // kNodeLimit carries the best incumbent found, if any (has_incumbent).
  SolveStatus status = SolveStatus::kNumericalFailure;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  std::int64_t nodes = 0;
  // LP relaxation objective at the root node.
  double root_bound = 0.0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Best-bound branch and bound, branching on the most fractional variable.
MilpSolution solve_milp(const LinearProgram& program,
                        const MilpOptions& options = {});

}  // namespace qcc::lp

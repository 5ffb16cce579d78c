#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "qcc/lp/solver.hpp"

namespace qcc::lp {

namespace {

struct Node {
  double bound;
  std::int64_t id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  // Lowest bound first; ties resolved by creation order for determinism.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double fractionality(double value) {
  return std::abs(value - std::round(value));
}

}  // namespace

MilpSolution solve_milp(const LinearProgram& program,
                        const MilpOptions& options) {
  program.validate();
  const int n = program.num_variables();
  const auto& vars = program.variables();

  MilpSolution result;
  std::vector<double> root_lower(n), root_upper(n);
  for (int j = 0; j < n; ++j) {
    root_lower[j] = vars[j].lower;
    root_upper[j] = vars[j].upper;
    if (vars[j].is_integral()) {
      root_lower[j] = std::ceil(root_lower[j] - options.integrality_tolerance);
      root_upper[j] = std::floor(root_upper[j] + options.integrality_tolerance);
      if (root_lower[j] > root_upper[j]) {
        result.status = SolveStatus::kInfeasible;
        return result;
      }
    }
  }

  double incumbent_value = kInf;
  std::vector<double> incumbent;
  std::int64_t next_id = 0;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push({-kInf, next_id++, std::move(root_lower), std::move(root_upper)});

  auto gap_closed = [&](double bound) {
    if (!std::isfinite(incumbent_value)) return false;
    const double tol = std::max(options.absolute_gap,
                                options.relative_gap * std::abs(incumbent_value));
    return incumbent_value - bound <= tol;
  };

  bool root = true;
  bool saw_unbounded = false;
  bool saw_failure = false;
  while (!open.empty()) {
    if (gap_closed(open.top().bound)) break;
    if (result.nodes >= options.node_limit) {
      result.status = SolveStatus::kNodeLimit;
      break;
    }
    Node node = open.top();
    open.pop();
    ++result.nodes;

    const LpSolution lp =
        solve_lp(program, node.lower, node.upper, options.simplex);
    if (lp.status == SolveStatus::kInfeasible) {
      root = false;
      continue;
    }
    if (lp.status == SolveStatus::kUnbounded) {
      saw_unbounded = true;
      root = false;
      continue;
    }
    if (lp.status != SolveStatus::kOptimal) {
      saw_failure = true;
      root = false;
      continue;
    }
    if (root) {
      result.root_bound = lp.objective;
      root = false;
    }
    if (gap_closed(lp.objective)) continue;

    int branch_var = -1;
    double best_frac = options.integrality_tolerance;
    for (int j = 0; j < n; ++j) {
      if (!vars[j].is_integral()) continue;
      const double f = fractionality(lp.primal[j]);
      // Most fractional: distance to nearest integer closest to 0.5.
      if (f > best_frac + 1e-12) {
        best_frac = f;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      std::vector<double> values = lp.primal;
      for (int j = 0; j < n; ++j) {
        if (vars[j].is_integral()) values[j] = std::round(values[j]);
      }
      const double value = program.evaluate_objective(values);
      if (value < incumbent_value) {
        incumbent_value = value;
        incumbent = std::move(values);
      }
      continue;
    }

    const double v = lp.primal[branch_var];
    Node down{lp.objective, next_id++, node.lower, node.upper};
    down.upper[branch_var] = std::floor(v);
    Node up{lp.objective, next_id++, std::move(node.lower),
            std::move(node.upper)};
    up.lower[branch_var] = std::ceil(v);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double best_bound = incumbent_value;
  if (!open.empty()) best_bound = std::min(best_bound, open.top().bound);

  if (!incumbent.empty()) {
    result.has_incumbent = true;
    result.values = std::move(incumbent);
    result.objective = incumbent_value;
    result.best_bound = best_bound;
    result.gap = std::max(0.0, incumbent_value - best_bound);
    if (result.status != SolveStatus::kNodeLimit) {
      result.status = SolveStatus::kOptimal;
    }
    return result;
  }
  if (result.status == SolveStatus::kNodeLimit) return result;
  if (saw_unbounded) {
    result.status = SolveStatus::kUnbounded;
  } else if (saw_failure) {
    result.status = SolveStatus::kNumericalFailure;
  } else {
    result.status = SolveStatus::kInfeasible;
  }
  return result;
}

}  // namespace qcc::lp

#pragma once

// Test-only oracles for the LP/MILP engine: random small programs and
// exhaustive evaluation that shares no code with the simplex path.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "qcc/lp/linear_program.hpp"

namespace qcc::testing {

// Pure-integer program with integer data: objective values are exact.
inline lp::LinearProgram random_integer_program(std::mt19937_64& rng,
                                                int max_vars = 6,
                                                int max_bound = 5,
                                                int max_rows = 8) {
  std::uniform_int_distribution<int> var_count(1, max_vars);
  std::uniform_int_distribution<int> row_count(0, max_rows);
  std::uniform_int_distribution<int> bound(0, max_bound);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> sense(0, 2);

  lp::LinearProgram program;
  const int n = var_count(rng);
  for (int j = 0; j < n; ++j) {
    int lo = bound(rng);
    int hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    lo = lo / 2;  // keep a little room below
    program.add_integer("v" + std::to_string(j), lo, hi);
    program.set_objective_coefficient(j, coef(rng));
  }
  const int m = row_count(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term> terms;
    for (int j = 0; j < n; ++j) {
      const int c = coef(rng);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    if (terms.empty()) continue;
    std::uniform_int_distribution<int> rhs(-10, 20);
    const auto s = static_cast<lp::Sense>(sense(rng));
    program.add_constraint("r" + std::to_string(i), std::move(terms), s,
                           rhs(rng));
  }
  return program;
}

// Minimum objective over the full integer lattice inside the bounds, or
// nullopt when no lattice point is feasible.
inline std::optional<double> enumerate_lattice(
    const lp::LinearProgram& program) {
  const int n = program.num_variables();
  std::vector<std::int64_t> lo(n), hi(n), point(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = static_cast<std::int64_t>(std::ceil(program.variable(j).lower));
    hi[j] = static_cast<std::int64_t>(std::floor(program.variable(j).upper));
    if (lo[j] > hi[j]) return std::nullopt;
    point[j] = lo[j];
  }
  std::optional<double> best;
  std::vector<double> values(n);
  while (true) {
    for (int j = 0; j < n; ++j) values[j] = static_cast<double>(point[j]);
    bool feasible = true;
    for (const auto& row : program.constraints()) {
      double activity = 0.0;
      for (const auto& t : row.terms) activity += t.coef * values[t.var];
      if ((row.sense == lp::Sense::kLessEqual && activity > row.rhs) ||
          (row.sense == lp::Sense::kGreaterEqual && activity < row.rhs) ||
          (row.sense == lp::Sense::kEqual && activity != row.rhs)) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      const double value = program.evaluate_objective(values);
      if (!best || value < *best) best = value;
    }
    int j = 0;
    while (j < n && point[j] == hi[j]) {
      point[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++point[j];
  }
  return best;
}

}  // namespace qcc::testing

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qcc/lp/lp_format.hpp"
#include "qcc/lp/solver.hpp"
#include "support/milp_oracle.hpp"

using namespace qcc::lp;

namespace {

// Solves a dense n x n system by partial pivoting; nullopt when singular.
std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> a,
                                               std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-10) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Vertex enumeration oracle for bounded LPs with very few variables.
std::optional<double> enumerate_vertices(const LinearProgram& program) {
  const int n = program.num_variables();
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& row : program.constraints()) {
    Plane p{std::vector<double>(n, 0.0), row.rhs};
    for (const auto& t : row.terms) p.a[t.var] += t.coef;
    planes.push_back(p);
  }
  for (int j = 0; j < n; ++j) {
    Plane lo{std::vector<double>(n, 0.0), program.variable(j).lower};
    lo.a[j] = 1.0;
    Plane hi{std::vector<double>(n, 0.0), program.variable(j).upper};
    hi.a[j] = 1.0;
    planes.push_back(lo);
    planes.push_back(hi);
  }
  const int k = static_cast<int>(planes.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i : pick) {
      a.push_back(planes[i].a);
      b.push_back(planes[i].b);
    }
    if (auto x = solve_dense(a, b)) {
      if (program.max_violation(*x) <= 1e-7) {
        const double v = program.evaluate_objective(*x);
        if (!best || v < *best) best = v;
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == k - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

LinearProgram random_bounded_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(1, 3), nrows(0, 4), sense(0, 2);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), rhs(-2.0, 6.0),
      bound(-2.0, 4.0);
  LinearProgram p;
  const int n = nvars(rng);
  for (int j = 0; j < n; ++j) {
    double lo = bound(rng), hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    p.add_continuous("x" + std::to_string(j), lo, hi + 0.5);
    p.set_objective_coefficient(j, coef(rng));
  }
  const int m = nrows(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < n; ++j) terms.push_back({j, coef(rng)});
    p.add_constraint("r" + std::to_string(i), terms,
                     static_cast<Sense>(sense(rng)), rhs(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("covering row has objective 1 and dual 1") {
  LinearProgram p;
  const auto x = p.add_continuous("x");
  const auto y = p.add_continuous("y");
  p.set_objective_coefficient(x, 1.0);
  p.set_objective_coefficient(y, 1.0);
  p.add_constraint("cover", {{x, 1.0}, {y, 1.0}}, Sense::kGreaterEqual, 1.0);
  const auto s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.duals[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.dual_objective == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("contradictory bound and row is infeasible") {
  LinearProgram p;
  const auto x = p.add_continuous("x");
  p.set_objective_coefficient(x, 1.0);
  p.add_constraint("neg", {{x, 1.0}}, Sense::kLessEqual, -1.0);
  CHECK(solve_lp(p).status == SolveStatus::kInfeasible);
  CHECK(solve_milp(p).status == SolveStatus::kInfeasible);
}

TEST_CASE("unbounded direction is reported") {
  LinearProgram p;
  const auto x = p.add_continuous("x");
  const auto y = p.add_continuous("y");
  p.set_objective_coefficient(x, -1.0);
  p.add_constraint("r", {{x, 1.0}, {y, -1.0}}, Sense::kLessEqual, 2.0);
  CHECK(solve_lp(p).status == SolveStatus::kUnbounded);
}

TEST_CASE("equality rows, free variables and negative bounds") {
  LinearProgram p;
  const auto x = p.add_continuous("x", -kInf, kInf);
  const auto y = p.add_continuous("y", -3.0, 2.0);
  p.set_objective_coefficient(x, 2.0);
  p.set_objective_coefficient(y, -1.0);
  p.add_constraint("link", {{x, 1.0}, {y, 1.0}}, Sense::kEqual, 1.0);
  p.add_constraint("floor", {{x, 1.0}}, Sense::kGreaterEqual, -4.0);
  // x = 1 - y, objective 2 - 3y minimized at y = 2.
  const auto s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.primal[y] == doctest::Approx(2.0));
  CHECK(s.primal[x] == doctest::Approx(-1.0));
  CHECK(s.objective == doctest::Approx(-4.0));
  CHECK(s.dual_objective == doctest::Approx(-4.0));
}

TEST_CASE("random bounded LPs match vertex enumeration and close duality") {
  std::mt19937_64 rng(7);
  int optimal = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto p = random_bounded_lp(rng);
    const auto oracle = enumerate_vertices(p);
    const auto s = solve_lp(p);
    if (!oracle) {
      CHECK(s.status == SolveStatus::kInfeasible);
      continue;
    }
    REQUIRE(s.optimal());
    ++optimal;
    CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-7));
    CHECK(std::abs(s.objective - s.dual_objective) <= 1e-6);
    CHECK(p.max_violation(s.primal) <= 1e-7);
    // Complementary slackness on every row.
    for (int i = 0; i < p.num_constraints(); ++i) {
      double activity = 0.0;
      for (const auto& t : p.constraint(i).terms) {
        activity += t.coef * s.primal[t.var];
      }
      CHECK(std::abs(s.duals[i] * (activity - p.constraint(i).rhs)) <= 1e-6);
    }
  }
  CHECK(optimal > 100);
}

TEST_CASE("ceiling of 1.5") {
  LinearProgram p;
  const auto x = p.add_integer("x", 0.0, kInf);
  p.set_objective_coefficient(x, 1.0);
  p.add_constraint("half", {{x, 2.0}}, Sense::kGreaterEqual, 3.0);
  const auto s = solve_milp(p);
  REQUIRE(s.optimal());
  CHECK(s.values[x] == 2.0);
  CHECK(s.objective == 2.0);
}

TEST_CASE("integral relaxation needs no branching") {
  LinearProgram p;
  const auto x = p.add_integer("x", 0.0, 10.0);
  const auto y = p.add_integer("y", 0.0, 10.0);
  p.set_objective_coefficient(x, 3.0);
  p.set_objective_coefficient(y, 2.0);
  p.add_constraint("a", {{x, 1.0}, {y, 1.0}}, Sense::kGreaterEqual, 4.0);
  p.add_constraint("b", {{x, 1.0}}, Sense::kGreaterEqual, 1.0);
  const auto s = solve_milp(p);
  REQUIRE(s.optimal());
  CHECK(s.nodes == 1);
  CHECK(s.objective == 9.0);
}

TEST_CASE("random integer programs match lattice enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const auto p = qcc::testing::random_integer_program(rng);
    const auto oracle = qcc::testing::enumerate_lattice(p);
    MilpOptions opts;
    opts.relative_gap = 0.0;
    const auto s = solve_milp(p, opts);
    if (!oracle) {
      CHECK(s.status == SolveStatus::kInfeasible);
      continue;
    }
    REQUIRE(s.optimal());
    CHECK(s.objective == *oracle);
    CHECK(s.objective >= s.root_bound - 1e-9);
    for (int j = 0; j < p.num_variables(); ++j) {
      CHECK(s.values[j] == std::round(s.values[j]));
    }
  }
}

TEST_CASE("node limit keeps the incumbent and flags the status") {
  std::mt19937_64 rng(3);
  LinearProgram p;
  std::vector<Term> knap;
  for (int j = 0; j < 12; ++j) {
    const auto v = p.add_integer("k" + std::to_string(j), 0, 1);
    p.set_objective_coefficient(v, -(5.0 + j % 4));
    knap.push_back({v, 3.0 + (j * 7) % 5});
  }
  p.add_constraint("cap", knap, Sense::kLessEqual, 17.5);
  MilpOptions opts;
  opts.node_limit = 2;
  const auto s = solve_milp(p, opts);
  CHECK(s.status == SolveStatus::kNodeLimit);
  opts.node_limit = 100000;
  const auto full = solve_milp(p, opts);
  REQUIRE(full.optimal());
  if (s.has_incumbent) CHECK(s.objective >= full.objective);
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(5);
  const auto p = qcc::testing::random_integer_program(rng, 6, 5, 8);
  const auto a = solve_milp(p);
  const auto b = solve_milp(p);
  CHECK(a.status == b.status);
  CHECK(a.values == b.values);
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("invalid programs are rejected") {
  LinearProgram p;
  p.add_continuous("x", 2.0, 1.0);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  LinearProgram q;
  q.add_continuous("x");
  q.add_constraint("bad", {{3, 1.0}}, Sense::kLessEqual, 1.0);
  CHECK_THROWS_AS(solve_lp(q), std::invalid_argument);
}

TEST_CASE("LP text output has the standard sections") {
  LinearProgram p;
  const auto x = p.add_integer("x[1]", 0.0, 4.0);
  const auto b = p.add_binary("use it");
  p.set_objective_coefficient(x, 1.5);
  p.set_objective_coefficient(b, -2.0);
  p.add_constraint("mix", {{x, 1.0}, {b, -3.0}}, Sense::kGreaterEqual, 0.0);
  std::ostringstream out;
  write_lp_format(p, out);
  const std::string text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("mix: 1 x[1] - 3 use_it >= 0") != std::string::npos);
  CHECK(text.find("0 <= x[1] <= 4") != std::string::npos);
  CHECK(text.find("General\n x[1]") != std::string::npos);
  CHECK(text.find("Binary\n use_it") != std::string::npos);
  CHECK(text.rfind("End\n") == text.size() - 4);
}

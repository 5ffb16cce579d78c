#include "qcc/benders.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qcc/lp/solver.hpp"
#include "line_parser.hpp"

namespace qcc {

using lp::Sense;
using lp::Term;

void BendersConfig::validate() const {
  if (!(epsilon_pairs > 0.0) || !(epsilon_qubits > 0.0)) {
    throw std::invalid_argument("Benders tolerances must be positive");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

double Cut::evaluate(const std::vector<double>& point) const {
  double v = constant;
  for (size_t i = 0; i < coefficients.size(); ++i) {
    v += coefficients[i] * (point.at(i) - anchor[i]);
  }
  return v;
}

namespace {

// Solves the relaxation for duals, then the integer program for the value.
// Duals are those of rows [0, n), the fixing rows. `block` maps each
// variable to its independent block (-1 for the fixed copies).
SubproblemResult solve_subproblem(const lp::LinearProgram& program, int n,
                                  const std::vector<int>& block, int num_blocks) {
  SubproblemResult result;
  const auto relaxed = lp::solve_lp(program);
  if (!relaxed.optimal()) return result;
  const auto mip = lp::solve_milp(program, default_milp_options());
  if (!mip.optimal()) return result;
  result.feasible = true;
  result.relaxation = relaxed.objective;
  result.value = mip.objective;
  result.duals.assign(relaxed.duals.begin(), relaxed.duals.begin() + n);
  result.block_values.assign(num_blocks, 0.0);
  result.block_relaxations.assign(num_blocks, 0.0);
  for (int j = 0; j < program.num_variables(); ++j) {
    if (block[j] < 0) continue;
    result.block_values[block[j]] += program.objective()[j] * mip.values[j];
    result.block_relaxations[block[j]] += program.objective()[j] * relaxed.primal[j];
  }
  result.solution = mip.values;
  return result;
}

// Shared loop of Steps 1-4. Complicating variables are master ids [0, n).
// The loop appends the recourse estimate: one variable, or one per block
// when cuts are disaggregated. Master ids in `relaxed` are integer variables
// declared continuous; their integrality is restored if the cuts stop moving
// the master before the bounds meet. `best_fixed` receives the proposal with
// the best upper bound.
template <typename Solve>
BendersState benders_loop(lp::LinearProgram master, std::vector<int> block_of,
                          int num_blocks, bool disaggregate, const std::vector<int>& relaxed,
                          int num_scenarios, double epsilon, int max_iterations,
                          const char* what, Solve&& solve_subproblems,
                          std::vector<double>& best_fixed) {
  BendersState state;
  const int n = static_cast<int>(block_of.size());
  const int num_estimates = disaggregate ? num_blocks : 1;
  const int first_estimate = master.num_variables();
  for (int e = 0; e < num_estimates; ++e) {
    // Costs are non-negative, so 0 bounds every estimate from below.
    const int id = master.add_continuous(std::string(what) + "_recourse" + std::to_string(e), 0.0, lp::kInf);
    master.set_objective_coefficient(id, 1.0);
  }
  if (!disaggregate) std::fill(block_of.begin(), block_of.end(), 0);
  for (int it = 1; it <= max_iterations; ++it) {
    state.iteration = it;
    const auto m = lp::solve_milp(master, default_milp_options());
    if (!m.optimal()) {
      throw std::runtime_error(std::string(what) + " master problem is " +
                               std::string(lp::to_string(m.status)));
    }
    // Cuts come from the master point itself; the upper bound from its
    // rounding, which is the proposal kept.
    // Integer values within the solver's tolerance are snapped and the
    // continuous ones re-solved around them; the slack would otherwise leave
    // the subproblems slightly infeasible.
    auto values = m.values;
    std::vector<double> lo, hi;
    bool snapped = false;
    for (int j = 0; j < master.num_variables(); ++j) {
      const auto& var = master.variable(j);
      lo.push_back(var.lower);
      hi.push_back(var.upper);
      if (var.kind != lp::VarKind::kInteger) continue;
      lo[j] = hi[j] = std::round(values[j]);
      snapped = snapped || lo[j] != values[j];
    }
    if (snapped) {
      const auto polished = lp::solve_lp(master, lo, hi);
      if (polished.optimal()) values = polished.primal;
    }
    // The simplex accepts row violations up to 1e-5; snapping at that scale
    // keeps noise such as x = 1e-6 beside a = 0 out of the subproblems.
    std::vector<double> point(values.begin(), values.begin() + n);
    for (double& x : point) {
      if (std::abs(x - std::round(x)) < 1e-5) x = std::round(x);
    }
    std::vector<double> fixed = point;
    for (double& x : fixed) x = std::round(x);
    const bool integral = fixed == point;
    state.fixed = fixed;
    state.recourse_estimate = 0.0;
    for (int e = 0; e < num_estimates; ++e) state.recourse_estimate += values[first_estimate + e];
    state.lower_bound = std::max(it == 1 ? -lp::kInf : state.lower_bound, m.objective);

    // Reservation subproblem first, then one per scenario.
    double value = 0.0;
    std::vector<double> relaxation(num_estimates, 0.0);
    std::vector<double> slope(n, 0.0);
    for (int k = -1; k < num_scenarios; ++k) {
      const auto at_point = solve_subproblems(k, point);
      const auto at_fixed = integral ? at_point : solve_subproblems(k, fixed);
      if (!at_point.feasible || !at_fixed.feasible) {
        throw std::runtime_error(std::string(what) + " subproblem " +
                                 (k < 0 ? std::string("S1") : "S2(" + std::to_string(k) + ")") +
                                 " is infeasible at iteration " + std::to_string(it));
      }
      value += at_fixed.value;
      for (int b = 0; b < num_blocks; ++b) {
        relaxation[disaggregate ? b : 0] += at_point.block_relaxations[b];
      }
      for (int i = 0; i < n; ++i) slope[i] += at_point.duals[i];
    }
    // Master cost of the proposal, without the recourse estimates.
    double first = 0.0;
    for (int i = 0; i < n; ++i) first += master.objective()[i] * fixed[i];
    const double upper = first + value;
    if (upper < state.upper_bound_best) {
      state.upper_bound_best = upper;
      best_fixed = fixed;
    }
    state.history.push_back({it, state.lower_bound, upper, state.upper_bound_best,
                             state.upper_bound_best - state.lower_bound});
    state.duals.push_back(slope);
    if (state.upper_bound_best - state.lower_bound < epsilon) {
      state.converged = true;
      break;
    }
    // One cut per block whose estimate falls short of its recourse.
    int added = 0;
    for (int b = 0; b < num_estimates; ++b) {
      if (values[first_estimate + b] >= relaxation[b] - 1e-9) continue;
      Cut cut{std::vector<double>(n, 0.0), point, relaxation[b], it, disaggregate ? b : -1};
      std::vector<Term> terms{{first_estimate + b, 1.0}};
      double rhs = relaxation[b];
      for (int i = 0; i < n; ++i) {
        if (block_of[i] != b || slope[i] == 0.0) continue;
        cut.coefficients[i] = slope[i];
        terms.push_back({i, -slope[i]});
        rhs -= slope[i] * point[i];
      }
      master.add_constraint("cut" + std::to_string(it) + "," + std::to_string(b),
                            std::move(terms), Sense::kGreaterEqual, rhs);
      state.cuts.push_back(std::move(cut));
      ++added;
    }
    if (added == 0) {
      // The estimates are exact at a fractional point whose rounding costs
      // more; only integrality can move the master now.
      bool changed = false;
      for (int j : relaxed) {
        if (master.variable(j).kind == lp::VarKind::kInteger) continue;
        master.set_kind(j, lp::VarKind::kInteger);
        changed = true;
      }
      if (!changed) break;
    }
  }
  return state;
}

int rounded(double x) { return static_cast<int>(std::lround(x)); }

// A subproblem under construction: copies of the complicating variables
// first, each pinned by a fixing row, then the subproblem's own variables
// tagged with their block.
struct SubproblemBuilder {
  lp::LinearProgram program;
  std::vector<int> block;
  std::vector<int> copy;

  explicit SubproblemBuilder(const std::vector<double>& fixed) {
    const int n = static_cast<int>(fixed.size());
    for (int i = 0; i < n; ++i) {
      copy.push_back(program.add_continuous("fix" + std::to_string(i), 0.0, lp::kInf));
      block.push_back(-1);
    }
    for (int i = 0; i < n; ++i) {
      program.add_constraint("fix" + std::to_string(i), {{copy[i], 1.0}}, Sense::kEqual, fixed[i]);
    }
  }

  int add(lp::VarKind kind, std::string name, double hi, double cost, int b) {
    const int id = program.add_variable(std::move(name), kind, 0.0, hi);
    program.set_objective_coefficient(id, cost);
    block.push_back(b);
    return id;
  }

  SubproblemResult solve(int num_blocks) const {
    return solve_subproblem(program, static_cast<int>(copy.size()), block, num_blocks);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Entangled pairs

PairDecomposition::PairDecomposition(const Instance& instance, const ScenarioSpace& space,
                                     std::vector<std::vector<int>> routes)
    : instance_(instance), space_(space), routes_(std::move(routes)) {
  const auto& topo = instance.topology;
  const int nr = static_cast<int>(instance.requests.size());
  if (static_cast<int>(routes_.size()) != nr) throw std::invalid_argument("routes: one row per request");
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(routes_[r].size()) != topo.num_links()) {
      throw std::invalid_argument("routes: one entry per link");
    }
    for (int l = 0; l < topo.num_links(); ++l) {
      if (!routes_[r][l]) continue;
      for (int k = 0; k < space.size(); ++k) {
        const int need = required_pairs(instance, l, space[k].request_fidelity(r));
        if (need < 0) {
          const auto& link = topo.link(l);
          throw InfeasibleModelError(instance.requests[r].id,
                                     {topo.node(link.from).id + "->" + topo.node(link.to).id});
        }
        keys_.push_back({r, l, k, need});
      }
    }
  }
}

int PairDecomposition::num_blocks() const { return instance_.topology.num_fibers(); }

int PairDecomposition::block_of(int i) const {
  return instance_.topology.link(keys_.at(i).link).fiber;
}

std::vector<double> PairDecomposition::complicating_of(const PlanSolution& plan) const {
  std::vector<double> out;
  for (const auto& key : keys_) out.push_back(plan.pairs_utilized[key.scenario][key.request][key.link]);
  return out;
}

std::vector<double> PairDecomposition::block_recourse_of(const PlanSolution& plan) const {
  std::vector<double> cost(num_blocks(), 0.0);
  for (size_t r = 0; r < routes_.size(); ++r) {
    for (size_t l = 0; l < routes_[r].size(); ++l) {
      const auto& price = instance_.pair_cost(l, r);
      double& c = cost[instance_.topology.link(l).fiber];
      c += (instance_.node_cost(l) + price.reserve) * plan.pairs_reserved[r][l];
      for (int k = 0; k < space_.size(); ++k) {
        c += space_[k].probability * price.ondemand * plan.pairs_ondemand[k][r][l];
      }
    }
  }
  return cost;
}

double PairDecomposition::recourse_cost_of(const PlanSolution& plan) const {
  double total = 0.0;
  for (double c : block_recourse_of(plan)) total += c;
  return total;
}

lp::LinearProgram PairDecomposition::master_template() const {
  const auto& topo = instance_.topology;
  lp::LinearProgram p;
  for (const auto& key : keys_) {
    const auto& link = topo.link(key.link);
    // required_pairs caps need at rcap + ocap, so lo <= hi.
    const int lo = std::max(0, key.need - link.ondemand_capacity);
    const int hi = std::min(key.need, link.reserve_capacity);
    const int id = p.add_integer("y_eep[" + std::to_string(key.request) + "," +
                                     std::to_string(key.link) + ",s" + std::to_string(key.scenario) + "]",
                                 lo, hi);
    p.set_objective_coefficient(
        id, space_[key.scenario].probability * instance_.pair_cost(key.link, key.request).utilize);
  }
  // Envelope of utilization over scenarios bounds the fiber's reservations.
  std::vector<std::vector<int>> envelope(routes_.size(), std::vector<int>(topo.num_links(), -1));
  for (size_t i = 0; i < keys_.size(); ++i) {
    const auto& key = keys_[i];
    int& u = envelope[key.request][key.link];
    if (u < 0) u = p.add_continuous("u[" + std::to_string(key.request) + "," + std::to_string(key.link) + "]");
    p.add_constraint("env", {{u, 1.0}, {static_cast<int>(i), -1.0}}, Sense::kGreaterEqual, 0.0);
  }
  for (int f = 0; f < topo.num_fibers(); ++f) {
    const auto links = topo.fiber_links(f);
    std::vector<Term> reserve;
    for (size_t r = 0; r < routes_.size(); ++r) {
      for (int l : links) {
        if (envelope[r][l] >= 0) reserve.push_back({envelope[r][l], 1.0});
      }
    }
    if (reserve.empty()) continue;
    p.add_constraint("rcap", std::move(reserve), Sense::kLessEqual,
                     topo.link(links.front()).reserve_capacity);
    // On-demand tops up need - utilized within the fiber's capacity.
    for (int k = 0; k < space_.size(); ++k) {
      std::vector<Term> utilized;
      double need = 0.0;
      for (size_t i = 0; i < keys_.size(); ++i) {
        const auto& key = keys_[i];
        if (key.scenario != k || topo.link(key.link).fiber != f) continue;
        utilized.push_back({static_cast<int>(i), 1.0});
        need += key.need;
      }
      p.add_constraint("ocap", std::move(utilized), Sense::kGreaterEqual,
                       need - topo.link(links.front()).ondemand_capacity);
    }
  }
  return p;
}

SubproblemResult PairDecomposition::solve_reservation(const std::vector<double>& fixed) const {
  const auto& topo = instance_.topology;
  const int n = num_complicating();
  SubproblemBuilder sub(fixed);
  std::vector<std::vector<int>> rep(routes_.size(), std::vector<int>(topo.num_links(), -1));
  for (size_t r = 0; r < routes_.size(); ++r) {
    for (int l = 0; l < topo.num_links(); ++l) {
      if (!routes_[r][l]) continue;
      rep[r][l] = sub.add(lp::VarKind::kInteger, "y_rep", topo.link(l).reserve_capacity,
                          instance_.node_cost(l) + instance_.pair_cost(l, r).reserve,
                          topo.link(l).fiber);
    }
  }
  for (int i = 0; i < n; ++i) {
    sub.program.add_constraint("use", {{rep[keys_[i].request][keys_[i].link], 1.0}, {sub.copy[i], -1.0}},
                               Sense::kGreaterEqual, 0.0);
  }
  for (int f = 0; f < topo.num_fibers(); ++f) {
    std::vector<Term> terms;
    for (size_t r = 0; r < routes_.size(); ++r) {
      for (int l : topo.fiber_links(f)) {
        if (rep[r][l] >= 0) terms.push_back({rep[r][l], 1.0});
      }
    }
    if (!terms.empty()) {
      sub.program.add_constraint("rcap", std::move(terms), Sense::kLessEqual,
                                 topo.link(topo.fiber_links(f).front()).reserve_capacity);
    }
  }
  auto result = sub.solve(num_blocks());
  if (result.feasible) {
    // Keep only y_rep values, in (request, link) order.
    std::vector<double> values;
    for (size_t r = 0; r < routes_.size(); ++r) {
      for (int l = 0; l < topo.num_links(); ++l) {
        if (rep[r][l] >= 0) values.push_back(result.solution[rep[r][l]]);
      }
    }
    result.solution = std::move(values);
  }
  return result;
}

SubproblemResult PairDecomposition::solve_ondemand(int scenario,
                                                   const std::vector<double>& fixed) const {
  const auto& topo = instance_.topology;
  const int n = num_complicating();
  const double prob = space_[scenario].probability;
  SubproblemBuilder sub(fixed);
  std::vector<std::vector<int>> oep(routes_.size(), std::vector<int>(topo.num_links(), -1));
  for (size_t r = 0; r < routes_.size(); ++r) {
    for (int l = 0; l < topo.num_links(); ++l) {
      if (!routes_[r][l]) continue;
      oep[r][l] = sub.add(lp::VarKind::kInteger, "y_oep", topo.link(l).ondemand_capacity,
                          prob * instance_.pair_cost(l, r).ondemand, topo.link(l).fiber);
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto& key = keys_[i];
    if (key.scenario != scenario) continue;
    sub.program.add_constraint("fid", {{sub.copy[i], 1.0}, {oep[key.request][key.link], 1.0}},
                               Sense::kGreaterEqual, key.need);
  }
  for (int f = 0; f < topo.num_fibers(); ++f) {
    std::vector<Term> terms;
    for (size_t r = 0; r < routes_.size(); ++r) {
      for (int l : topo.fiber_links(f)) {
        if (oep[r][l] >= 0) terms.push_back({oep[r][l], 1.0});
      }
    }
    if (!terms.empty()) {
      sub.program.add_constraint("ocap", std::move(terms), Sense::kLessEqual,
                                 topo.link(topo.fiber_links(f).front()).ondemand_capacity);
    }
  }
  auto result = sub.solve(num_blocks());
  if (result.feasible) {
    std::vector<double> values;
    for (size_t r = 0; r < routes_.size(); ++r) {
      for (int l = 0; l < topo.num_links(); ++l) {
        if (oep[r][l] >= 0) values.push_back(result.solution[oep[r][l]]);
      }
    }
    result.solution = std::move(values);
  }
  return result;
}

BendersState PairDecomposition::run(const BendersConfig& config, PlanSolution& plan) const {
  config.validate();
  std::vector<int> blocks;
  for (int i = 0; i < num_complicating(); ++i) blocks.push_back(block_of(i));
  std::vector<double> best;
  auto state = benders_loop(
      master_template(), blocks, num_blocks(), config.disaggregate_cuts, {}, space_.size(),
      config.epsilon_pairs,
      config.max_iterations, "pair",
      [&](int k, const std::vector<double>& fixed) {
        return k < 0 ? solve_reservation(fixed) : solve_ondemand(k, fixed);
      },
      best);
  // Subproblems are deterministic, so re-solving at the best point recovers
  // its decisions.
  const auto s1 = solve_reservation(best);
  std::vector<SubproblemResult> s2;
  for (int k = 0; k < space_.size(); ++k) s2.push_back(solve_ondemand(k, best));

  const auto& topo = instance_.topology;
  size_t pos = 0;
  for (size_t r = 0; r < routes_.size(); ++r) {
    for (int l = 0; l < topo.num_links(); ++l) {
      plan.route[r][l] = routes_[r][l];
      if (!routes_[r][l]) continue;
      plan.pairs_reserved[r][l] = rounded(s1.solution[pos]);
      for (int k = 0; k < space_.size(); ++k) {
        plan.pairs_ondemand[k][r][l] = rounded(s2[k].solution[pos]);
      }
      ++pos;
    }
  }
  for (int i = 0; i < num_complicating(); ++i) {
    const auto& key = keys_[i];
    plan.pairs_utilized[key.scenario][key.request][key.link] = rounded(best[i]);
  }
  return state;
}

// ---------------------------------------------------------------------------
// Qubits

QubitDecomposition::QubitDecomposition(const Instance& instance, const ScenarioSpace& space)
    : instance_(instance), space_(space), slots_(instance.qubit_slots()) {
  num_slots_ = static_cast<int>(slots_.size());
  // Slots come grouped by (request, circuit).
  for (int q = 0; q < num_slots_; ++q) {
    const bool same = q > 0 && slots_[q].request == slots_[q - 1].request &&
                      slots_[q].circuit == slots_[q - 1].circuit;
    if (!same) ++num_groups_;
    group_.push_back(num_groups_ - 1);
  }
}

int QubitDecomposition::block_of(int i) const { return i % num_slots_; }

std::vector<double> QubitDecomposition::complicating_of(const PlanSolution& plan) const {
  std::vector<double> out(num_complicating(), 0.0);
  for (int q = 0; q < num_slots_; ++q) {
    out[assignment_index(q)] = plan.assignment[q];
    for (int k = 0; k < space_.size(); ++k) out[utilized_index(k, q)] = plan.qubits_utilized[k][q];
  }
  return out;
}

std::vector<double> QubitDecomposition::block_recourse_of(const PlanSolution& plan) const {
  std::vector<double> cost(num_blocks(), 0.0);
  for (int q = 0; q < num_slots_; ++q) {
    const auto& price = instance_.qubit_cost(slots_[q]);
    double& c = cost[q];
    c += price.reserve * plan.qubits_reserved[q];
    for (int k = 0; k < space_.size(); ++k) {
      c += space_[k].probability *
           (price.ondemand * plan.qubits_ondemand[k][q] + price.overwait_penalty * plan.overwait[k][q]);
    }
  }
  return cost;
}

double QubitDecomposition::recourse_cost_of(const PlanSolution& plan) const {
  double total = 0.0;
  for (double c : block_recourse_of(plan)) total += c;
  return total;
}

lp::LinearProgram QubitDecomposition::master_template() const {
  lp::LinearProgram p;
  for (int q = 0; q < num_slots_; ++q) p.add_binary("a" + std::to_string(q));
  for (int k = 0; k < space_.size(); ++k) {
    for (int q = 0; q < num_slots_; ++q) {
      const auto& s = slots_[q];
      const int hi = std::min(space_[k].qubits[s.request][s.circuit], instance_.qubit_capacity(s));
      const int x = p.add_continuous("x_uqt" + std::to_string(q) + ",s" + std::to_string(k), 0, hi);
      p.set_objective_coefficient(x, space_[k].probability * instance_.qubit_cost(s).utilize);
      if (hi > 0) {
        p.add_constraint("assigned", {{x, 1.0}, {assignment_index(q), -static_cast<double>(hi)}},
                         Sense::kLessEqual, 0.0);
      }
    }
  }
  for (int g = 0; g < num_groups_; ++g) {
    std::vector<Term> choose;
    for (int q = 0; q < num_slots_; ++q) {
      if (group_[q] == g) choose.push_back({assignment_index(q), 1.0});
    }
    p.add_constraint("place", std::move(choose), Sense::kEqual, 1.0);
  }
  return p;
}

SubproblemResult QubitDecomposition::solve_reservation(const std::vector<double>& fixed) const {
  SubproblemBuilder sub(fixed);
  std::vector<int> rqt(num_slots_);
  for (int q = 0; q < num_slots_; ++q) {
    const int cap = instance_.qubit_capacity(slots_[q]);
    rqt[q] = sub.add(lp::VarKind::kInteger, "x_rqt" + std::to_string(q), cap,
                     instance_.qubit_cost(slots_[q]).reserve, q);
    sub.program.add_constraint(
        "qcap", {{rqt[q], 1.0}, {sub.copy[assignment_index(q)], -static_cast<double>(cap)}},
        Sense::kLessEqual, 0.0);
    for (int k = 0; k < space_.size(); ++k) {
      sub.program.add_constraint("quse", {{rqt[q], 1.0}, {sub.copy[utilized_index(k, q)], -1.0}},
                                 Sense::kGreaterEqual, 0.0);
    }
  }
  auto result = sub.solve(num_blocks());
  if (result.feasible) {
    std::vector<double> values;
    for (int q = 0; q < num_slots_; ++q) values.push_back(result.solution[rqt[q]]);
    result.solution = std::move(values);
  }
  return result;
}

SubproblemResult QubitDecomposition::solve_ondemand(int scenario,
                                                    const std::vector<double>& fixed) const {
  const auto& sc = space_[scenario];
  SubproblemBuilder sub(fixed);
  std::vector<int> oqt(num_slots_);
  for (int q = 0; q < num_slots_; ++q) {
    const auto& s = slots_[q];
    const auto& price = instance_.qubit_cost(s);
    const int beta = sc.qubits[s.request][s.circuit];
    const double late = instance_.exe_time(s) - sc.wait[s.request][s.circuit];
    oqt[q] = sub.add(lp::VarKind::kInteger, "x_oqt" + std::to_string(q), beta,
                     sc.probability * price.ondemand, q);
    const int owt = sub.add(lp::VarKind::kContinuous, "y_owt" + std::to_string(q),
                            std::max(0.0, late), sc.probability * price.overwait_penalty, q);
    if (beta > 0) {
      sub.program.add_constraint("qdem",
                                 {{sub.copy[utilized_index(scenario, q)], 1.0}, {oqt[q], 1.0},
                                  {sub.copy[assignment_index(q)], -static_cast<double>(beta)}},
                                 Sense::kGreaterEqual, 0.0);
    }
    if (late > 0.0) {
      sub.program.add_constraint("wait", {{owt, 1.0}, {sub.copy[assignment_index(q)], -late}},
                                 Sense::kGreaterEqual, 0.0);
    }
  }
  auto result = sub.solve(num_blocks());
  if (result.feasible) {
    std::vector<double> values;
    for (int q = 0; q < num_slots_; ++q) values.push_back(result.solution[oqt[q]]);
    result.solution = std::move(values);
  }
  return result;
}

BendersState QubitDecomposition::run(const BendersConfig& config, PlanSolution& plan) const {
  config.validate();
  std::vector<int> blocks;
  for (int i = 0; i < num_complicating(); ++i) blocks.push_back(block_of(i));
  std::vector<double> best;
  // Utilized counts are relaxed in the master: with the assignment fixed the
  // recourse has integral optimal vertices, so the relaxation loses nothing
  // at convergence and keeps the master's search small.
  std::vector<int> relaxed;
  for (int k = 0; k < space_.size(); ++k) {
    for (int q = 0; q < num_slots_; ++q) relaxed.push_back(utilized_index(k, q));
  }
  auto state = benders_loop(
      master_template(), blocks, num_blocks(), config.disaggregate_cuts, relaxed, space_.size(),
      config.epsilon_qubits,
      config.max_iterations, "qubit",
      [&](int k, const std::vector<double>& fixed) {
        return k < 0 ? solve_reservation(fixed) : solve_ondemand(k, fixed);
      },
      best);
  const auto s1 = solve_reservation(best);
  for (int q = 0; q < num_slots_; ++q) {
    const auto& s = slots_[q];
    const int a = rounded(best[assignment_index(q)]);
    plan.assignment[q] = a;
    plan.qubits_reserved[q] = rounded(s1.solution[q]);
    for (int k = 0; k < space_.size(); ++k) {
      plan.qubits_utilized[k][q] = rounded(best[utilized_index(k, q)]);
      const double late = instance_.exe_time(s) - space_[k].wait[s.request][s.circuit];
      plan.overwait[k][q] = a * std::max(0.0, late);
    }
  }
  for (int k = 0; k < space_.size(); ++k) {
    const auto s2 = solve_ondemand(k, best);
    for (int q = 0; q < num_slots_; ++q) plan.qubits_ondemand[k][q] = rounded(s2.solution[q]);
  }
  return state;
}

// ---------------------------------------------------------------------------

PlanSolution run_decomposed(const Instance& instance, const ScenarioSpace& space,
                            const BendersConfig& config, DecomposedReport* report) {
  config.validate();
  ModelOptions routing;
  routing.include_qubits = false;
  const auto direct = solve_direct(instance, space, routing);
  if (direct.status == lp::SolveStatus::kInfeasible) {
    throw RouteSelectionError("no routing fits the link capacities");
  }
  if (direct.status != lp::SolveStatus::kOptimal) {
    throw std::runtime_error("route selection failed: " +
                             std::string(lp::to_string(direct.status)));
  }
  PlanSolution plan = PlanSolution::zeros(instance, space.size());
  DecomposedReport local;
  DecomposedReport& rep = report ? *report : local;
  rep.routes = direct.plan.route;
  rep.pairs = PairDecomposition(instance, space, rep.routes).run(config, plan);
  rep.qubits = QubitDecomposition(instance, space).run(config, plan);
  plan.cost = evaluate_cost(plan, instance, space);
  rep.total = plan.cost.total;
  return plan;
}

void write_trajectory(const DecomposedReport& report, std::ostream& out) {
  using detail::format_number;
  out << "problem,iteration,lower,upper,upper_best,gap\n";
  for (const auto& [name, state] : {std::pair<const char*, const BendersState*>{"pairs", &report.pairs},
                                    {"qubits", &report.qubits}}) {
    for (const auto& h : state->history) {
      out << name << ',' << h.iteration << ',' << format_number(h.lower) << ','
          << format_number(h.upper) << ',' << format_number(h.upper_best) << ','
          << format_number(h.gap) << '\n';
    }
  }
}

}  // namespace qcc

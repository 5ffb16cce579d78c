#include "qcc/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "qcc/purification.hpp"

namespace qcc {

using lp::Sense;
using lp::Term;

InfeasibleModelError::InfeasibleModelError(const std::string& request,
                                           std::vector<std::string> blocked)
    : std::runtime_error([&] {
        std::string msg = "request '" + request +
                          "' has no path meeting its fidelity demand";
        if (!blocked.empty()) {
          msg += "; blocked links:";
          for (const auto& b : blocked) msg += " " + b;
        }
        return msg;
      }()),
      request_(request),
      blocked_(std::move(blocked)) {}

const char* to_string(Symbol symbol) {
  switch (symbol) {
    case Symbol::kRoute: return "w";
    case Symbol::kPairsReserved: return "y_rep";
    case Symbol::kPairsUtilized: return "y_eep";
    case Symbol::kPairsOndemand: return "y_oep";
    case Symbol::kAssignment: return "a";
    case Symbol::kQubitsReserved: return "x_rqt";
    case Symbol::kQubitsUtilized: return "x_uqt";
    case Symbol::kQubitsOndemand: return "x_oqt";
    case Symbol::kOverwait: return "y_owt";
  }
  return "?";
}

int VariableMap::count(Symbol symbol) const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [&](const Entry& e) { return e.symbol == symbol; }));
}

int required_pairs(const Instance& instance, int link, double demand) {
  const auto& l = instance.topology.link(link);
  const double target = std::max(demand, l.fidelity_threshold);
  const int cap = l.reserve_capacity + l.ondemand_capacity;
  if (cap < 1) return -1;
  auto k = min_pairs_for_target(l.base_fidelity, std::min(target, 1.0), cap);
  return k ? *k : -1;
}

ScenarioSpace effective_space(const ScenarioSpace& space, ModelMode mode, int scenario) {
  switch (mode) {
    case ModelMode::kStochastic:
      return space;
    case ModelMode::kExpectedValue:
      return single_scenario_space(expected_scenario(space));
    case ModelMode::kPerfectInformation:
      if (scenario < 0 || scenario >= space.size()) {
        throw std::out_of_range("perfect-information scenario out of range");
      }
      return single_scenario_space(space[scenario]);
  }
  return space;
}

namespace {

std::string link_name(const Instance& instance, int l) {
  const auto& link = instance.topology.link(l);
  return instance.topology.node(link.from).id + "->" + instance.topology.node(link.to).id;
}

// Throws when some request cannot reach its destination over usable links.
void check_reachable(const Instance& instance, const Model& model) {
  const auto& topo = instance.topology;
  for (int r = 0; r < static_cast<int>(instance.requests.size()); ++r) {
    std::vector<bool> usable(topo.num_links(), true);
    for (const auto& per_scenario : model.required_pairs) {
      for (int l = 0; l < topo.num_links(); ++l) {
        if (per_scenario[r][l] < 0) usable[l] = false;
      }
    }
    const auto& req = instance.requests[r];
    std::vector<bool> seen(topo.num_nodes(), false);
    std::deque<int> queue{req.source};
    seen[req.source] = true;
    while (!queue.empty()) {
      const int n = queue.front();
      queue.pop_front();
      for (int l : topo.outgoing(n)) {
        const int m = topo.link(l).to;
        if (usable[l] && !seen[m]) {
          seen[m] = true;
          queue.push_back(m);
        }
      }
    }
    if (seen[req.destination]) continue;
    std::vector<std::string> blocked;
    for (int l = 0; l < topo.num_links(); ++l) {
      if (!usable[l]) blocked.push_back(link_name(instance, l));
    }
    throw InfeasibleModelError(req.id, std::move(blocked));
  }
}

void fix(lp::LinearProgram& p, int var, double value) {
  if (var >= 0) p.set_bounds(var, value, value);
}

// A route frozen onto a link that cannot meet the fidelity target is pinned
// to 0, which leaves the flow rows infeasible.
void fix_route(lp::LinearProgram& p, int var, int value) {
  if (var >= 0) fix(p, var, std::min<double>(value, p.variable(var).upper));
}

}  // namespace

Model build_model(const Instance& instance, const ScenarioSpace& input_space,
                  const ModelOptions& options) {
  Model model;
  model.space = effective_space(input_space, options.mode, options.scenario);
  model.slots = instance.qubit_slots();
  model.include_pairs = options.include_pairs;
  model.include_qubits = options.include_qubits;

  const auto& topo = instance.topology;
  const auto& space = model.space;
  const int nr = static_cast<int>(instance.requests.size());
  const int nl = topo.num_links();
  const int nk = space.size();
  const int nq = static_cast<int>(model.slots.size());
  auto& p = model.program;
  auto& v = model.vars;

  auto add = [&](std::string name, lp::VarKind kind, double lo, double hi,
                 VariableMap::Entry entry) {
    const int id = p.add_variable(std::move(name), kind, lo, hi);
    v.entries.push_back(entry);
    return id;
  };

  v.route.assign(nr, std::vector<int>(nl, -1));
  v.pairs_reserved = v.route;
  v.pairs_utilized.assign(nk, v.route);
  v.pairs_ondemand = v.pairs_utilized;
  v.assignment.assign(nq, -1);
  v.qubits_reserved.assign(nq, -1);
  v.qubits_utilized.assign(nk, std::vector<int>(nq, -1));
  v.qubits_ondemand = v.qubits_utilized;
  v.overwait = v.qubits_utilized;

  // -------------------------------------------------------------------------
  // Entangled pairs
  if (options.include_pairs) {
    model.required_pairs.assign(nk, std::vector<std::vector<int>>(nr, std::vector<int>(nl, 0)));
    for (int k = 0; k < nk; ++k) {
      for (int r = 0; r < nr; ++r) {
        const double demand = space[k].request_fidelity(r);
        for (int l = 0; l < nl; ++l) {
          model.required_pairs[k][r][l] = required_pairs(instance, l, demand);
        }
      }
    }
    if (!options.fixed_routes && !options.fixed_first_stage) check_reachable(instance, model);

    for (int r = 0; r < nr; ++r) {
      const std::string rid = instance.requests[r].id;
      for (int l = 0; l < nl; ++l) {
        const auto& link = topo.link(l);
        const std::string tag = "[" + rid + "," + link_name(instance, l) + "]";
        bool usable = true;
        for (int k = 0; k < nk; ++k) usable = usable && model.required_pairs[k][r][l] >= 0;
        v.route[r][l] = add("w" + tag, lp::VarKind::kBinary, 0, usable ? 1 : 0,
                            {Symbol::kRoute, -1, r, l, -1});
        v.pairs_reserved[r][l] =
            add("y_rep" + tag, lp::VarKind::kInteger, 0, link.reserve_capacity,
                {Symbol::kPairsReserved, -1, r, l, -1});
        const auto& price = instance.pair_cost(l, r);
        p.set_objective_coefficient(v.pairs_reserved[r][l],
                                    instance.node_cost(l) + price.reserve);
        // Reservation only on routed links, which makes w * y_rep = y_rep.
        p.add_constraint("gate" + tag,
                         {{v.pairs_reserved[r][l], 1.0},
                          {v.route[r][l], -static_cast<double>(link.reserve_capacity)}},
                         Sense::kLessEqual, 0.0);
      }
    }
    for (int k = 0; k < nk; ++k) {
      const double prob = space[k].probability;
      for (int r = 0; r < nr; ++r) {
        const std::string rid = instance.requests[r].id;
        for (int l = 0; l < nl; ++l) {
          const auto& link = topo.link(l);
          const std::string tag =
              "[" + rid + "," + link_name(instance, l) + ",s" + std::to_string(k) + "]";
          const auto& price = instance.pair_cost(l, r);
          const int eep = add("y_eep" + tag, lp::VarKind::kInteger, 0, link.reserve_capacity,
                              {Symbol::kPairsUtilized, k, r, l, -1});
          const int oep = add("y_oep" + tag, lp::VarKind::kInteger, 0, link.ondemand_capacity,
                              {Symbol::kPairsOndemand, k, r, l, -1});
          v.pairs_utilized[k][r][l] = eep;
          v.pairs_ondemand[k][r][l] = oep;
          p.set_objective_coefficient(eep, prob * price.utilize);
          p.set_objective_coefficient(oep, prob * price.ondemand);
          p.add_constraint("use" + tag, {{eep, 1.0}, {v.pairs_reserved[r][l], -1.0}},
                           Sense::kLessEqual, 0.0);
          const int need = std::max(0, model.required_pairs[k][r][l]);
          p.add_constraint("fid" + tag,
                           {{eep, 1.0}, {oep, 1.0}, {v.route[r][l], -static_cast<double>(need)}},
                           Sense::kGreaterEqual, 0.0);
        }
      }
    }
    // Route structure per request.
    for (int r = 0; r < nr; ++r) {
      const auto& req = instance.requests[r];
      for (int n = 0; n < topo.num_nodes(); ++n) {
        std::vector<Term> balance;
        std::vector<Term> out;
        for (int l : topo.outgoing(n)) {
          balance.push_back({v.route[r][l], 1.0});
          out.push_back({v.route[r][l], 1.0});
        }
        for (int l : topo.incoming(n)) balance.push_back({v.route[r][l], -1.0});
        const std::string tag = "[" + req.id + "," + topo.node(n).id + "]";
        double rhs = 0.0;
        if (n == req.source) rhs = 1.0;
        if (n == req.destination) rhs = -1.0;
        p.add_constraint("flow" + tag, std::move(balance), Sense::kEqual, rhs);
        if (!out.empty()) p.add_constraint("out" + tag, std::move(out), Sense::kLessEqual, 1.0);
      }
    }
    // Shared capacity of each fiber.
    for (int f = 0; f < topo.num_fibers(); ++f) {
      const auto links = topo.fiber_links(f);
      const auto& link = topo.link(links.front());
      std::vector<Term> reserve;
      for (int r = 0; r < nr; ++r) {
        for (int l : links) reserve.push_back({v.pairs_reserved[r][l], 1.0});
      }
      if (nr > 1 || links.size() > 1) {
        p.add_constraint("rcap[f" + std::to_string(f) + "]", std::move(reserve),
                         Sense::kLessEqual, link.reserve_capacity);
      }
      for (int k = 0; k < nk; ++k) {
        std::vector<Term> ondemand;
        for (int r = 0; r < nr; ++r) {
          for (int l : links) ondemand.push_back({v.pairs_ondemand[k][r][l], 1.0});
        }
        if (nr > 1 || links.size() > 1) {
          p.add_constraint("ocap[f" + std::to_string(f) + ",s" + std::to_string(k) + "]",
                           std::move(ondemand), Sense::kLessEqual, link.ondemand_capacity);
        }
      }
    }
    if (options.total_reserved_pairs) {
      std::vector<Term> all;
      for (int r = 0; r < nr; ++r) {
        for (int l = 0; l < nl; ++l) all.push_back({v.pairs_reserved[r][l], 1.0});
      }
      p.add_constraint("total_reserved", std::move(all), Sense::kEqual,
                       *options.total_reserved_pairs);
    }
  }

  // -------------------------------------------------------------------------
  // Qubits
  if (options.include_qubits) {
    for (int q = 0; q < nq; ++q) {
      const auto& s = model.slots[q];
      const auto& req = instance.requests[s.request];
      const auto& prov = instance.providers[s.provider];
      const std::string tag = "[" + req.id + "," + req.circuits[s.circuit] + "," + prov.id +
                              "," + prov.machines[s.machine].id + "]";
      const int cap = instance.qubit_capacity(s);
      v.assignment[q] = add("a" + tag, lp::VarKind::kBinary, 0, 1,
                            {Symbol::kAssignment, -1, -1, -1, q});
      v.qubits_reserved[q] = add("x_rqt" + tag, lp::VarKind::kInteger, 0, cap,
                                 {Symbol::kQubitsReserved, -1, -1, -1, q});
      p.set_objective_coefficient(v.qubits_reserved[q], instance.qubit_cost(s).reserve);
      p.add_constraint("qcap" + tag, {{v.qubits_reserved[q], 1.0}, {v.assignment[q], -static_cast<double>(cap)}},
                       Sense::kLessEqual, 0.0);
    }
    // One placement per (request, circuit).
    for (int q = 0; q < nq;) {
      const auto& s = model.slots[q];
      std::vector<Term> choose;
      int end = q;
      while (end < nq && model.slots[end].request == s.request &&
             model.slots[end].circuit == s.circuit) {
        choose.push_back({v.assignment[end], 1.0});
        ++end;
      }
      const auto& req = instance.requests[s.request];
      p.add_constraint("place[" + req.id + "," + req.circuits[s.circuit] + "]",
                       std::move(choose), Sense::kEqual, 1.0);
      q = end;
    }
    for (int k = 0; k < nk; ++k) {
      const double prob = space[k].probability;
      for (int q = 0; q < nq; ++q) {
        const auto& s = model.slots[q];
        const auto& req = instance.requests[s.request];
        const auto& prov = instance.providers[s.provider];
        const std::string tag = "[" + req.id + "," + req.circuits[s.circuit] + "," + prov.id +
                                "," + prov.machines[s.machine].id + ",s" + std::to_string(k) +
                                "]";
        const auto& price = instance.qubit_cost(s);
        const int cap = instance.qubit_capacity(s);
        int max_beta = 0;
        for (const auto& sc : space.scenarios) {
          max_beta = std::max(max_beta, sc.qubits[s.request][s.circuit]);
        }
        const int beta = space[k].qubits[s.request][s.circuit];
        const double late = instance.exe_time(s) - space[k].wait[s.request][s.circuit];
        const int uqt = add("x_uqt" + tag, lp::VarKind::kInteger, 0, cap,
                            {Symbol::kQubitsUtilized, k, -1, -1, q});
        const int oqt = add("x_oqt" + tag, lp::VarKind::kInteger, 0, max_beta,
                            {Symbol::kQubitsOndemand, k, -1, -1, q});
        const int owt = add("y_owt" + tag, lp::VarKind::kContinuous, 0, std::max(0.0, late),
                            {Symbol::kOverwait, k, -1, -1, q});
        v.qubits_utilized[k][q] = uqt;
        v.qubits_ondemand[k][q] = oqt;
        v.overwait[k][q] = owt;
        p.set_objective_coefficient(uqt, prob * price.utilize);
        p.set_objective_coefficient(oqt, prob * price.ondemand);
        p.set_objective_coefficient(owt, prob * price.overwait_penalty);
        p.add_constraint("quse" + tag, {{uqt, 1.0}, {v.qubits_reserved[q], -1.0}},
                         Sense::kLessEqual, 0.0);
        if (beta > 0) {
          p.add_constraint("qdem" + tag, {{uqt, 1.0}, {oqt, 1.0}, {v.assignment[q], -static_cast<double>(beta)}},
                           Sense::kGreaterEqual, 0.0);
        }
        if (late > 0.0) {
          p.add_constraint("wait" + tag, {{owt, 1.0}, {v.assignment[q], -late}},
                           Sense::kGreaterEqual, 0.0);
        }
      }
    }
  }

  // -------------------------------------------------------------------------
  // Frozen decisions
  if (options.fixed_routes && options.include_pairs) {
    for (int r = 0; r < nr; ++r) {
      for (int l = 0; l < nl; ++l) fix_route(p, v.route[r][l], options.fixed_routes->at(r).at(l));
    }
  }
  if (options.fixed_first_stage) {
    const auto& f = *options.fixed_first_stage;
    if (options.include_pairs) {
      for (int r = 0; r < nr; ++r) {
        for (int l = 0; l < nl; ++l) {
          fix_route(p, v.route[r][l], f.route.at(r).at(l));
          fix(p, v.pairs_reserved[r][l], f.pairs_reserved.at(r).at(l));
        }
      }
    }
    if (options.include_qubits) {
      for (int q = 0; q < nq; ++q) {
        fix(p, v.assignment[q], f.assignment.at(q));
        fix(p, v.qubits_reserved[q], f.qubits_reserved.at(q));
      }
    }
  }
  return model;
}

PlanSolution extract_solution(const lp::MilpSolution& solution, const Model& model,
                              const Instance& instance) {
  if (!solution.has_incumbent) {
    throw std::invalid_argument(std::string("cannot extract a plan from a ") +
                                std::string(lp::to_string(solution.status)) + " solve");
  }
  const auto& v = model.vars;
  const auto& x = solution.values;
  const int nr = static_cast<int>(instance.requests.size());
  const int nl = instance.topology.num_links();
  const int nk = model.space.size();
  const int nq = static_cast<int>(model.slots.size());
  auto get = [&](int id) { return id < 0 ? 0 : static_cast<int>(std::lround(x[id])); };

  PlanSolution plan = PlanSolution::zeros(instance, nk);
  if (model.include_pairs) {
    for (int r = 0; r < nr; ++r) {
      for (int l = 0; l < nl; ++l) {
        plan.route[r][l] = get(v.route[r][l]);
        plan.pairs_reserved[r][l] = get(v.pairs_reserved[r][l]);
        for (int k = 0; k < nk; ++k) {
          plan.pairs_utilized[k][r][l] = get(v.pairs_utilized[k][r][l]);
          plan.pairs_ondemand[k][r][l] = get(v.pairs_ondemand[k][r][l]);
        }
      }
      // Keep only the source-destination path; anything else routed is an
      // isolated cycle that serves no demand.
      const auto path = plan.path(instance, r);
      if (path.empty()) throw std::logic_error("routes do not form a path");
      std::vector<bool> on_path(nl, false);
      for (int l : path) on_path[l] = true;
      for (int l = 0; l < nl; ++l) {
        if (on_path[l]) continue;
        plan.route[r][l] = 0;
        plan.pairs_reserved[r][l] = 0;
        for (int k = 0; k < nk; ++k) {
          plan.pairs_utilized[k][r][l] = 0;
          plan.pairs_ondemand[k][r][l] = 0;
        }
      }
    }
  }
  if (model.include_qubits) {
    for (int q = 0; q < nq; ++q) {
      const auto& s = model.slots[q];
      plan.assignment[q] = get(v.assignment[q]);
      plan.qubits_reserved[q] = get(v.qubits_reserved[q]);
      for (int k = 0; k < nk; ++k) {
        plan.qubits_utilized[k][q] = get(v.qubits_utilized[k][q]);
        plan.qubits_ondemand[k][q] = get(v.qubits_ondemand[k][q]);
        const double late =
            instance.exe_time(s) - model.space[k].wait[s.request][s.circuit];
        // The penalty variable sits at its lower bound in any optimum.
        plan.overwait[k][q] = plan.assignment[q] ? std::max(0.0, late) : 0.0;
      }
    }
  }
  plan.cost = evaluate_cost(plan, instance, model.space);
  return plan;
}

lp::MilpOptions default_milp_options() {
  lp::MilpOptions options;
  options.relative_gap = 1e-9;
  options.absolute_gap = 1e-9;
  return options;
}

DirectResult solve_direct(const Instance& instance, const ScenarioSpace& space,
                          const ModelOptions& options, const lp::MilpOptions& milp) {
  DirectResult result;
  result.model = build_model(instance, space, options);
  const auto solution = lp::solve_milp(result.model.program, milp);
  result.status = solution.status;
  result.nodes = solution.nodes;
  if (solution.status == lp::SolveStatus::kOptimal) {
    result.plan = extract_solution(solution, result.model, instance);
    result.objective = solution.objective;
  }
  return result;
}

FirstStageEvaluation evaluate_first_stage_against(const PlanSolution& first_stage,
                                                  const Instance& instance,
                                                  const ScenarioSpace& space) {
  FirstStageEvaluation eval;
  eval.plan = PlanSolution::zeros(instance, space.size());
  eval.plan.route = first_stage.route;
  eval.plan.pairs_reserved = first_stage.pairs_reserved;
  eval.plan.assignment = first_stage.assignment;
  eval.plan.qubits_reserved = first_stage.qubits_reserved;

  ModelOptions options;
  options.fixed_first_stage = first_stage;
  for (int k = 0; k < space.size(); ++k) {
    options.mode = ModelMode::kPerfectInformation;
    options.scenario = k;
    const auto result = solve_direct(instance, space, options);
    if (result.status != lp::SolveStatus::kOptimal) {
      eval.infeasible_scenarios.push_back(k);
      continue;
    }
    eval.plan.pairs_utilized[k] = result.plan.pairs_utilized[0];
    eval.plan.pairs_ondemand[k] = result.plan.pairs_ondemand[0];
    eval.plan.qubits_utilized[k] = result.plan.qubits_utilized[0];
    eval.plan.qubits_ondemand[k] = result.plan.qubits_ondemand[0];
    eval.plan.overwait[k] = result.plan.overwait[0];
  }
  eval.feasible = eval.infeasible_scenarios.empty();
  eval.plan.cost = evaluate_cost(eval.plan, instance, space);
  eval.total = eval.feasible ? eval.plan.cost.total : lp::kInf;
  return eval;
}

}  // namespace qcc

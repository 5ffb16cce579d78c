#include "qcc/plan.hpp"

namespace qcc {

PlanSolution PlanSolution::zeros(const Instance& instance, int num_scenarios) {
  const int nr = static_cast<int>(instance.requests.size());
  const int nl = instance.topology.num_links();
  const int ns = static_cast<int>(instance.qubit_slots().size());
  PlanSolution s;
  s.route.assign(nr, std::vector<int>(nl, 0));
  s.pairs_reserved = s.route;
  s.pairs_utilized.assign(num_scenarios, s.route);
  s.pairs_ondemand = s.pairs_utilized;
  s.assignment.assign(ns, 0);
  s.qubits_reserved.assign(ns, 0);
  s.qubits_utilized.assign(num_scenarios, std::vector<int>(ns, 0));
  s.qubits_ondemand = s.qubits_utilized;
  s.overwait.assign(num_scenarios, std::vector<double>(ns, 0.0));
  s.cost.per_scenario.assign(num_scenarios, 0.0);
  return s;
}

std::vector<int> PlanSolution::path(const Instance& instance, int request) const {
  const auto& topo = instance.topology;
  const auto& req = instance.requests.at(request);
  std::vector<int> out;
  std::vector<bool> visited(topo.num_nodes(), false);
  int at = req.source;
  visited[at] = true;
  while (at != req.destination) {
    int next = -1;
    for (int l : topo.outgoing(at)) {
      if (route[request][l]) {
        if (next >= 0) return {};
        next = l;
      }
    }
    if (next < 0) return {};
    out.push_back(next);
    at = topo.link(next).to;
    if (visited[at]) return {};
    visited[at] = true;
  }
  return out;
}

namespace {

template <typename T>
void expect_size(const std::vector<T>& v, size_t n, const char* what) {
  if (v.size() != n) throw InputError(std::string("solution shape mismatch: ") + what);
}

}  // namespace

CostBreakdown evaluate_cost(const PlanSolution& s, const Instance& instance,
                            const ScenarioSpace& space) {
  const size_t nr = instance.requests.size();
  const size_t nl = instance.topology.num_links();
  const auto slots = instance.qubit_slots();
  const size_t nscn = space.scenarios.size();

  expect_size(s.route, nr, "route");
  expect_size(s.pairs_reserved, nr, "pairs_reserved");
  for (size_t r = 0; r < nr; ++r) {
    expect_size(s.route[r], nl, "route");
    expect_size(s.pairs_reserved[r], nl, "pairs_reserved");
  }
  expect_size(s.pairs_utilized, nscn, "pairs_utilized");
  expect_size(s.pairs_ondemand, nscn, "pairs_ondemand");
  for (size_t k = 0; k < nscn; ++k) {
    expect_size(s.pairs_utilized[k], nr, "pairs_utilized");
    expect_size(s.pairs_ondemand[k], nr, "pairs_ondemand");
    for (size_t r = 0; r < nr; ++r) {
      expect_size(s.pairs_utilized[k][r], nl, "pairs_utilized");
      expect_size(s.pairs_ondemand[k][r], nl, "pairs_ondemand");
    }
  }
  expect_size(s.qubits_reserved, slots.size(), "qubits_reserved");
  expect_size(s.qubits_utilized, nscn, "qubits_utilized");
  expect_size(s.qubits_ondemand, nscn, "qubits_ondemand");
  expect_size(s.overwait, nscn, "overwait");
  for (size_t k = 0; k < nscn; ++k) {
    expect_size(s.qubits_utilized[k], slots.size(), "qubits_utilized");
    expect_size(s.qubits_ondemand[k], slots.size(), "qubits_ondemand");
    expect_size(s.overwait[k], slots.size(), "overwait");
  }

  CostBreakdown cost;
  for (size_t r = 0; r < nr; ++r) {
    for (size_t l = 0; l < nl; ++l) {
      const double y = s.pairs_reserved[r][l];
      cost.first_stage += instance.node_cost(l) * s.route[r][l] * y +
                          instance.pair_cost(l, r).reserve * y;
    }
  }
  for (size_t q = 0; q < slots.size(); ++q) {
    cost.first_stage += s.qubits_reserved[q] * instance.qubit_cost(slots[q]).reserve;
  }

  cost.per_scenario.assign(nscn, 0.0);
  for (size_t k = 0; k < nscn; ++k) {
    double c = 0.0;
    for (size_t r = 0; r < nr; ++r) {
      for (size_t l = 0; l < nl; ++l) {
        const auto& price = instance.pair_cost(l, r);
        c += price.utilize * s.pairs_utilized[k][r][l] +
             price.ondemand * s.pairs_ondemand[k][r][l];
      }
    }
    for (size_t q = 0; q < slots.size(); ++q) {
      const auto& price = instance.qubit_cost(slots[q]);
      c += price.utilize * s.qubits_utilized[k][q] +
           price.ondemand * s.qubits_ondemand[k][q] +
           price.overwait_penalty * s.overwait[k][q];
    }
    cost.per_scenario[k] = c;
    cost.second_stage += space.scenarios[k].probability * c;
  }
  cost.total = cost.first_stage + cost.second_stage;
  return cost;
}

}  // namespace qcc

#pragma once

// Random tiny instances for oracle comparisons: at most 4 nodes, 1-2
// requests, 2 scenarios, capacities at most 9.

#include <random>
#include <string>
#include <utility>

#include "qcc/instance.hpp"
#include "qcc/scenario.hpp"

namespace qcc::testing {

struct TinyCase {
  Instance instance;
  ScenarioSpace space;
};

inline double pick(std::mt19937_64& rng, std::initializer_list<double> values) {
  std::uniform_int_distribution<size_t> d(0, values.size() - 1);
  return *(values.begin() + d(rng));
}

inline int pick_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline TinyCase random_tiny_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TinyCase tc;
  auto& inst = tc.instance;
  const int n = pick_int(rng, 3, 4);
  for (int i = 0; i < n; ++i) {
    inst.topology.add_node({std::to_string(i + 1), pick(rng, {0, 1, 2.5}),
                            pick(rng, {0, 3, 5})});
  }
  auto add_link = [&](int i, int j) {
    const double f = pick(rng, {0.55, 0.7, 0.8, 0.9, 0.95});
    const double fts = pick(rng, {0.6, 0.7, 0.8});
    const int rcap = pick_int(rng, 1, 5);
    const int ocap = pick_int(rng, 2, 9);
    if (pick_int(rng, 0, 1)) {
      inst.topology.add_fiber(i, j, f, fts, rcap, ocap);
    } else {
      inst.topology.add_arc(i, j, f, fts, rcap, ocap);
    }
  };
  // A backbone chain keeps every request routable; extra links add choice.
  for (int i = 0; i + 1 < n; ++i) add_link(i, i + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (pick_int(rng, 0, 2) == 0) add_link(i, j);
    }
  }

  for (int node = 0; node < n; ++node) {
    for (int r = 0; r < 2; ++r) {
      if (pick_int(rng, 0, 3) == 0) {
        inst.costs.set_pair_cost(std::to_string(node + 1), "r" + std::to_string(r + 1),
                                 {pick(rng, {1, 4, 10}), pick(rng, {0, 1, 2}),
                                  pick(rng, {15, 40, 200})});
      }
    }
  }
  inst.costs.set_pair_cost("*", "*", {pick(rng, {2, 10}), pick(rng, {0.5, 1}),
                                      pick(rng, {20, 60, 200})});
  inst.costs.set_qubit_cost("*", "*", {pick(rng, {1.68, 1}), pick(rng, {0.1, 0.5}),
                                       pick(rng, {3, 7}), pick(rng, {10, 400})});

  const int providers = pick_int(rng, 1, 2);
  for (int p = 0; p < providers; ++p) {
    Provider prov{"p" + std::to_string(p + 1), {}};
    const int machines = pick_int(rng, 1, 2);
    for (int m = 0; m < machines; ++m) {
      prov.machines.push_back({"m" + std::to_string(m + 1), pick_int(rng, 3, 9), {}});
    }
    inst.providers.push_back(std::move(prov));
  }

  const int requests = pick_int(rng, 1, 2);
  for (int r = 0; r < requests; ++r) {
    const int src = pick_int(rng, 0, n - 2);
    const int dst = pick_int(rng, src + 1, n - 1);
    Request req{"r" + std::to_string(r + 1), src, dst, {"c1"}};
    if (pick_int(rng, 0, 2) == 0) req.circuits.push_back("c2");
    for (auto& prov : inst.providers) {
      for (auto& m : prov.machines) {
        for (const auto& c : req.circuits) {
          if (pick_int(rng, 0, 3)) {
            m.execution_time[{req.id, c}] = pick(rng, {0.002, 0.005, 0.008});
          }
        }
      }
    }
    inst.requests.push_back(std::move(req));
  }
  inst.validate();

  // Two scenarios: one (request, circuit, dimension) gets two values.
  std::vector<std::vector<DemandValues>> values;
  for (const auto& req : inst.requests) {
    std::vector<DemandValues> per;
    for (size_t c = 0; c < req.circuits.size(); ++c) {
      per.push_back({{pick(rng, {0.6, 0.75, 0.85, 0.9})},
                     {pick_int(rng, 0, 8)},
                     {pick(rng, {0.001, 0.004, 0.009})},
                     {}, {}, {}});
    }
    values.push_back(std::move(per));
  }
  const int vr = pick_int(rng, 0, requests - 1);
  auto& v = values[vr][0];
  const bool weighted = pick_int(rng, 0, 1);
  switch (pick_int(rng, 0, 2)) {
    case 0:
      v.fidelity = {0.7, pick(rng, {0.85, 0.92, 0.96})};
      if (weighted) v.fidelity_weights = {1, 3};
      break;
    case 1:
      v.qubits = {pick_int(rng, 0, 4), pick_int(rng, 5, 9)};
      if (weighted) v.qubit_weights = {2, 1};
      break;
    default:
      v.wait = {0.001, 0.009};
      if (weighted) v.wait_weights = {3, 1};
      break;
  }
  tc.space = build_scenario_space(values);
  return tc;
}

}  // namespace qcc::testing

#include <algorithm>
#include <random>
#include <stdexcept>

#include "qcc/experiments.hpp"
#include "qcc/qft_cost.hpp"

namespace qcc {

namespace {

// NSFNET 14-node backbone, 1-indexed node ids.
constexpr int kNsfnetFibers[][2] = {
    {1, 2},  {1, 3},  {1, 8},   {2, 3},   {2, 4},   {3, 6},   {4, 5},
    {4, 11}, {5, 6},  {5, 7},   {6, 10},  {6, 14},  {7, 8},   {8, 9},
    {9, 10}, {9, 12}, {9, 13},  {11, 12}, {11, 13}, {12, 14}, {13, 14},
};

// Illustrative source/destination pairs; the first is the published 2 -> 14.
constexpr int kPresetRequests[][2] = {
    {2, 14}, {1, 12}, {4, 10}, {3, 13}, {5, 9}, {7, 11},
};

// Relative speed of each (provider, machine); multiplies the QFT estimate.
constexpr double kMachineSlowdown[3][2] = {{0.6, 1.4}, {0.9, 1.8}, {1.1, 2.1}};

std::vector<int> prime_factors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// `count` distinct grid values in ascending order, drawn without replacement.
template <typename T>
std::vector<T> sample(const std::vector<T>& grid, int count, std::mt19937_64& rng) {
  if (count > static_cast<int>(grid.size())) {
    throw std::invalid_argument("more scenario values requested than the demand grid holds");
  }
  std::vector<size_t> index(grid.size());
  for (size_t i = 0; i < index.size(); ++i) index[i] = i;
  // Partial Fisher-Yates with an explicit draw so results do not depend on
  // the library's shuffle.
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<size_t> pick(i, index.size() - 1);
    std::swap(index[i], index[pick(rng)]);
  }
  std::vector<size_t> chosen(index.begin(), index.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  std::vector<T> out;
  for (size_t i : chosen) out.push_back(grid[i]);
  return out;
}

}  // namespace

DemandRanges preset_demand_ranges() {
  DemandRanges r;
  for (int i = 0; i <= 9; ++i) r.fidelity.push_back((55 + 5 * i) / 100.0);
  for (int q = 10; q <= 22; ++q) r.qubits.push_back(q);
  for (int i = 1; i <= 9; ++i) r.wait.push_back(i / 1000.0);
  return r;
}

Instance run_preset_defaults(int num_requests) {
  constexpr int kMaxRequests = sizeof(kPresetRequests) / sizeof(kPresetRequests[0]);
  if (num_requests < 0 || num_requests > kMaxRequests) {
    throw std::invalid_argument("preset supports 0.." + std::to_string(kMaxRequests) +
                                " requests");
  }
  Instance inst;
  for (int n = 1; n <= 14; ++n) inst.topology.add_node({std::to_string(n), 5.0, 151.0});
  for (const auto& f : kNsfnetFibers) {
    const bool published = f[0] == 2 && f[1] == 3;
    inst.topology.add_fiber(f[0] - 1, f[1] - 1, published ? 0.55 : 0.9, 0.8, 9, 60);
  }

  inst.costs.set_pair_cost(CostModel::kAny, CostModel::kAny, {10.0, 1.0, 200.0});
  inst.costs.set_qubit_cost(CostModel::kAny, CostModel::kAny, {1.68, 0.1, 7.0, 10.0});

  // 16383 needs 14 qubits; its transform sets the execution times.
  const auto profile = qft_gate_counts(qubits_for_number(16383));
  const double base_time = estimate_execution_time(profile);
  for (int p = 0; p < 3; ++p) {
    Provider prov{"p" + std::to_string(p + 1), {}};
    for (int m = 0; m < 2; ++m) prov.machines.push_back({"m" + std::to_string(m + 1), 30, {}});
    inst.providers.push_back(std::move(prov));
  }
  for (int r = 0; r < num_requests; ++r) {
    Request req{"r" + std::to_string(r + 1), kPresetRequests[r][0] - 1,
                kPresetRequests[r][1] - 1, {"qft"}};
    for (int p = 0; p < 3; ++p) {
      for (int m = 0; m < 2; ++m) {
        inst.providers[p].machines[m].execution_time[{req.id, "qft"}] =
            base_time * kMachineSlowdown[p][m];
      }
    }
    inst.requests.push_back(std::move(req));
  }
  inst.validate();
  return inst;
}

ScenarioSpace preset_scenarios(const Instance& instance, int num_scenarios,
                               std::uint64_t seed) {
  if (num_scenarios < 1) throw std::invalid_argument("need at least one scenario");
  const auto ranges = preset_demand_ranges();
  std::mt19937_64 rng(seed);

  // Slots: for each dimension, each (request, circuit).
  struct Axis {
    int request, circuit, dim;
  };
  std::vector<Axis> axes;
  for (int dim = 0; dim < 3; ++dim) {
    for (int r = 0; r < static_cast<int>(instance.requests.size()); ++r) {
      for (int c = 0; c < static_cast<int>(instance.requests[r].circuits.size()); ++c) {
        axes.push_back({r, c, dim});
      }
    }
  }
  std::vector<int> count(axes.size(), 1);
  const auto factors = prime_factors(num_scenarios);
  if (!factors.empty() && axes.empty()) {
    throw std::invalid_argument("instance has no circuits to vary");
  }
  for (size_t i = 0; i < factors.size(); ++i) count[i % axes.size()] *= factors[i];

  std::vector<std::vector<DemandValues>> values;
  for (const auto& req : instance.requests) values.emplace_back(req.circuits.size());
  // Draw every axis even when its count is 1 so the stream is stable.
  for (size_t a = 0; a < axes.size(); ++a) {
    auto& v = values[axes[a].request][axes[a].circuit];
    switch (axes[a].dim) {
      case 0: v.fidelity = sample(ranges.fidelity, count[a], rng); break;
      case 1: v.qubits = sample(ranges.qubits, count[a], rng); break;
      default: v.wait = sample(ranges.wait, count[a], rng); break;
    }
  }
  return build_scenario_space(values);
}

Instance saturation_chain() {
  Instance inst;
  for (int n = 1; n <= 3; ++n) inst.topology.add_node({std::to_string(n), 5.0, 151.0});
  inst.topology.add_arc(0, 1, 0.9, 0.8, 9, 60);
  inst.topology.add_arc(1, 2, 0.55, 0.8, 9, 60);
  inst.costs.set_pair_cost(CostModel::kAny, CostModel::kAny, {10.0, 1.0, 200.0});
  inst.costs.set_qubit_cost(CostModel::kAny, CostModel::kAny, {1.68, 0.1, 7.0, 10.0});
  inst.providers.push_back({"p1", {{"m1", 30, {}}}});
  inst.requests.push_back({"r1", 0, 2, {"qft"}});
  inst.validate();
  return inst;
}

}  // namespace qcc

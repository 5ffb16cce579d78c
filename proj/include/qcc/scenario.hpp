#pragma once

#include <string>
#include <vector>

#include "qcc/instance.hpp"

namespace qcc {

// Candidate demand values for one (request, circuit). Empty weight vectors
// mean uniform.
struct DemandValues {
  std::vector<double> fidelity;
  std::vector<int> qubits;
  std::vector<double> wait;
  std::vector<double> fidelity_weights;
  std::vector<double> qubit_weights;
  std::vector<double> wait_weights;

  bool operator==(const DemandValues&) const = default;
};

// One joint realization over all requests. Vectors are indexed
// [request][circuit].
struct Scenario {
  std::vector<std::vector<double>> fidelity;
  std::vector<std::vector<int>> qubits;
  std::vector<std::vector<double>> wait;
  double probability = 0.0;

  // Per-request fidelity demand: the largest over the request's circuits
  // (0 when the request has none).
  double request_fidelity(int request) const;
};

struct ScenarioSpace {
  std::vector<Scenario> scenarios;
  // Generating value sets, [request][circuit].
  std::vector<std::vector<DemandValues>> values;

  int size() const { return static_cast<int>(scenarios.size()); }
  const Scenario& operator[](int s) const { return scenarios.at(s); }
};

// Cartesian product over (request, circuit) of fidelity x qubits x wait, with
// the first request's first circuit most significant and, within a circuit,
// fidelity before qubits before wait. Probabilities are products of the
// normalized component weights.
ScenarioSpace build_scenario_space(
    const std::vector<std::vector<DemandValues>>& values);

// A space holding exactly one scenario with probability 1.
ScenarioSpace single_scenario_space(const Scenario& scenario);

// Scenario file: `values <request> <circuit> fidelity=a,b qubits=.. wait=..`
// with optional `fidelity_weights=`, `qubit_weights=`, `wait_weights=`. Every
// circuit of every request needs exactly one line.
ScenarioSpace parse_scenarios(const std::string& text, const Instance& instance);
std::string serialize_scenarios(const ScenarioSpace& space,
                                const Instance& instance);

// Probability-weighted means (qubits rounded up) as a single scenario.
Scenario expected_scenario(const ScenarioSpace& space);

}  // namespace qcc

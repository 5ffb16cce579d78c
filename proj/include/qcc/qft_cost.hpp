#pragma once

#include <cstdint>

namespace qcc {

struct CircuitProfile {
  int qubits = 1;
  int hadamard_count = 0;
  int controlled_rotation_count = 0;
  int swap_count = 0;
  double estimated_time = 0.0;  // seconds, filled by estimate_execution_time
};

// Seconds per gate of each kind. The defaults put a 14-qubit transform at
// about 4.3 ms, inside the 1-9 ms waiting-time range used by the preset.
struct GateTimes {
  double hadamard = 2e-5;
  double controlled_rotation = 4e-5;
  double swap = 6e-5;
};

// Bit length of n, and 1 for n in {0, 1}.
int qubits_for_number(std::uint64_t n);

// Gate counts of the textbook QFT on l qubits: a Hadamard per qubit, a
// controlled rotation per qubit pair, and the final reversal swaps.
CircuitProfile qft_gate_counts(int l);

double estimate_execution_time(const CircuitProfile& profile,
                               const GateTimes& times = {});

}  // namespace qcc

#include "qcc/qft_cost.hpp"

#include <stdexcept>

namespace qcc {

int qubits_for_number(std::uint64_t n) {
  int bits = 1;
  while (n >>= 1) ++bits;
  return bits;
}

CircuitProfile qft_gate_counts(int l) {
  if (l < 1) throw std::domain_error("a QFT needs at least one qubit");
  CircuitProfile p;
  p.qubits = l;
  p.hadamard_count = l;
  p.controlled_rotation_count = l * (l - 1) / 2;
  p.swap_count = l / 2;
  return p;
}

double estimate_execution_time(const CircuitProfile& profile,
                               const GateTimes& times) {
  if (times.hadamard < 0 || times.controlled_rotation < 0 || times.swap < 0) {
    throw std::domain_error("negative gate time");
  }
  return profile.hadamard_count * times.hadamard +
         profile.controlled_rotation_count * times.controlled_rotation +
         profile.swap_count * times.swap;
}

}  // namespace qcc

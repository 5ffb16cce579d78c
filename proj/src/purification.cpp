#include "qcc/purification.hpp"

#include <stdexcept>
#include <string>

namespace qcc {

namespace {

void check_fidelity(double f, const char* what) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in (0,1], got " +
                            std::to_string(f));
  }
}

}  // namespace

double purify_pair(double b1, double b2) {
  check_fidelity(b1, "fidelity");
  check_fidelity(b2, "fidelity");
  const double agree = b1 * b2;
  return agree / (agree + (1.0 - b1) * (1.0 - b2));
}

double purify_chain(double base, int pair_count) {
  check_fidelity(base, "base fidelity");
  if (pair_count < 1) throw std::domain_error("pair_count must be >= 1");
  double achieved = base;
  for (int round = 1; round < pair_count; ++round) {
    achieved = purify_pair(achieved, base);
  }
  return achieved;
}

std::optional<int> min_pairs_for_target(double base, double target, int max_pairs) {
  check_fidelity(base, "base fidelity");
  check_fidelity(target, "target fidelity");
  if (max_pairs < 1) throw std::domain_error("max_pairs must be >= 1");
  if (base >= target - kFidelitySlack) return 1;
  // At or below 0.5 each round keeps or lowers the fidelity.
  if (base <= 0.5) return std::nullopt;
  double achieved = base;
  for (int k = 2; k <= max_pairs; ++k) {
    achieved = purify_pair(achieved, base);
    if (achieved >= target - kFidelitySlack) return k;
  }
  return std::nullopt;
}

}  // namespace qcc

#pragma once

#include <optional>

namespace qcc {

// Slack used when comparing an achieved fidelity against a target.
inline constexpr double kFidelitySlack = 1e-9;

// Fidelity after purifying two pairs of fidelities b1 and b2. Throws
// std::domain_error unless both lie in (0,1].
double purify_pair(double b1, double b2);

// Fidelity after folding `pair_count` pairs of equal fidelity `base` one at a
// time (pair_count - 1 rounds).
double purify_chain(double base, int pair_count);

// Smallest k <= max_pairs with purify_chain(base, k) >= target, or nullopt.
std::optional<int> min_pairs_for_target(double base, double target, int max_pairs);

}  // namespace qcc

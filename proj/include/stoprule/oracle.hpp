#pragma once

#include "stoprule/variants.hpp"

#include <cstdint>

namespace stoprule::oracle {

/// Exact expected payoff of the threshold-k rule, computed from the game
/// itself (exhaustive sweep over arrival orders and any auxiliary
/// randomness) rather than from the recurrence.  pre: 2 <= n <= 10,
/// 0 <= threshold <= n; multicriteria supports m <= 2 here.
double enumerate_exact(VariantId id, Index n, const VariantParams& params,
                       Index threshold);

/// Exact success probability of the two-cutoff rule (r, s) over all n!
/// orders.  pre: 2 <= n <= 10, 0 <= r <= s <= n.
double enumerate_two_threshold(Index n, Index r, Index s);

/// Monte Carlo estimate of a threshold rule's expected payoff.
struct SimReport {
  VariantId variant = VariantId::classical;
  Index n = 0;
  long trials = 0;
  std::uint64_t seed = 0;
  double estimate = 0;   ///< sample mean
  double std_error = 0;  ///< sample standard deviation / sqrt(trials)
};

/// Simulates the game under the threshold-k rule.  Trial t draws from an
/// independent stream derived from (seed, t), so results are reproducible
/// and independent of batching.  pre: n >= 2, 0 <= threshold <= n,
/// trials >= 10000.
SimReport simulate(VariantId id, Index n, const VariantParams& params,
                   Index threshold, long trials, std::uint64_t seed);

}  // namespace stoprule::oracle

#pragma once

#include "stoprule/types.hpp"

namespace stoprule {

/// Optimal pair of cutoffs for the rule "reject the first r candidates, then
/// accept a relative-best candidate; after position s also accept a
/// relative-second-best", with success meaning the accepted candidate ranks
/// in the global top two.
struct TwoThresholdResult {
  Index n = 0;
  Index r = 0;            ///< first cutoff (argmax of the value table)
  Index s = 0;            ///< second cutoff (regime switch position)
  double payoff = 0;      ///< success probability of the (r, s) rule
  Vxd value_table;        ///< value of starting at k, k in [0, n]
};

/// Success probability of stopping on a relative-second-best at position k.
/// pre: n >= 2, 0 <= k <= n.
double two_threshold_stop_second(Index n, Index k);

/// Success probability of stopping on a relative-best at position k.
double two_threshold_stop_best(Index n, Index k);

/// Value of the accept-either rule from position k onward: take the next
/// candidate that is relative-best or relative-second-best.
double two_threshold_accept_either(Index n, Index k);

/// Solves the two-cutoff problem exactly.  s is the largest k whose
/// second-best stop value still trails the best-only continuation; r is the
/// smallest argmax of the value table.  pre: n >= 5.
/// errors: missing or non-suffix regime switch -> DiagnosticError.
TwoThresholdResult solve_two_threshold(Index n);

/// Limits of r/n, s/n and the success probability.
struct TwoThresholdLimits {
  double r = 0;
  double s = 0;
  double payoff = 0;
};

TwoThresholdLimits two_threshold_asymptotics();

/// Limiting shape of the value table: x^2 - 2x log x - 2x log(3/2) up to
/// x = 2/3, then 2x - 2x^2; both branches meet at 4/9.
double two_threshold_limit_curve(double x);

/// Optimality gap of the two-cutoff rule.  For n <= 12 compares the solver's
/// pair against exhaustive enumeration of every (r, s) pair over all n!
/// orders; for larger n compares against an unconstrained dynamic program
/// that may stop on either rank anywhere.  pre: n >= 5.
/// errors: enumeration finding a strictly better pair -> DiagnosticError.
double verify_two_threshold_optimality(Index n);

}  // namespace stoprule

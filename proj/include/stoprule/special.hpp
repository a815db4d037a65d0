#pragma once

namespace stoprule::special {

/// Branch selector for the Lambert W function.
enum class BranchId {
  principal,  ///< W0, real on [-1/e, inf)
  minus_one   ///< W-1, real on [-1/e, 0)
};

/// Lambert W: solves w * exp(w) = x on the requested branch.
///
/// Halley iteration from a branch-specific initial guess; converges to a
/// relative step below 1e-15 in well under the iteration cap everywhere on
/// the real domain, including the fold point x = -1/e.
double lambert_w(BranchId branch, double x);

/// Digamma function psi(x) = d/dx log Gamma(x) for x > 0.
///
/// Recurrence shift to x >= 8 followed by the asymptotic series; absolute
/// error below 1e-12 on (0, 1e6).
double digamma(double x);

/// Exponential integral Ei(x) for x != 0.
///
/// Power series on (-3.5, 0) and (0, 40]; continued fraction below -3.5
/// (the alternating series cancels too much there to hold 1e-12 relative),
/// asymptotic series above 40.  E1(t) = -Ei(-t).
double expint_ei(double x);

}  // namespace stoprule::special

#pragma once

#include "stoprule/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace stoprule {

/// One-step backward recurrence F(k) = G(k) + H(k) * F(k+1), F(n) = mu.
template <typename Scalar>
struct RecurrenceSpec {
  Index n = 0;                            ///< horizon, n >= 2
  Scalar mu = Scalar(0);                  ///< terminal value F(n)
  std::function<Scalar(Index)> G;         ///< immediate term, defined on 0 <= k < n
  std::function<Scalar(Index)> H;         ///< continuation factor, defined on 0 <= k < n
  std::function<double(double)> g_limit;  ///< limit of n * G(floor(n x)); may be empty
  std::function<double(double)> h_limit;  ///< limit of n * (1 - H(floor(n x))); may be empty
};

/// Stopping model feeding the threshold rules: p(k) is the probability that
/// step k presents a stoppable observation, stop_payoff(k) the expected
/// payoff of accepting it.  Both are defined on 1 <= k <= n.
template <typename Scalar>
struct PayoffModel {
  Index n = 0;
  std::function<Scalar(Index)> p;
  std::function<Scalar(Index)> stop_payoff;
};

/// Values F(0..n) of a backward pass.
template <typename Scalar>
struct ValueTable {
  Index n = 0;
  Vx<Scalar> values;  ///< n+1 entries, values[k] = F(k)
};

/// How the reported threshold was certified.
enum class CertifiedBy {
  argmax,                ///< only the argmax rule applied (no crossing found)
  continuation_crossing, ///< crossing rule applied; argmax differed by one
  both_agree             ///< argmax and crossing picked the same index
};

inline const char* to_string(CertifiedBy c) {
  switch (c) {
    case CertifiedBy::argmax: return "argmax";
    case CertifiedBy::continuation_crossing: return "continuation-crossing";
    default: return "both-agree";
  }
}

/// Certified threshold plus its value.
template <typename Scalar>
struct ThresholdResult {
  Index kappa = 0;        ///< certified threshold in [0, n]
  Scalar payoff = 0;      ///< objective value at kappa
  CertifiedBy certified_by = CertifiedBy::both_agree;
  bool no_crossing = false;  ///< set when F(k) <= stop_payoff(k) for every k >= 1
};

/// Runs the backward recurrence and returns the full table.
/// Throws DiagnosticError if any intermediate value is non-finite.
template <typename Scalar>
ValueTable<Scalar> solve_backward(const RecurrenceSpec<Scalar>& spec) {
  if (spec.n < 2) throw ValidationError("solve_backward: n must be >= 2");
  if (!spec.G || !spec.H) throw ValidationError("solve_backward: G and H must be set");
  ValueTable<Scalar> table;
  table.n = spec.n;
  table.values.resize(spec.n + 1);
  table.values[spec.n] = spec.mu;
  for (Index k = spec.n - 1; k >= 0; --k) {
    const Scalar v = spec.G(k) + spec.H(k) * table.values[k + 1];
    if (!std::isfinite(static_cast<double>(v)))
      throw DiagnosticError("solve_backward: non-finite value at k=" + std::to_string(k));
    table.values[k] = v;
  }
  return table;
}

namespace detail {

/// Shared threshold extraction.  `crossing` feeds the continuation-crossing
/// rule against stop_payoff, `objective` feeds the argmax rule; core callers
/// pass the same table twice, variant layers pass the from-start composite
/// as the objective.
template <typename Scalar>
ThresholdResult<Scalar> extract_threshold(const Vx<Scalar>& crossing,
                                          const Vx<Scalar>& objective,
                                          const std::function<Scalar(Index)>& stop_payoff) {
  const Index n = crossing.size() - 1;
  Index ka = 0;
  for (Index k = 1; k <= n; ++k)
    if (objective[k] > objective[ka]) ka = k;  // strict: ties keep the smallest index

  // The largest k with F(k) > stop(k) automatically satisfies the suffix
  // condition F(j) <= stop(j) for all j > k.  Index 0 is not inspected: the
  // recurrences are evaluated there but some variants degenerate at k = 0.
  Index kc = -1;
  for (Index k = n; k >= 1; --k)
    if (crossing[k] > stop_payoff(k)) { kc = k; break; }

  ThresholdResult<Scalar> result;
  if (kc < 0) {
    result.kappa = 0;
    result.payoff = objective[0];
    result.certified_by = CertifiedBy::argmax;
    result.no_crossing = true;
    return result;
  }
  if (std::abs(ka - kc) > 1)
    throw DiagnosticError("optimal_threshold: certification rules disagree (argmax " +
                          std::to_string(ka) + ", crossing " + std::to_string(kc) + ")");
  result.kappa = kc;
  result.payoff = objective[kc];
  result.certified_by = (ka == kc) ? CertifiedBy::both_agree : CertifiedBy::continuation_crossing;
  return result;
}

}  // namespace detail

/// Certifies the optimal threshold of a solved table by both rules:
/// the smallest argmax of the values and the largest k whose continuation
/// value still exceeds the stop payoff.  Disagreement beyond one index is a
/// diagnostic error; absence of any crossing yields kappa = 0 with a warning
/// flag.
template <typename Scalar>
ThresholdResult<Scalar> optimal_threshold(const ValueTable<Scalar>& table,
                                          const PayoffModel<Scalar>& payoff) {
  if (table.values.size() != table.n + 1)
    throw ValidationError("optimal_threshold: malformed table");
  return detail::extract_threshold<Scalar>(table.values, table.values, payoff.stop_payoff);
}

/// Value of the overall optimal (not necessarily threshold) rule:
///   E(k) = p(k+1) * max(stop_payoff(k+1), E(k+1)) + (1 - p(k+1)) * E(k+1)
/// with E(n) = mu.  Returns E(0).
template <typename Scalar>
Scalar solve_optimal(const PayoffModel<Scalar>& payoff, Scalar mu) {
  if (payoff.n < 2) throw ValidationError("solve_optimal: n must be >= 2");
  Scalar e = mu;
  for (Index k = payoff.n - 1; k >= 0; --k) {
    const Scalar p = payoff.p(k + 1);
    e += p * (std::max(payoff.stop_payoff(k + 1), e) - e);
    if (!std::isfinite(static_cast<double>(e)))
      throw DiagnosticError("solve_optimal: non-finite value at k=" + std::to_string(k));
  }
  return e;
}

/// |solve_optimal - max_k solve_backward|: zero (to roundoff) exactly when a
/// threshold rule attains the overall optimum.
template <typename Scalar>
Scalar verify_threshold_optimality(const PayoffModel<Scalar>& payoff,
                                   const RecurrenceSpec<Scalar>& spec) {
  const ValueTable<Scalar> table = solve_backward(spec);
  const Scalar best = table.values.maxCoeff();
  const Scalar optimal = solve_optimal(payoff, spec.mu);
  return std::abs(optimal - best);
}

/// Streaming variant of solve_backward + optimal_threshold for large n:
/// one backward pass, O(1) state, no table kept.  `objective(k, F_k)` maps a
/// continuation value to the quantity being maximized (identity for plain
/// variants, the from-start composite otherwise).
template <typename Scalar>
ThresholdResult<Scalar> scan_threshold(const RecurrenceSpec<Scalar>& spec,
                                       const std::function<Scalar(Index)>& stop_payoff,
                                       const std::function<Scalar(Index, Scalar)>& objective) {
  if (spec.n < 2) throw ValidationError("scan_threshold: n must be >= 2");
  Scalar f = spec.mu;
  Scalar obj = objective(spec.n, f);
  Index ka = spec.n;
  Scalar best = obj;
  Index kc = -1;
  Scalar at_kc = 0;
  if (f > stop_payoff(spec.n)) { kc = spec.n; at_kc = obj; }
  for (Index k = spec.n - 1; k >= 0; --k) {
    f = spec.G(k) + spec.H(k) * f;
    if (!std::isfinite(static_cast<double>(f)))
      throw DiagnosticError("scan_threshold: non-finite value at k=" + std::to_string(k));
    obj = objective(k, f);
    if (obj >= best) { best = obj; ka = k; }  // >=: downward scan keeps the smallest index
    if (k >= 1 && kc < 0 && f > stop_payoff(k)) { kc = k; at_kc = obj; }
  }
  ThresholdResult<Scalar> result;
  if (kc < 0) {
    result.kappa = 0;
    result.payoff = obj;  // objective at k = 0, the last one computed
    result.certified_by = CertifiedBy::argmax;
    result.no_crossing = true;
    return result;
  }
  if (std::abs(ka - kc) > 1)
    throw DiagnosticError("scan_threshold: certification rules disagree (argmax " +
                          std::to_string(ka) + ", crossing " + std::to_string(kc) + ")");
  result.kappa = kc;
  result.payoff = at_kc;
  result.certified_by = (ka == kc) ? CertifiedBy::both_agree : CertifiedBy::continuation_crossing;
  return result;
}

}  // namespace stoprule

#pragma once

#include "stoprule/backward.hpp"

#include <functional>
#include <vector>

namespace stoprule {

/// Candidate limit shape f on [0, 1] plus an optional analytic second
/// derivative.  When f_pp is empty, consumers fall back to central
/// differences with step 1e-5.
struct LimitCurve {
  std::function<double(double)> f;
  std::function<double(double)> f_pp;
};

/// Family of finite problems indexed by n, used to study behaviour along a
/// sequence of sizes.
using SpecFamily = std::function<RecurrenceSpec<double>(Index)>;

/// Quantities controlling how close a finite recurrence is to its candidate
/// ODE limit.  All entries should shrink with n when the limit is genuine,
/// except max_abs_H which only needs a uniform bound.
struct HypothesisReport {
  Index n = 0;
  double max_abs_H = 0;      ///< max_k |H_n(k)|, k in [0, n-1]
  double terminal_drift = 0; ///< |G(n-1) + mu H(n-1) - mu|
  double v_sum = 0;          ///< (1/n) sum_{k=1}^{n-2} |V_n(k)|
  double m_sum = 0;          ///< sum_{k=1}^{n-2} M_n(k) / n^2
  double boundary_drift = 0; ///< |G(0) + f(0) H(0) - f(0)|
};

/// Sampled distance between a value table and a limit curve.
struct GapReport {
  Index n = 0;
  double sup_gap = 0;      ///< max over k in [0, n] of |F_n(k) - f(k/n)|
  double interior_gap = 0; ///< same max restricted to k/n in [0.05, 0.95]
};

/// Evaluates the consistency quantities for one problem size.
/// V_n(k) = (n G(k) - g((k+1)/n)) - f((k+1)/n) (n (1 - H(k)) - h((k+1)/n));
/// M_n(k) = max |f''| over [k/n, (k+1)/n], sampled at five points.
/// pre: spec.n >= 3; spec.g_limit and spec.h_limit set; curve.f set.
HypothesisReport check_hypotheses_at(const RecurrenceSpec<double>& spec,
                                     const LimitCurve& curve);

/// check_hypotheses_at over a list of sizes; entries keep input order and
/// the sizes are processed in parallel subject to STOPRULE_THREADS.
std::vector<HypothesisReport> check_hypotheses(const SpecFamily& family,
                                               const LimitCurve& curve,
                                               const std::vector<Index>& n_list);

/// Sup-norm distance between a solved table and the curve, overall and away
/// from the endpoints.
GapReport measure_gap(const ValueTable<double>& table, const LimitCurve& curve);

}  // namespace stoprule

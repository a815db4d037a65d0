#include "stoprule/diagnostics.hpp"

#include "stoprule/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace stoprule {

namespace {

/// |f''| via the analytic hook when present, else central differences.
double abs_f_pp(const LimitCurve& curve, double x) {
  if (curve.f_pp) return std::abs(curve.f_pp(x));
  const double h = 1e-5;
  const double lo = std::max(x - h, 0.0), hi = std::min(x + h, 1.0);
  const double mid = 0.5 * (lo + hi), step = 0.5 * (hi - lo);
  return std::abs((curve.f(mid + step) - 2.0 * curve.f(mid) + curve.f(mid - step)) /
                  (step * step));
}

}  // namespace

HypothesisReport check_hypotheses_at(const RecurrenceSpec<double>& spec,
                                     const LimitCurve& curve) {
  if (spec.n < 3) throw ValidationError("check_hypotheses_at: n must be >= 3");
  if (!spec.g_limit || !spec.h_limit)
    throw ValidationError("check_hypotheses_at: spec must carry g_limit and h_limit");
  if (!curve.f) throw ValidationError("check_hypotheses_at: curve.f must be set");

  const Index n = spec.n;
  const double dn = static_cast<double>(n);
  HypothesisReport rep;
  rep.n = n;

  for (Index k = 0; k < n; ++k)
    rep.max_abs_H = std::max(rep.max_abs_H, std::abs(spec.H(k)));

  rep.terminal_drift =
      std::abs(spec.G(n - 1) + spec.mu * spec.H(n - 1) - spec.mu);

  const double f0 = curve.f(0.0);
  rep.boundary_drift = std::abs(spec.G(0) + f0 * spec.H(0) - f0);

  double v_acc = 0, m_acc = 0;
  for (Index k = 1; k <= n - 2; ++k) {
    const double x = (static_cast<double>(k) + 1.0) / dn;
    const double v = (dn * spec.G(k) - spec.g_limit(x)) -
                     curve.f(x) * (dn * (1.0 - spec.H(k)) - spec.h_limit(x));
    v_acc += std::abs(v);
    const double a = static_cast<double>(k) / dn;
    double m = 0;
    for (int s = 0; s < 5; ++s)
      m = std::max(m, abs_f_pp(curve, a + (s / 4.0) / dn));
    m_acc += m;
  }
  rep.v_sum = v_acc / dn;
  rep.m_sum = m_acc / (dn * dn);
  return rep;
}

std::vector<HypothesisReport> check_hypotheses(const SpecFamily& family,
                                               const LimitCurve& curve,
                                               const std::vector<Index>& n_list) {
  std::vector<HypothesisReport> out(n_list.size());
  detail::parallel_for_index(static_cast<Index>(n_list.size()), [&](Index i) {
    out[static_cast<std::size_t>(i)] =
        check_hypotheses_at(family(n_list[static_cast<std::size_t>(i)]), curve);
  });
  return out;
}

GapReport measure_gap(const ValueTable<double>& table, const LimitCurve& curve) {
  if (!curve.f) throw ValidationError("measure_gap: curve.f must be set");
  const Index n = table.n;
  GapReport rep;
  rep.n = n;
  for (Index k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    const double gap = std::abs(table.values[k] - curve.f(x));
    rep.sup_gap = std::max(rep.sup_gap, gap);
    if (x >= 0.05 && x <= 0.95) rep.interior_gap = std::max(rep.interior_gap, gap);
  }
  return rep;
}

}  // namespace stoprule

#include "stoprule/search.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace stoprule {

ArgmaxResult find_argmax(const std::function<double(double)>& f, double lo, double hi,
                         int scan_points, double tol) {
  if (!(hi > lo)) throw ValidationError("find_argmax: need hi > lo");
  if (scan_points < 8) throw ValidationError("find_argmax: scan_points must be >= 8");

  const double span = hi - lo;
  std::vector<double> vals(scan_points);
  int best_i = 0;
  for (int i = 0; i < scan_points; ++i) {
    vals[i] = f(lo + span * i / double(scan_points - 1));
    if (vals[i] > vals[best_i]) best_i = i;
  }
  // A curved maximum ties with at most a couple of neighbouring samples; a
  // tie band covering a sizeable part of the span means the objective is
  // flat there and no argmax is meaningful.
  const double band = 1e-12 * (1.0 + std::abs(vals[best_i]));
  int tie_lo = best_i, tie_hi = best_i;
  while (tie_lo > 0 && vals[tie_lo - 1] >= vals[best_i] - band) --tie_lo;
  while (tie_hi < scan_points - 1 && vals[tie_hi + 1] >= vals[best_i] - band) ++tie_hi;
  if ((tie_hi - tie_lo) > 0.05 * (scan_points - 1)) {
    const auto at = [&](int i) { return lo + span * i / double(scan_points - 1); };
    throw DiagnosticError("find_argmax: flat maximum on [" + std::to_string(at(tie_lo)) + ", " +
                          std::to_string(at(tie_hi)) + "]");
  }

  double a = lo + span * std::max(0, best_i - 1) / double(scan_points - 1);
  double b = lo + span * std::min(scan_points - 1, best_i + 1) / double(scan_points - 1);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  ArgmaxResult result;
  result.x = 0.5 * (a + b);
  result.value = f(result.x);

  // Value comparisons localize a quadratic maximum only to about sqrt(eps),
  // so polish with parabolic vertex fits: the vertex of the fit through
  // x +- h is insensitive to that floor and lands within ~1e-11.
  for (const double h : {1e-5 * span, 3e-6 * span}) {
    const double xm = std::min(hi - h, std::max(lo + h, result.x));
    const double fl = f(xm - h), fm = f(xm), fr = f(xm + h);
    const double curve = fl - 2.0 * fm + fr;
    if (!(curve < 0.0)) continue;  // no concave fit (boundary or noise): keep current
    const double vertex = xm + 0.5 * h * (fl - fr) / curve;
    if (std::abs(vertex - xm) > h) continue;
    result.x = vertex;
    result.value = f(vertex);
  }
  return result;
}

double find_crossing(const std::function<double(double)>& f,
                     const std::function<double(double)>& target, double lo, double hi,
                     int scan_points, double tol) {
  if (!(hi > lo)) throw ValidationError("find_crossing: need hi > lo");
  if (scan_points < 8) throw ValidationError("find_crossing: scan_points must be >= 8");

  auto d = [&](double x) { return f(x) - target(x); };
  const double span = hi - lo;

  // full scan first: the crossing must be unique
  std::vector<std::pair<double, double>> brackets;
  double a = lo, da = d(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double b = lo + span * i / double(scan_points - 1);
    const double db = d(b);
    if (da == 0.0 || (da > 0.0) != (db > 0.0)) brackets.emplace_back(a, b);
    a = b;
    da = db;
  }
  if (brackets.size() != 1) {
    std::string where;
    for (const auto& [ba, bb] : brackets) where += " " + std::to_string(0.5 * (ba + bb));
    throw DiagnosticError("find_crossing: expected exactly one sign change, found " +
                          std::to_string(brackets.size()) +
                          (brackets.empty() ? "" : " near" + where));
  }

  auto [la, lb] = brackets.front();
  double va = d(la);
  if (va == 0.0) return la;
  while (lb - la > tol) {
    const double m = 0.5 * (la + lb);
    const double vm = d(m);
    if (vm == 0.0) return m;
    if ((vm > 0.0) == (va > 0.0)) { la = m; va = vm; }
    else lb = m;
  }
  return 0.5 * (la + lb);
}

}  // namespace stoprule

#pragma once

#include "stoprule/types.hpp"

#include <functional>

namespace stoprule {

struct ArgmaxResult {
  double x = 0.0;
  double value = 0.0;
};

/// Locates the maximum of a continuous unimodal-enough function: coarse scan
/// over `scan_points`, golden-section refinement around the best sample down
/// to an interval of width `tol`, then parabolic vertex polish (value
/// comparisons alone cannot place a quadratic maximum better than sqrt(eps);
/// the vertex fit recovers ~1e-11 in x).  A flat maximum (scan samples tied
/// within 1e-12 across more than 5% of the span) has no meaningful argmax
/// and raises DiagnosticError.
ArgmaxResult find_argmax(const std::function<double(double)>& f, double lo, double hi,
                         int scan_points = 10001, double tol = 1e-10);

/// Locates the unique crossing of f and `target` on [lo, hi]: scans
/// `scan_points` for sign changes of f - target, requires exactly one, and
/// refines it by bisection to `tol`.  Zero or multiple sign changes raise
/// DiagnosticError listing the crossings detected.
double find_crossing(const std::function<double(double)>& f,
                     const std::function<double(double)>& target, double lo, double hi,
                     int scan_points = 10001, double tol = 1e-12);

}  // namespace stoprule

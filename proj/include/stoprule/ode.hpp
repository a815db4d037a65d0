#pragma once

#include "stoprule/types.hpp"

#include <functional>

namespace stoprule {

/// Scaling limit of the backward recurrence: y'(x) = y(x) h(x) - g(x) on
/// (0, 1], integrated backward from the terminal value y(1).
struct OdeProblem {
  std::function<double(double)> g;  ///< immediate-term density
  std::function<double(double)> h;  ///< continuation-loss density, positive
  double terminal = 0.0;            ///< y(1)
  bool singular_at_one = false;     ///< h blows up at x = 1
};

/// A function tabulated on an ascending grid, evaluated by cubic (4-point
/// Lagrange) interpolation; exact at the nodes.  Queries outside the grid
/// are clamped to the end nodes.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(Vxd x, Vxd y);

  double operator()(double x) const;
  double x_min() const { return x_[0]; }
  double x_max() const { return x_[x_.size() - 1]; }
  const Vxd& grid() const { return x_; }
  const Vxd& values() const { return y_; }

 private:
  Vxd x_, y_;
};

/// Integrates the problem backward with classic RK4 on [delta, 1] using
/// `grid_points` uniform nodes.  Backward is the damped direction (h > 0),
/// so terminal perturbations shrink as the integration proceeds.  When the
/// problem is singular at 1 the integration starts at 1 - 1e-6 instead and
/// the approach segment down to 1 - 1e-2 uses geometrically graded steps,
/// keeping |step * h| small where h is large.
SampledFunction integrate_ode(const OdeProblem& problem, int grid_points = 20001,
                              double delta = 1e-4);

}  // namespace stoprule

#include "stoprule/ode.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stoprule {

SampledFunction::SampledFunction(Vxd x, Vxd y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.size() < 4)
    throw ValidationError("SampledFunction: need matching grids with >= 4 nodes");
  for (Index i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw ValidationError("SampledFunction: grid must be ascending");
}

double SampledFunction::operator()(double x) const {
  const Index m = x_.size();
  if (x <= x_[0]) return y_[0];
  if (x >= x_[m - 1]) return y_[m - 1];
  // i = first node >= x; stencil of 4 nodes centered on the segment [i-1, i]
  const double* begin = x_.data();
  Index i = std::lower_bound(begin, begin + m, x) - begin;
  Index lo = std::clamp<Index>(i - 2, 0, m - 4);
  double result = 0.0;
  for (Index a = lo; a < lo + 4; ++a) {
    double term = y_[a];
    for (Index b = lo; b < lo + 4; ++b)
      if (b != a) term *= (x - x_[b]) / (x_[a] - x_[b]);
    result += term;
  }
  return result;
}

namespace {

// One RK4 step of y' = y h - g from (x1, y1) backward to x1 - step.
double rk4_back(const OdeProblem& p, double x1, double y1, double step) {
  auto phi = [&p](double x, double y) { return y * p.h(x) - p.g(x); };
  const double k1 = phi(x1, y1);
  const double k2 = phi(x1 - 0.5 * step, y1 - 0.5 * step * k1);
  const double k3 = phi(x1 - 0.5 * step, y1 - 0.5 * step * k2);
  const double k4 = phi(x1 - step, y1 - step * k3);
  return y1 - step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

SampledFunction integrate_ode(const OdeProblem& problem, int grid_points, double delta) {
  if (!problem.g || !problem.h) throw ValidationError("integrate_ode: g and h must be set");
  if (grid_points < 100) throw ValidationError("integrate_ode: grid_points must be >= 100");
  if (!(delta > 0.0 && delta < 0.5)) throw ValidationError("integrate_ode: delta out of range");

  std::vector<double> xs;
  const double uniform_hi = problem.singular_at_one ? 1.0 - 1e-2 : 1.0;
  xs.reserve(grid_points + 2500);
  for (int i = 0; i < grid_points; ++i)
    xs.push_back(delta + (uniform_hi - delta) * i / double(grid_points - 1));
  if (problem.singular_at_one) {
    // graded approach: distance to 1 shrinks geometrically from 1e-2 to 1e-6
    const int m = 2400;
    const double ratio = std::pow(1e-6 / 1e-2, 1.0 / m);
    double s = 1e-2;
    for (int i = 1; i <= m; ++i) {
      s *= ratio;
      xs.push_back(1.0 - s);
    }
  }

  const Index count = static_cast<Index>(xs.size());
  Vxd x(count), y(count);
  for (Index i = 0; i < count; ++i) x[i] = xs[i];

  y[count - 1] = problem.terminal;
  for (Index i = count - 1; i >= 1; --i) {
    const double step = x[i] - x[i - 1];
    y[i - 1] = rk4_back(problem, x[i], y[i], step);
    if (!std::isfinite(y[i - 1]))
      throw DiagnosticError("integrate_ode: non-finite value at x=" + std::to_string(x[i - 1]));
  }
  return SampledFunction(std::move(x), std::move(y));
}

}  // namespace stoprule

#include "stoprule/special.hpp"

#include "stoprule/types.hpp"

#include <cmath>
#include <limits>

namespace stoprule::special {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

double halley_w(double x, double w) {
  // Halley step for f(w) = w e^w - x.  The update is well conditioned on
  // both branches as long as w stays away from -1 by more than roundoff,
  // which the callers guarantee: arguments within p < 1e-5 of the fold are
  // answered by the fold series directly and never reach this loop.
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) return w;
  }
  return w;
}

// p = sqrt(2(e x + 1)), the fold-series variable; e*x rounds to slightly
// below -1 when x is the double nearest -1/e, so clamp before the sqrt.
double fold_p(double x) {
  const double q = 2.0 * (std::exp(1.0) * x + 1.0);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

}  // namespace

double lambert_w(BranchId branch, double x) {
  const double inv_e = std::exp(-1.0);
  if (!(x >= -inv_e)) {
    if (x < -inv_e && x > -inv_e - 1e-12) x = -inv_e;  // absorb roundoff at the fold
    else throw ValidationError("lambert_w: argument below -1/e");
  }

  if (branch == BranchId::principal) {
    if (x == 0.0) return 0.0;
    double w;
    if (x < -0.25) {
      // series around the fold point w = -1 + p - p^2/3 + 11/72 p^3 + ...
      const double p = fold_p(x);
      w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
      if (p < 1e-5) return w;  // series already below 1e-15; Halley degenerates here
    } else if (x < 3.0) {
      // log1p(x) tracks W0 within 0.35 on [-0.25, 3]; Halley closes the rest
      w = std::log1p(x);
    } else {
      const double l1 = std::log(x), l2 = std::log(std::log(x));
      w = l1 - l2 + l2 / l1;
    }
    return halley_w(x, w);
  }

  // minus_one branch: real only for x in [-1/e, 0)
  if (!(x < 0.0)) throw ValidationError("lambert_w: branch -1 needs x in [-1/e, 0)");
  double w;
  if (x < -0.2) {
    const double p = fold_p(x);
    w = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p;
    if (p < 1e-5) return w;
  } else {
    const double l1 = std::log(-x), l2 = std::log(-std::log(-x));
    w = l1 - l2 + l2 / l1;
  }
  return halley_w(x, w);
}

double digamma(double x) {
  if (!(x > 0.0)) throw ValidationError("digamma: requires x > 0");
  double result = 0.0;
  while (x < 8.0) {  // psi(x) = psi(x+1) - 1/x
    result -= 1.0 / x;
    x += 1.0;
  }
  // asymptotic series with Bernoulli coefficients through x^-14
  const double inv = 1.0 / x, inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv;
  result -= inv2 * (1.0 / 12.0 + inv2 * (-1.0 / 120.0 + inv2 * (1.0 / 252.0 + inv2 * (-1.0 / 240.0 + inv2 * (1.0 / 132.0 + inv2 * (-691.0 / 32760.0 + inv2 * (1.0 / 12.0)))))));
  return result;
}

double expint_ei(double x) {
  if (x == 0.0) throw ValidationError("expint_ei: singular at 0");

  // The alternating series loses accuracy to cancellation as -x grows, so
  // hand the negative side to the continued fraction from 3.5 on.  On the
  // positive side all terms share a sign and the series is safe until the
  // asymptotic expansion becomes cheaper.
  if ((x < 0.0 && x > -3.5) || (x > 0.0 && x <= 40.0)) {
    // Ei(x) = gamma + log|x| + sum_{k>=1} x^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) <= 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return kEulerGamma + std::log(std::abs(x)) + sum;
  }

  if (x < 0.0) {
    // E1(t) via the modified Lentz continued fraction, Ei(x) = -E1(-x)
    const double t = -x;
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = t + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 200; ++i) {
      const double a = -static_cast<double>(i) * i;
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const double delta = c * d;
      h *= delta;
      if (std::abs(delta - 1.0) <= 1e-16) break;
    }
    return -std::exp(-t) * h;
  }

  // large positive x: Ei(x) ~ e^x/x * sum k!/x^k, truncated at the smallest term
  double sum = 1.0, term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    const double next = term * k / x;
    if (next >= term) break;  // series started diverging
    term = next;
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return std::exp(x) / x * sum;
}

}  // namespace stoprule::special

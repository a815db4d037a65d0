#include "stoprule/multithreshold.hpp"

#include "stoprule/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace stoprule {

namespace {

void require_n(Index n, Index least, const char* who) {
  if (n < least)
    throw ValidationError(std::string(who) + ": n must be >= " + std::to_string(least));
}

}  // namespace

double two_threshold_stop_second(Index n, Index k) {
  require_n(n, 2, "two_threshold_stop_second");
  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return (dk * dk - dk) / (dn * dn - dn);
}

double two_threshold_stop_best(Index n, Index k) {
  require_n(n, 2, "two_threshold_stop_best");
  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return dk * (2.0 * dn - dk - 1.0) / (dn * dn - dn);
}

double two_threshold_accept_either(Index n, Index k) {
  require_n(n, 2, "two_threshold_accept_either");
  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return 2.0 * dk * (dn - dk) / ((dn - 1.0) * dn);
}

TwoThresholdResult solve_two_threshold(Index n) {
  require_n(n, 5, "solve_two_threshold");
  const double dn = static_cast<double>(n);

  // s: last position where stopping on a relative-second-best still trails
  // the accept-either continuation.  The inequality is k < (2n+1)/3, so the
  // complement must be a suffix; anything else is a structure error.
  Index s = -1;
  for (Index k = n; k >= 1; --k) {
    if (two_threshold_stop_second(n, k) < two_threshold_accept_either(n, k)) {
      s = k;
      break;
    }
  }
  if (s < 0) throw DiagnosticError("solve_two_threshold: no regime switch found");
  for (Index k = s + 1; k <= n; ++k)
    if (two_threshold_stop_second(n, k) < two_threshold_accept_either(n, k))
      throw DiagnosticError("solve_two_threshold: regime switch is not a suffix at k=" +
                            std::to_string(k));

  TwoThresholdResult result;
  result.n = n;
  result.s = s;
  result.value_table = Vxd::Zero(n + 1);
  auto& f = result.value_table;
  f[n] = 0.0;
  for (Index k = n - 1; k >= 0; --k) {
    const double dk = static_cast<double>(k);
    if (k >= s) {
      // either rank acceptable: stop terms collapse to [M + S](k+1)/(k+1) = 2/n
      f[k] = 2.0 / dn + (dk - 1.0) * f[k + 1] / (dk + 1.0);
    } else {
      f[k] = two_threshold_stop_best(n, k + 1) / (dk + 1.0) + dk * f[k + 1] / (dk + 1.0);
    }
  }

  Index r = 0;
  for (Index k = 1; k <= n; ++k)
    if (f[k] > f[r]) r = k;
  result.r = r;
  result.payoff = f[r];
  if (!(0 <= result.r && result.r <= result.s && result.s <= n))
    throw DiagnosticError("solve_two_threshold: cutoffs out of order");
  return result;
}

TwoThresholdLimits two_threshold_asymptotics() {
  TwoThresholdLimits limits;
  limits.r = -special::lambert_w(special::BranchId::principal,
                                 -2.0 / (3.0 * std::exp(1.0)));
  limits.s = 2.0 / 3.0;
  limits.payoff = limits.r * (2.0 - limits.r);
  return limits;
}

double two_threshold_limit_curve(double x) {
  if (x < 1e-12) return 0.0;
  if (x <= 2.0 / 3.0)
    return x * x - 2.0 * x * std::log(x) - 2.0 * x * std::log(1.5);
  return 2.0 * x - 2.0 * x * x;
}

namespace {

/// Exact success probability of every (r, s) pair by sweeping all n! orders.
/// pair_value is indexed by r * (n + 1) + s for 0 <= r <= s <= n.
std::vector<long double> enumerate_pairs(Index n) {
  std::vector<long double> acc(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0L);
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<int> rel(static_cast<std::size_t>(n + 1), 0);
  long double orders = 0.0L;
  do {
    ++orders;
    for (Index i = 1; i <= n; ++i) {
      int better = 0;
      for (Index j = 1; j < i; ++j)
        if (v[j - 1] < v[i - 1]) ++better;
      rel[i] = better + 1;
    }
    for (Index s = 0; s <= n; ++s) {
      for (Index r = 0; r <= s; ++r) {
        double payoff = 0.0;
        for (Index i = 1; i <= n; ++i) {
          const bool take = (i > s) ? rel[i] <= 2 : (i > r && rel[i] == 1);
          if (take) {
            payoff = v[i - 1] <= 2 ? 1.0 : 0.0;
            break;
          }
        }
        acc[static_cast<std::size_t>(r * (n + 1) + s)] += payoff;
      }
    }
  } while (std::next_permutation(v.begin(), v.end()));
  for (auto& a : acc) a /= orders;
  return acc;
}

}  // namespace

double verify_two_threshold_optimality(Index n) {
  require_n(n, 5, "verify_two_threshold_optimality");
  const TwoThresholdResult dp = solve_two_threshold(n);

  if (n <= 12) {
    const auto pair_value = enumerate_pairs(n);
    Index best_r = 0, best_s = 0;
    long double best = -1.0L;
    for (Index r = 0; r <= n; ++r) {
      for (Index s = r; s <= n; ++s) {
        const long double val = pair_value[static_cast<std::size_t>(r * (n + 1) + s)];
        if (val > best) {
          best = val;
          best_r = r;
          best_s = s;
        }
      }
    }
    const long double dp_pair =
        pair_value[static_cast<std::size_t>(dp.r * (n + 1) + dp.s)];
    if (best > dp_pair + 1e-12L)
      throw DiagnosticError(
          "verify_two_threshold_optimality: enumeration prefers (r=" +
          std::to_string(best_r) + ", s=" + std::to_string(best_s) + ") at " +
          std::to_string(static_cast<double>(best)) + " over (r=" +
          std::to_string(dp.r) + ", s=" + std::to_string(dp.s) + ") at " +
          std::to_string(static_cast<double>(dp_pair)));
    return std::abs(static_cast<double>(best) - dp.payoff);
  }

  // Unconstrained relaxation: may stop on a relative-best or a
  // relative-second-best independently at every position.
  double e = 0.0;
  for (Index k = n - 1; k >= 0; --k) {
    const double dk = static_cast<double>(k);
    const double stop1 = two_threshold_stop_best(n, k + 1);
    const double stop2 = two_threshold_stop_second(n, k + 1);
    e = (std::max(stop1, e) + std::max(stop2, e) + (dk - 1.0) * e) / (dk + 1.0);
  }
  return std::abs(e - dp.payoff);
}

}  // namespace stoprule

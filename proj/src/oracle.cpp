#include "stoprule/oracle.hpp"

#include "stoprule/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace stoprule::oracle {

namespace {

void require_enum_n(Index n, const char* who) {
  if (n < 2 || n > 10)
    throw ValidationError(std::string(who) + ": n must be in [2, 10]");
}

void require_threshold(Index n, Index threshold, const char* who) {
  if (threshold < 0 || threshold > n)
    throw ValidationError(std::string(who) + ": threshold must be in [0, n]");
}

/// Average of per_perm(v, rel) over all n! arrival orders.  v[i-1] is the
/// true rank of the candidate at position i (1 = best); rel[i] its rank
/// among the first i.
template <typename Fn>
long double mean_over_perms(Index n, Fn&& per_perm) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<int> rel(static_cast<std::size_t>(n) + 1, 0);
  long double acc = 0.0L, orders = 0.0L;
  do {
    for (Index i = 1; i <= n; ++i) {
      int better = 0;
      for (Index j = 1; j < i; ++j)
        if (v[j - 1] < v[i - 1]) ++better;
      rel[i] = better + 1;
    }
    acc += per_perm(v, rel);
    ++orders;
  } while (std::next_permutation(v.begin(), v.end()));
  return acc / orders;
}

/// Stop at the first position i > threshold whose relative rank satisfies
/// `take`; payoff from `on_stop(i, true_rank)`, or `none` if no stop.
template <typename Take, typename OnStop>
long double record_walk(const std::vector<int>& v, const std::vector<int>& rel,
                        Index n, Index threshold, Take&& take, OnStop&& on_stop,
                        long double none) {
  for (Index i = threshold + 1; i <= n; ++i)
    if (take(i, rel[i])) return on_stop(i, v[i - 1]);
  return none;
}

long double classical_on_prefix(Index n, Index threshold) {
  return mean_over_perms(n, [&](const std::vector<int>& v, const std::vector<int>& rel) {
    return record_walk(
        v, rel, n, threshold, [](Index, int r) { return r == 1; },
        [](Index, int rank) { return rank == 1 ? 1.0L : 0.0L; }, 0.0L);
  });
}

/// Indicator-sequence model for two criteria: weight of a record mask is
/// prod_i (bit_i ? 1/i : (i-1)/i), and the candidate at a record position is
/// globally best in that criterion iff no later record exists there.
long double multicriteria_two(Index n, Index threshold) {
  const unsigned total = 1u << n;
  std::vector<long double> w(total, 0.0L);
  for (unsigned mask = 0; mask < total; ++mask) {
    long double p = 1.0L;
    for (Index i = 1; i <= n; ++i) {
      const long double di = static_cast<long double>(i);
      p *= (mask >> (i - 1)) & 1u ? 1.0L / di : (di - 1.0L) / di;
    }
    w[mask] = p;
  }
  const unsigned after = threshold >= n ? 0u : ~((1u << threshold) - 1u) & (total - 1u);
  long double acc = 0.0L;
  for (unsigned a = 0; a < total; ++a) {
    if (w[a] == 0.0L) continue;
    for (unsigned b = 0; b < total; ++b) {
      if (w[b] == 0.0L) continue;
      const unsigned hits = (a | b) & after;
      if (!hits) continue;
      const int bit = std::countr_zero(hits);
      const unsigned announced = (a >> bit) & 1u ? a : b;
      const unsigned later = announced & ~((2u << bit) - 1u);
      if (later == 0u) acc += w[a] * w[b];
    }
  }
  return acc;
}

long double lottery_exact(Index n, const VariantParams& params, Index threshold) {
  const long double q = 1.0L / static_cast<long double>(n);
  long double weight = q, acc = 0.0L;
  for (Index i = threshold + 1; i <= n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    acc += weight * static_cast<long double>(detail::identity_or_y(params, x));
    weight *= 1.0L - q;
  }
  return acc;
}

}  // namespace

double enumerate_exact(VariantId id, Index n, const VariantParams& params,
                       Index threshold) {
  validate_params(id, params);
  require_enum_n(n, "enumerate_exact");
  require_threshold(n, threshold, "enumerate_exact");
  const double dn = static_cast<double>(n);

  switch (id) {
    case VariantId::classical:
      return static_cast<double>(classical_on_prefix(n, threshold));
    case VariantId::postdoc:
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold, [](Index, int r) { return r == 2; },
            [](Index, int rank) { return rank == 2 ? 1.0L : 0.0L; }, 0.0L);
      }));
    case VariantId::best_or_worst:
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold,
            [](Index i, int r) { return r == 1 || r == static_cast<int>(i); },
            [n](Index, int rank) {
              return rank == 1 || rank == static_cast<int>(n) ? 1.0L : 0.0L;
            },
            0.0L);
      }));
    case VariantId::uncertain: {
      const long double p = params.p;
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        long double weight = 1.0L, acc = 0.0L;
        for (Index i = threshold + 1; i <= n; ++i) {
          if (rel[i] != 1) continue;
          acc += weight * p * (v[i - 1] == 1 ? 1.0L : 0.0L);
          weight *= 1.0L - p;
        }
        return acc;
      }));
    }
    case VariantId::cost: {
      const long double c = params.c;
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold, [](Index, int r) { return r == 1; },
            [&](Index i, int rank) {
              return (rank == 1 ? 1.0L : 0.0L) - c * static_cast<long double>(i) / dn;
            },
            -c);
      }));
    }
    case VariantId::win_lose_draw: {
      const long double a = params.alpha, b = params.beta, g = params.gamma;
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold, [](Index, int r) { return r == 1; },
            [&](Index, int rank) { return rank == 1 ? a : -b; }, -g);
      }));
    }
    case VariantId::duration:
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold, [](Index, int r) { return r == 1; },
            [&](Index i, int rank) {
              if (rank != 1) return 0.0L;
              return static_cast<long double>(n + 1 - i) / dn;
            },
            0.0L);
      }));
    case VariantId::multicriteria:
      if (params.m == 1) return static_cast<double>(classical_on_prefix(n, threshold));
      if (params.m == 2) return static_cast<double>(multicriteria_two(n, threshold));
      throw ValidationError("enumerate_exact: multicriteria supports m <= 2");
    case VariantId::random_n: {
      long double acc = 0.0L;
      for (Index len = 1; len <= n; ++len)
        acc += classical_on_prefix(len, std::min(threshold, len));
      return static_cast<double>(acc / static_cast<long double>(n));
    }
    case VariantId::lottery:
      return static_cast<double>(lottery_exact(n, params, threshold));
    case VariantId::wildcard:
      // joker position W uniform on [1, n+1]; taking it ends the game at 1/2
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        long double acc = 0.0L;
        for (Index w = 1; w <= n + 1; ++w) {
          long double payoff = 0.0L;
          for (Index t = 1; t <= n + 1; ++t) {
            if (t == w) {
              payoff = 0.5L;
              break;
            }
            const Index r0 = t - (t > w ? 1 : 0);
            if (t > threshold && rel[r0] == 1) {
              payoff = v[r0 - 1] == 1 ? 1.0L : 0.0L;
              break;
            }
          }
          acc += payoff;
        }
        return acc / static_cast<long double>(n + 1);
      }));
    case VariantId::interruption: {
      // stopping at position i requires surviving i independent 1/n shocks
      const long double keep = 1.0L - 1.0L / static_cast<long double>(n);
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold, [](Index, int r) { return r == 1; },
            [&](Index i, int rank) {
              if (rank != 1) return 0.0L;
              long double weight = 1.0L;
              for (Index j = 0; j < i; ++j) weight *= keep;
              return weight;
            },
            0.0L);
      }));
    }
    case VariantId::penalty: {
      const long double b = params.b;
      return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
        return record_walk(
            v, rel, n, threshold, [](Index, int r) { return r == 1; },
            [&](Index, int rank) {
              return (rank == 1 ? 1.0L : 0.0L) - b * (rank == 2 ? 1.0L : 0.0L);
            },
            0.0L);
      }));
    }
  }
  throw ValidationError("enumerate_exact: unknown variant");
}

double enumerate_two_threshold(Index n, Index r, Index s) {
  require_enum_n(n, "enumerate_two_threshold");
  if (!(0 <= r && r <= s && s <= n))
    throw ValidationError("enumerate_two_threshold: need 0 <= r <= s <= n");
  return static_cast<double>(mean_over_perms(n, [&](const auto& v, const auto& rel) {
    for (Index i = 1; i <= n; ++i) {
      const bool take = i > s ? rel[i] <= 2 : (i > r && rel[i] == 1);
      if (take) return v[i - 1] <= 2 ? 1.0L : 0.0L;
    }
    return 0.0L;
  }));
}

namespace {

/// Global rank of the candidate accepted at position i with relative rank
/// cur, resolved by drawing the remaining relative ranks on [i+1, hi].
int settle_final_rank(rng::Xoshiro256& g, Index i, int cur, Index hi) {
  for (Index j = i + 1; j <= hi; ++j)
    if (static_cast<int>(g.below(static_cast<std::uint64_t>(j))) + 1 <= cur) ++cur;
  return cur;
}

template <typename Take, typename Payoff>
double record_trial(rng::Xoshiro256& g, Index n, Index threshold, Take&& take,
                    Payoff&& payoff, double none) {
  for (Index i = threshold + 1; i <= n; ++i) {
    const int r = static_cast<int>(g.below(static_cast<std::uint64_t>(i))) + 1;
    if (take(i, r)) return payoff(i, settle_final_rank(g, i, r, n));
  }
  return none;
}

double trial_payoff(VariantId id, Index n, const VariantParams& params,
                    Index threshold, rng::Xoshiro256& g) {
  const double dn = static_cast<double>(n);
  switch (id) {
    case VariantId::classical:
      return record_trial(
          g, n, threshold, [](Index, int r) { return r == 1; },
          [](Index, int fin) { return fin == 1 ? 1.0 : 0.0; }, 0.0);
    case VariantId::postdoc:
      return record_trial(
          g, n, threshold, [](Index, int r) { return r == 2; },
          [](Index, int fin) { return fin == 2 ? 1.0 : 0.0; }, 0.0);
    case VariantId::best_or_worst:
      return record_trial(
          g, n, threshold,
          [](Index i, int r) { return r == 1 || r == static_cast<int>(i); },
          [n](Index, int fin) {
            return fin == 1 || fin == static_cast<int>(n) ? 1.0 : 0.0;
          },
          0.0);
    case VariantId::uncertain: {
      for (Index i = threshold + 1; i <= n; ++i) {
        const int r = static_cast<int>(g.below(static_cast<std::uint64_t>(i))) + 1;
        if (r == 1 && g.unit() < params.p)
          return settle_final_rank(g, i, 1, n) == 1 ? 1.0 : 0.0;
      }
      return 0.0;
    }
    case VariantId::cost:
      return record_trial(
          g, n, threshold, [](Index, int r) { return r == 1; },
          [&](Index i, int fin) {
            return (fin == 1 ? 1.0 : 0.0) - params.c * static_cast<double>(i) / dn;
          },
          -params.c);
    case VariantId::win_lose_draw:
      return record_trial(
          g, n, threshold, [](Index, int r) { return r == 1; },
          [&](Index, int fin) { return fin == 1 ? params.alpha : -params.beta; },
          -params.gamma);
    case VariantId::duration:
      return record_trial(
          g, n, threshold, [](Index, int r) { return r == 1; },
          [&](Index i, int fin) {
            return fin == 1 ? static_cast<double>(n + 1 - i) / dn : 0.0;
          },
          0.0);
    case VariantId::multicriteria: {
      for (Index i = threshold + 1; i <= n; ++i) {
        long hit = 0;
        for (long c = 1; c <= params.m; ++c) {
          const bool rec = g.below(static_cast<std::uint64_t>(i)) == 0;
          if (rec && hit == 0) hit = c;
        }
        if (hit) {
          for (Index j = i + 1; j <= n; ++j)
            if (g.below(static_cast<std::uint64_t>(j)) == 0) return 0.0;
          return 1.0;
        }
      }
      return 0.0;
    }
    case VariantId::random_n: {
      const Index len = static_cast<Index>(g.below(static_cast<std::uint64_t>(n))) + 1;
      for (Index i = threshold + 1; i <= len; ++i) {
        const int r = static_cast<int>(g.below(static_cast<std::uint64_t>(i))) + 1;
        if (r == 1) return settle_final_rank(g, i, 1, len) == 1 ? 1.0 : 0.0;
      }
      return 0.0;
    }
    case VariantId::lottery: {
      for (Index i = threshold + 1; i <= n; ++i)
        if (g.below(static_cast<std::uint64_t>(n)) == 0)
          return detail::identity_or_y(params, static_cast<double>(i) / dn);
      return 0.0;
    }
    case VariantId::wildcard: {
      const Index w = static_cast<Index>(g.below(static_cast<std::uint64_t>(n + 1))) + 1;
      for (Index t = 1; t <= n + 1; ++t) {
        if (t == w) return 0.5;
        const Index r0 = t - (t > w ? 1 : 0);
        const int r = static_cast<int>(g.below(static_cast<std::uint64_t>(r0))) + 1;
        if (t > threshold && r == 1)
          return settle_final_rank(g, r0, 1, n) == 1 ? 1.0 : 0.0;
      }
      return 0.0;
    }
    case VariantId::interruption: {
      for (Index i = 1; i <= threshold; ++i)
        if (g.below(static_cast<std::uint64_t>(n)) == 0) return 0.0;
      for (Index i = threshold + 1; i <= n; ++i) {
        if (g.below(static_cast<std::uint64_t>(n)) == 0) return 0.0;
        const int r = static_cast<int>(g.below(static_cast<std::uint64_t>(i))) + 1;
        if (r == 1) return settle_final_rank(g, i, 1, n) == 1 ? 1.0 : 0.0;
      }
      return 0.0;
    }
    case VariantId::penalty:
      return record_trial(
          g, n, threshold, [](Index, int r) { return r == 1; },
          [&](Index, int fin) {
            return (fin == 1 ? 1.0 : 0.0) - params.b * (fin == 2 ? 1.0 : 0.0);
          },
          0.0);
  }
  throw ValidationError("simulate: unknown variant");
}

}  // namespace

SimReport simulate(VariantId id, Index n, const VariantParams& params,
                   Index threshold, long trials, std::uint64_t seed) {
  validate_params(id, params);
  if (n < 2) throw ValidationError("simulate: n must be >= 2");
  require_threshold(n, threshold, "simulate");
  if (trials < 10000) throw ValidationError("simulate: trials must be >= 10000");

  long double sum = 0.0L, sumsq = 0.0L;
  for (long t = 0; t < trials; ++t) {
    auto g = rng::trial_stream(seed, static_cast<std::uint64_t>(t));
    const double x = trial_payoff(id, n, params, threshold, g);
    sum += x;
    sumsq += static_cast<long double>(x) * x;
  }
  SimReport report;
  report.variant = id;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  const long double mean = sum / static_cast<long double>(trials);
  long double var = (sumsq - static_cast<long double>(trials) * mean * mean) /
                    static_cast<long double>(trials - 1);
  if (var < 0.0L) var = 0.0L;
  report.estimate = static_cast<double>(mean);
  report.std_error =
      static_cast<double>(std::sqrt(var / static_cast<long double>(trials)));
  return report;
}

}  // namespace stoprule::oracle

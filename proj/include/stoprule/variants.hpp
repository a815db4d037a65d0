#pragma once

#include "stoprule/backward.hpp"
#include "stoprule/types.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace stoprule {

/// Catalog of supported stopping problems.
enum class VariantId {
  classical,      ///< hire the single best candidate
  postdoc,        ///< hire exactly the second best
  best_or_worst,  ///< succeed on either extreme
  uncertain,      ///< chosen candidate accepts only with probability p
  cost,           ///< constant inspection cost c accrued per step
  win_lose_draw,  ///< reward alpha, penalty beta on a miss, gamma if never hiring
  duration,       ///< payoff proportional to how long the choice stays best
  multicriteria,  ///< m independent rankings, announce one record criterion
  random_n,       ///< candidate count uniform on {1..n}
  lottery,        ///< prize Y(i/n) on an i.i.d. success stage
  wildcard,       ///< one joker worth 1/2 hidden among the candidates
  interruption,   ///< the process may stop on its own each stage
  penalty         ///< -b when the runner-up is hired instead of the best
};

/// Parameters; only the fields a variant reads are validated for it.
struct VariantParams {
  double p = 0.5;      ///< acceptance probability, (0, 1]
  double c = 0.1;      ///< per-step cost, [0, 1)
  double alpha = 1.0;  ///< win reward
  double beta = 1.0;   ///< miss penalty
  double gamma = 0.0;  ///< never-hire penalty
  long m = 3;          ///< number of rank criteria, >= 1
  double b = 2.0;      ///< runner-up penalty, >= 0
  std::function<double(double)> Y;  ///< lottery prize profile; identity when empty
  std::string y_name = "identity";  ///< serialization label for Y
};

/// Static facts about a variant.
struct VariantInfo {
  VariantId id;
  std::string name;          ///< command line identifier
  bool identity_combiner;    ///< from-start value equals the continuation value
  bool singular_at_one;      ///< limit ODE blows up at x = 1
};

const std::vector<VariantInfo>& catalog();
const VariantInfo& variant_info(VariantId id);
VariantId variant_from_name(const std::string& name);

/// Throws ValidationError when the parameters a variant reads are out of range.
void validate_params(VariantId id, const VariantParams& params);

/// Closed-form limit of the value curve, with continuous extensions at the
/// interval ends baked in.
std::function<double(double)> closed_form_f(VariantId id, const VariantParams& params);

/// Second derivative of closed_form_f when registered analytically;
/// empty function otherwise (callers fall back to finite differences).
std::function<double(double)> closed_form_f_pp(VariantId id, const VariantParams& params);

/// Limit of the stop payoff curve (the comparison target for crossing-type
/// threshold extraction): x for rank variants, Y(x) for the lottery.
std::function<double(double)> stop_limit_curve(VariantId id, const VariantParams& params);

/// Maps the limit pair (x, f(x)) to the from-start success quantity.
double composite_limit(VariantId id, const VariantParams& params, double x, double fx);

namespace detail {

inline double identity_or_y(const VariantParams& params, double x) {
  return params.Y ? params.Y(x) : x;
}

}  // namespace detail

/// A variant instantiated at a specific n: the recurrence, the stopping
/// model, and the map from continuation values to from-start values.
template <typename Scalar>
struct VariantInstance {
  VariantId id{};
  Index n = 0;
  VariantParams params;
  RecurrenceSpec<Scalar> spec;
  PayoffModel<Scalar> payoff;
  std::function<Scalar(Index, Scalar)> objective;  ///< (k, F_k) -> from-start value
  bool identity_combiner = true;
};

/// Builds the recurrence and stopping model for a variant at horizon n >= 2.
template <typename Scalar>
VariantInstance<Scalar> make_variant(VariantId id, Index n, const VariantParams& params = {}) {
  if (n < 2) throw ValidationError("make_variant: n must be >= 2");
  validate_params(id, params);

  VariantInstance<Scalar> inst;
  inst.id = id;
  inst.n = n;
  inst.params = params;
  inst.spec.n = n;
  inst.payoff.n = n;
  inst.objective = [](Index, Scalar f) { return f; };

  const Scalar nn = Scalar(n);
  const VariantInfo& meta = variant_info(id);

  auto classical_like = [&](Scalar scale) {
    // G = scale / n, H = k/(k+1); covers classical and cost (scale = 1 - c).
    inst.spec.G = [scale, nn](Index) { return scale / nn; };
    inst.spec.H = [](Index k) { return Scalar(k) / Scalar(k + 1); };
    inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
    inst.payoff.stop_payoff = [scale, nn](Index k) { return Scalar(k) * scale / nn; };
  };

  switch (id) {
    case VariantId::classical:
      inst.spec.mu = 0;
      classical_like(Scalar(1));
      inst.spec.g_limit = [](double) { return 1.0; };
      inst.spec.h_limit = [](double x) { return 1.0 / x; };
      break;

    case VariantId::postdoc:
      inst.spec.mu = 0;
      inst.spec.G = [nn](Index k) { return Scalar(k) / (nn * (nn - 1)); };
      inst.spec.H = [](Index k) { return Scalar(k) / Scalar(k + 1); };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = [nn](Index k) {
        return Scalar(k) * Scalar(k - 1) / (nn * (nn - 1));
      };
      inst.spec.g_limit = [](double x) { return x; };
      inst.spec.h_limit = [](double x) { return 1.0 / x; };
      break;

    case VariantId::best_or_worst:
      inst.spec.mu = 0;
      inst.spec.G = [nn](Index) { return Scalar(2) / nn; };
      inst.spec.H = [](Index k) { return Scalar(k - 1) / Scalar(k + 1); };
      inst.payoff.p = [](Index k) { return Scalar(2) / Scalar(k); };  // degenerate at k = 1
      inst.payoff.stop_payoff = [nn](Index k) { return Scalar(k) / nn; };
      inst.spec.g_limit = [](double) { return 2.0; };
      inst.spec.h_limit = [](double x) { return 2.0 / x; };
      break;

    case VariantId::uncertain: {
      const Scalar p = Scalar(params.p);
      inst.spec.mu = 0;
      inst.spec.G = [p, nn](Index) { return p / nn; };
      inst.spec.H = [p](Index k) { return Scalar(1) - p / Scalar(k + 1); };
      inst.payoff.p = [p](Index k) { return p / Scalar(k); };
      inst.payoff.stop_payoff = [nn](Index k) { return Scalar(k) / nn; };
      const double pd = params.p;
      inst.spec.g_limit = [pd](double) { return pd; };
      inst.spec.h_limit = [pd](double x) { return pd / x; };
      break;
    }

    case VariantId::cost: {
      const Scalar c = Scalar(params.c);
      inst.spec.mu = -c;
      classical_like(Scalar(1) - c);
      const double cd = params.c;
      inst.spec.g_limit = [cd](double) { return 1.0 - cd; };
      inst.spec.h_limit = [](double x) { return 1.0 / x; };
      break;
    }

    case VariantId::win_lose_draw: {
      const Scalar a = Scalar(params.alpha), b = Scalar(params.beta), g = Scalar(params.gamma);
      inst.spec.mu = -g;
      // factored form of ((alpha+beta)(k+1) - beta n) / ((k+1) n); reduces
      // bitwise to the classical / cost immediate terms when beta = 0
      inst.spec.G = [a, b, nn](Index k) { return (a + b) / nn - b / Scalar(k + 1); };
      inst.spec.H = [](Index k) { return Scalar(k) / Scalar(k + 1); };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = [a, b, nn](Index k) {
        return (a + b) * Scalar(k) / nn - b;
      };
      const double ad = params.alpha, bd = params.beta;
      inst.spec.g_limit = [ad, bd](double x) { return (ad + bd) - bd / x; };
      inst.spec.h_limit = [](double x) { return 1.0 / x; };
      break;
    }

    case VariantId::duration:
      inst.spec.mu = 0;
      inst.spec.G = [nn](Index k) { return (nn - Scalar(k)) / (nn * nn); };
      inst.spec.H = [](Index k) { return Scalar(k) / Scalar(k + 1); };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = [nn](Index k) {
        return Scalar(k) * (nn + 1 - Scalar(k)) / (nn * nn);
      };
      inst.spec.g_limit = [](double x) { return 1.0 - x; };
      inst.spec.h_limit = [](double x) { return 1.0 / x; };
      break;

    case VariantId::multicriteria: {
      if (params.m == 1) {  // single criterion is exactly the classical problem
        inst.spec.mu = 0;
        classical_like(Scalar(1));
        inst.spec.g_limit = [](double) { return 1.0; };
        inst.spec.h_limit = [](double x) { return 1.0 / x; };
        break;
      }
      const Scalar m = Scalar(params.m);
      inst.spec.mu = 0;
      auto pow_ratio = [m](Index k) {
        using std::pow;
        return pow(Scalar(k) / Scalar(k + 1), m);
      };
      inst.spec.G = [pow_ratio, nn](Index k) {
        return (Scalar(1) - pow_ratio(k)) * Scalar(k + 1) / nn;
      };
      inst.spec.H = pow_ratio;
      inst.payoff.p = [m](Index k) {
        using std::pow;
        return Scalar(1) - pow(Scalar(k - 1) / Scalar(k), m);
      };
      inst.payoff.stop_payoff = [nn](Index k) { return Scalar(k) / nn; };
      const double md = static_cast<double>(params.m);
      inst.spec.g_limit = [md](double) { return md; };
      inst.spec.h_limit = [md](double x) { return md / x; };
      break;
    }

    case VariantId::random_n: {
      inst.spec.mu = 0;
      // suffix sums S(k) = sum_{i=k..n} 1/i, shared by G and the stop curve
      auto suffix = std::make_shared<Vx<Scalar>>(n + 2);
      (*suffix)[n + 1] = 0;
      for (Index k = n; k >= 1; --k) (*suffix)[k] = (*suffix)[k + 1] + Scalar(1) / Scalar(k);
      auto continue_prob = [nn](Index k) {  // P(more candidates | k seen)
        return k == 0 ? Scalar(1) : (nn - Scalar(k)) / (nn - Scalar(k) + 1);
      };
      auto stop_value = [suffix, nn](Index k) {  // P(win | stop on record at k)
        return Scalar(k) * (*suffix)[k] / (nn - Scalar(k) + 1);
      };
      inst.spec.G = [continue_prob, stop_value](Index k) {
        return continue_prob(k) * stop_value(k + 1) / Scalar(k + 1);
      };
      inst.spec.H = [continue_prob](Index k) {
        return continue_prob(k) * Scalar(k) / Scalar(k + 1);
      };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = stop_value;
      inst.objective = [nn](Index k, Scalar f) {  // scale by P(at least k candidates)
        return k == 0 ? f : (nn - Scalar(k) + 1) / nn * f;
      };
      inst.identity_combiner = false;
      inst.spec.g_limit = [](double x) { return x == 1.0 ? 1.0 : std::log(x) / (x - 1.0); };
      inst.spec.h_limit = [](double x) { return 1.0 / (x - x * x); };
      break;
    }

    case VariantId::lottery: {
      inst.spec.mu = 0;
      const VariantParams captured = params;
      auto prize = [captured, nn](Index k) {
        return Scalar(detail::identity_or_y(captured, static_cast<double>(Scalar(k) / nn)));
      };
      inst.spec.G = [prize, nn](Index k) { return prize(k + 1) / nn; };
      inst.spec.H = [nn](Index) { return (nn - 1) / nn; };
      inst.payoff.p = [nn](Index) { return Scalar(1) / nn; };
      inst.payoff.stop_payoff = prize;
      inst.spec.g_limit = [captured](double x) { return detail::identity_or_y(captured, x); };
      inst.spec.h_limit = [](double) { return 1.0; };
      break;
    }

    case VariantId::wildcard:
      inst.spec.mu = Scalar(1) / 2;
      inst.spec.G = [nn](Index k) {
        return (3 * nn - 2 * Scalar(k)) / (2 * nn * (nn - Scalar(k) + 1));
      };
      inst.spec.H = [nn](Index k) {
        return Scalar(k) * (nn - Scalar(k)) / (Scalar(k + 1) * (nn - Scalar(k) + 1));
      };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = [nn](Index k) { return Scalar(k) / nn; };
      inst.objective = [nn](Index k, Scalar f) {
        const Scalar q = Scalar(k) / (nn + 1);
        return q / 2 + (1 - q) * f;
      };
      inst.identity_combiner = false;
      inst.spec.g_limit = [](double x) { return (3.0 - 2.0 * x) / (2.0 - 2.0 * x); };
      inst.spec.h_limit = [](double x) { return 1.0 / (x - x * x); };
      break;

    case VariantId::interruption: {
      inst.spec.mu = 0;
      inst.spec.G = [nn](Index) { return (nn - 1) / (nn * nn); };
      inst.spec.H = [nn](Index k) { return Scalar(k) * (nn - 1) / (Scalar(k + 1) * nn); };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = [nn](Index k) { return Scalar(k) / nn; };
      using std::log1p;
      const Scalar log_survive = log1p(Scalar(-1) / nn);
      inst.objective = [log_survive](Index k, Scalar f) {
        using std::exp;
        return exp(Scalar(k) * log_survive) * f;
      };
      inst.identity_combiner = false;
      inst.spec.g_limit = [](double) { return 1.0; };
      inst.spec.h_limit = [](double x) { return 1.0 + 1.0 / x; };
      break;
    }

    case VariantId::penalty: {
      const Scalar b = Scalar(params.b);
      inst.spec.mu = 0;
      auto stop_value = [b, nn](Index k) {  // E[win - b * runner-up | record at k]
        return Scalar(k) * (b * (Scalar(k) - nn) + nn - 1) / ((nn - 1) * nn);
      };
      inst.spec.G = [stop_value](Index k) { return stop_value(k + 1) / Scalar(k + 1); };
      inst.spec.H = [](Index k) { return Scalar(k) / Scalar(k + 1); };
      inst.payoff.p = [](Index k) { return Scalar(1) / Scalar(k); };
      inst.payoff.stop_payoff = stop_value;
      const double bd = params.b;
      inst.spec.g_limit = [bd](double x) { return bd * (x - 1.0) + 1.0; };
      inst.spec.h_limit = [](double x) { return 1.0 / x; };
      break;
    }
  }

  inst.identity_combiner = meta.identity_combiner;
  return inst;
}

/// Streaming solve: kappa, from-start payoff, certification.  O(1) memory.
template <typename Scalar>
ThresholdResult<Scalar> solve_variant(const VariantInstance<Scalar>& inst) {
  return scan_threshold<Scalar>(inst.spec, inst.payoff.stop_payoff, inst.objective);
}

/// Table-based certification, for tests and small instances.
template <typename Scalar>
ThresholdResult<Scalar> certify_table(const VariantInstance<Scalar>& inst,
                                      const ValueTable<Scalar>& table) {
  Vx<Scalar> composite(table.n + 1);
  for (Index k = 0; k <= table.n; ++k) composite[k] = inst.objective(k, table.values[k]);
  return detail::extract_threshold<Scalar>(table.values, composite, inst.payoff.stop_payoff);
}

/// Value of the overall optimal rule for the variant, via the max-form
/// recurrence appropriate to its information structure.  Independent of
/// solve_backward; used to certify that threshold rules are optimal.
template <typename Scalar>
Scalar optimal_value(VariantId id, Index n, const VariantParams& params = {}) {
  const Scalar nn = Scalar(n);
  using std::max;
  switch (id) {
    case VariantId::wildcard: {
      Scalar e = Scalar(1) / 2;
      for (Index k = n - 1; k >= 0; --k) {
        const Scalar stop = Scalar(k + 1) / nn;
        const Scalar cont = (max(stop, e) + Scalar(k) * e) / Scalar(k + 1);
        e = (Scalar(1) / 2 + (nn - Scalar(k)) * cont) / (nn - Scalar(k) + 1);
      }
      return e;
    }
    case VariantId::interruption: {
      Scalar e = 0;
      for (Index k = n - 1; k >= 0; --k) {
        const Scalar stop = Scalar(k + 1) / nn;
        e = (nn - 1) / nn * (max(stop, e) + Scalar(k) * e) / Scalar(k + 1);
      }
      return e;
    }
    case VariantId::random_n: {
      Vx<Scalar> suffix(n + 2);
      suffix[n + 1] = 0;
      for (Index k = n; k >= 1; --k) suffix[k] = suffix[k + 1] + Scalar(1) / Scalar(k);
      Scalar e = 0;
      for (Index k = n - 1; k >= 0; --k) {
        const Scalar stop = Scalar(k + 1) * suffix[k + 1] / (nn - Scalar(k));
        const Scalar keep = k == 0 ? Scalar(1) : (nn - Scalar(k)) / (nn - Scalar(k) + 1);
        e = keep * (max(stop, e) + Scalar(k) * e) / Scalar(k + 1);
      }
      return e;
    }
    default: {
      const auto inst = make_variant<Scalar>(id, n, params);
      return solve_optimal(inst.payoff, inst.spec.mu);
    }
  }
}

/// |optimal_value - best from-start threshold value|.
template <typename Scalar>
Scalar threshold_optimality_gap(VariantId id, Index n, const VariantParams& params = {}) {
  const auto inst = make_variant<Scalar>(id, n, params);
  const auto table = solve_backward(inst.spec);
  Scalar best = inst.objective(0, table.values[0]);
  for (Index k = 1; k <= n; ++k) best = std::max(best, inst.objective(k, table.values[k]));
  return std::abs(optimal_value<Scalar>(id, n, params) - best);
}

}  // namespace stoprule

#include "stoprule/asymptotics.hpp"

#include "stoprule/parallel.hpp"
#include "stoprule/search.hpp"
#include "stoprule/special.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace stoprule {

const char* to_string(LimitSource source) {
  return source == LimitSource::closed_form ? "closed-form" : "ode-numeric";
}

LimitCurve closed_limit_curve(VariantId id, const VariantParams& params) {
  validate_params(id, params);
  return LimitCurve{closed_form_f(id, params), closed_form_f_pp(id, params)};
}

OdeProblem variant_ode(VariantId id, const VariantParams& params) {
  validate_params(id, params);
  const auto inst = make_variant<double>(id, 101, params);
  OdeProblem problem;
  problem.g = inst.spec.g_limit;
  problem.h = inst.spec.h_limit;
  problem.terminal = inst.spec.mu;
  problem.singular_at_one = variant_info(id).singular_at_one;
  return problem;
}

LimitCurve ode_limit_curve(VariantId id, const VariantParams& params,
                           int grid_points) {
  auto sampled = std::make_shared<SampledFunction>(
      integrate_ode(variant_ode(id, params), grid_points));
  LimitCurve curve;
  curve.f = [sampled](double x) { return (*sampled)(x); };
  return curve;
}

namespace {

/// Root of (Ei(-1) - Ei(-x)) - e^{-x} on (0, 1); the residual decreases from
/// +inf at 0+ to -exp(-1) at 1, so it crosses zero exactly once.
double interruption_theta() {
  const double a = special::expint_ei(-1.0);
  const auto residual = [a](double x) {
    return (a - special::expint_ei(-x)) - std::exp(-x);
  };
  double lo = 1e-9, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? hi : lo) = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

bool crossing_certified(VariantId id) {
  return id == VariantId::lottery || id == VariantId::wildcard ||
         id == VariantId::interruption;
}

}  // namespace

double theta_closed(VariantId id, const VariantParams& params) {
  validate_params(id, params);
  using special::BranchId;
  switch (id) {
    case VariantId::classical:
      return std::exp(-1.0);
    case VariantId::postdoc:
    case VariantId::best_or_worst:
      return 0.5;
    case VariantId::uncertain:
      return params.p == 1.0 ? std::exp(-1.0)
                             : std::pow(params.p, 1.0 / (1.0 - params.p));
    case VariantId::cost:
      return std::exp(1.0 / (params.c - 1.0));
    case VariantId::win_lose_draw:
      return std::exp(-(params.alpha + params.gamma) /
                      (params.alpha + params.beta));
    case VariantId::duration:
      return -0.5 * special::lambert_w(BranchId::principal,
                                       -2.0 * std::exp(-2.0));
    case VariantId::multicriteria: {
      const double m = static_cast<double>(params.m);
      return params.m == 1 ? std::exp(-1.0) : std::pow(m, 1.0 / (1.0 - m));
    }
    case VariantId::random_n:
      return std::exp(-2.0);
    case VariantId::lottery:
      return find_crossing(closed_form_f(id, params),
                           stop_limit_curve(id, params), 1e-6, 1.0);
    case VariantId::wildcard:
      return -0.75 * special::lambert_w(BranchId::principal,
                                        -4.0 / (3.0 * std::exp(4.0 / 3.0)));
    case VariantId::interruption:
      return interruption_theta();
    case VariantId::penalty: {
      const double b = params.b;
      if (b == 0.0) return std::exp(-1.0);
      if (b == 1.0) return 0.5;
      const double z =
          (2.0 * b / (1.0 - b)) * std::exp((2.0 * b - 1.0) / (1.0 - b));
      const BranchId branch = b < 1.0 ? BranchId::principal : BranchId::minus_one;
      return ((1.0 - b) / (2.0 * b)) * special::lambert_w(branch, z);
    }
  }
  throw ValidationError("theta_closed: unknown variant");
}

AsymptoticResult asymptotic_limits(VariantId id, const VariantParams& params,
                                   LimitSource source) {
  validate_params(id, params);
  AsymptoticResult result;
  result.source = source;
  if (source == LimitSource::closed_form) {
    result.theta = theta_closed(id, params);
    const auto f = closed_form_f(id, params);
    result.limit_payoff = composite_limit(id, params, result.theta, f(result.theta));
    return result;
  }
  auto sampled = std::make_shared<SampledFunction>(
      integrate_ode(variant_ode(id, params)));
  const double lo = std::max(1e-4, sampled->x_min());
  const double hi = sampled->x_max();
  if (crossing_certified(id)) {
    result.theta = find_crossing([sampled](double x) { return (*sampled)(x); },
                                 stop_limit_curve(id, params), lo, hi);
  } else {
    const auto composite = [&, sampled](double x) {
      return composite_limit(id, params, x, (*sampled)(x));
    };
    result.theta = find_argmax(composite, lo, hi).x;
  }
  result.limit_payoff =
      composite_limit(id, params, result.theta, (*sampled)(result.theta));
  return result;
}

const char* to_string(ConjectureId id) {
  return id == ConjectureId::exmu ? "exmu" : "ei-example";
}

ConjectureId conjecture_from_name(const std::string& name) {
  if (name == "exmu") return ConjectureId::exmu;
  if (name == "ei-example") return ConjectureId::ei_example;
  throw ValidationError("unknown conjecture example '" + name +
                        "' (known: exmu, ei-example)");
}

double conjecture_default_mu(ConjectureId id) {
  return id == ConjectureId::exmu ? 3.0 : -0.5;
}

RecurrenceSpec<double> make_conjecture_spec(ConjectureId id, Index n, double mu) {
  if (n < 3) throw ValidationError("make_conjecture_spec: n must be >= 3");
  RecurrenceSpec<double> spec;
  spec.n = n;
  spec.mu = mu;
  const double dn = static_cast<double>(n);
  if (id == ConjectureId::exmu) {
    spec.G = [n, dn](Index k) {
      const double dk = static_cast<double>(k);
      const double den = 3.0 * dn - 3.0 * dk + 2.0;
      return dk / (dn * dn) + 2.0 * (dk + 2.0 * dn) / (dn * den);
    };
    spec.H = [n, dn](Index k) {
      const double dk = static_cast<double>(k);
      return (3.0 * dn - 3.0 * dk) / (3.0 * dn - 3.0 * dk + 2.0);
    };
    spec.g_limit = [](double x) {
      return (-3.0 * x * x + 5.0 * x + 4.0) / (3.0 - 3.0 * x);
    };
    spec.h_limit = [](double x) { return 2.0 / (3.0 - 3.0 * x); };
  } else {
    spec.G = [n, dn](Index k) {
      const double dk = static_cast<double>(k);
      return std::pow(dk / dn, dn) + 1.0 / (dk + dn);
    };
    spec.H = [](Index k) {
      const double dk = static_cast<double>(k);
      return dk / (dk + 1.0);
    };
    spec.g_limit = [](double x) { return 1.0 / (1.0 + x); };
    spec.h_limit = [](double x) { return 1.0 / x; };
  }
  return spec;
}

LimitCurve conjecture_limit_curve(ConjectureId id, double mu) {
  LimitCurve curve;
  if (id == ConjectureId::exmu) {
    (void)mu;  // curve is the mu = 3 shape; other mu probe the mismatch
    curve.f = [](double x) {
      return (-15.0 * x * x + 22.0 * x + 113.0) / 40.0;
    };
    curve.f_pp = [](double) { return -0.75; };
    return curve;
  }
  const double shift = mu + 1.0 / (std::exp(1.0) - 1.0);
  curve.f = [shift](double x) {
    if (x < 1e-12) return 0.0;
    return x * (std::log((x + 1.0) / (2.0 * x)) + shift);
  };
  curve.f_pp = [](double x) { return -1.0 / (x * (x + 1.0) * (x + 1.0)); };
  return curve;
}

std::vector<ConjectureSeries> run_conjecture_experiment(
    ConjectureId id, double mu, const std::vector<Index>& n_list,
    Index max_dump_points) {
  if (max_dump_points < 2)
    throw ValidationError("run_conjecture_experiment: max_dump_points must be >= 2");
  for (Index n : n_list)
    if (n < 3) throw ValidationError("run_conjecture_experiment: every n must be >= 3");
  const LimitCurve curve = conjecture_limit_curve(id, mu);
  std::vector<ConjectureSeries> out(n_list.size());
  detail::parallel_for_index(static_cast<Index>(n_list.size()), [&](Index idx) {
    const Index n = n_list[static_cast<std::size_t>(idx)];
    const auto spec = make_conjecture_spec(id, n, mu);
    const auto table = solve_backward(spec);
    ConjectureSeries series;
    series.n = n;
    const GapReport gap = measure_gap(table, curve);
    series.sup_gap = gap.sup_gap;
    series.interior_gap = gap.interior_gap;
    series.terminal_drift =
        std::abs(spec.G(n - 1) + spec.mu * spec.H(n - 1) - spec.mu);
    Index best = 1;
    for (Index k = 2; k < n; ++k)
      if (table.values[k] > table.values[best]) best = k;
    series.argmax = best;
    series.max_value = table.values[best];
    const Index stride = std::max<Index>(1, (n + max_dump_points - 1) / max_dump_points);
    for (Index k = 0; k <= n; k += stride) {
      const double x = static_cast<double>(k) / static_cast<double>(n);
      series.dump_k.push_back(k);
      series.dump_x.push_back(x);
      series.dump_f_n.push_back(table.values[k]);
      series.dump_f_ref.push_back(curve.f(x));
    }
    if (series.dump_k.back() != n) {
      series.dump_k.push_back(n);
      series.dump_x.push_back(1.0);
      series.dump_f_n.push_back(table.values[n]);
      series.dump_f_ref.push_back(curve.f(1.0));
    }
    out[static_cast<std::size_t>(idx)] = std::move(series);
  });
  return out;
}

}  // namespace stoprule

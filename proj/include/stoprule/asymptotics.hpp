#pragma once

#include "stoprule/diagnostics.hpp"
#include "stoprule/ode.hpp"
#include "stoprule/variants.hpp"

#include <string>
#include <vector>

namespace stoprule {

/// How an asymptotic answer was produced.
enum class LimitSource { closed_form, ode_numeric };

const char* to_string(LimitSource source);

/// Limiting threshold fraction and the value the normalized payoff tends to.
struct AsymptoticResult {
  double theta = 0;
  double limit_payoff = 0;
  LimitSource source = LimitSource::closed_form;
};

/// Limit curve built from the catalog closed forms (analytic f'' when known).
LimitCurve closed_limit_curve(VariantId id, const VariantParams& params = {});

/// ODE y' = y h - g for the variant's limit data, with the terminal value and
/// singularity flag filled from the catalog.
OdeProblem variant_ode(VariantId id, const VariantParams& params = {});

/// Limit curve obtained by integrating the variant's ODE numerically.
LimitCurve ode_limit_curve(VariantId id, const VariantParams& params = {},
                           int grid_points = 20001);

/// Limiting threshold fraction from the closed-form catalog.
double theta_closed(VariantId id, const VariantParams& params = {});

/// Asymptotic threshold fraction and limit payoff.  The closed-form route
/// evaluates the catalog formulas; the ode-numeric route integrates the limit
/// ODE and locates theta on the integrated curve (crossing against the stop
/// curve for prize-at-threshold variants, argmax of the composite otherwise).
AsymptoticResult asymptotic_limits(VariantId id, const VariantParams& params = {},
                                   LimitSource source = LimitSource::closed_form);

/// Synthetic recurrence families used to probe the limit hypotheses outside
/// the variant catalog.
enum class ConjectureId {
  exmu,       ///< rational G/H family with a free terminal value mu
  ei_example  ///< logarithmic-integral family with additive parameter mu
};

const char* to_string(ConjectureId id);
ConjectureId conjecture_from_name(const std::string& name);

/// Finite-n recurrence for the example.  pre: n >= 3.
RecurrenceSpec<double> make_conjecture_spec(ConjectureId id, Index n, double mu);

/// Candidate limit shape for the example (analytic f'' included).
LimitCurve conjecture_limit_curve(ConjectureId id, double mu);

/// Default mu used by the example when none is supplied.
double conjecture_default_mu(ConjectureId id);

/// One experiment row: consistency and gap summaries plus the location and
/// value of the interior maximum (argmax over 0 < k < n), and a decimated
/// dump of F_n(k) against f(k/n) for plotting.
struct ConjectureSeries {
  Index n = 0;
  double sup_gap = 0;
  double interior_gap = 0;
  double terminal_drift = 0;
  Index argmax = 0;
  double max_value = 0;
  std::vector<Index> dump_k;
  std::vector<double> dump_x;
  std::vector<double> dump_f_n;
  std::vector<double> dump_f_ref;
};

/// Solves the example at each n and compares against the candidate curve.
/// Dumps keep at most max_dump_points samples per n, endpoints included.
/// pre: every n >= 3; max_dump_points >= 2.
std::vector<ConjectureSeries> run_conjecture_experiment(
    ConjectureId id, double mu, const std::vector<Index>& n_list,
    Index max_dump_points = 2001);

}  // namespace stoprule

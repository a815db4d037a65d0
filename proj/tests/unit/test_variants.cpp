#include <doctest.h>

#include <cmath>
#include <vector>

#include "stoprule/asymptotics.hpp"
#include "stoprule/variants.hpp"
#include "test_support.hpp"

using namespace stoprule;

TEST_CASE("catalog names round trip") {
  for (const auto& info : catalog()) {
    CHECK((variant_from_name(info.name) == info.id));
    CHECK(variant_info(info.id).name == info.name);
  }
  CHECK_THROWS_AS((void)variant_from_name("no-such-variant"), ValidationError);
}

TEST_CASE("parameter validation rejects out-of-range values") {
  VariantParams p;

  p.p = 0.0;
  CHECK_THROWS_AS((void)validate_params(VariantId::uncertain, p), ValidationError);
  p.p = 1.5;
  CHECK_THROWS_AS((void)validate_params(VariantId::uncertain, p), ValidationError);
  p.p = 1.0;
  CHECK_NOTHROW(validate_params(VariantId::uncertain, p));

  p = {};
  p.c = 1.0;
  CHECK_THROWS_AS((void)validate_params(VariantId::cost, p), ValidationError);
  p.c = -0.1;
  CHECK_THROWS_AS((void)validate_params(VariantId::cost, p), ValidationError);

  p = {};
  p.alpha = 0.0;
  p.beta = 0.0;
  CHECK_THROWS_AS((void)validate_params(VariantId::win_lose_draw, p), ValidationError);

  p = {};
  p.m = 0;
  CHECK_THROWS_AS((void)validate_params(VariantId::multicriteria, p), ValidationError);

  p = {};
  p.b = -1.0;
  CHECK_THROWS_AS((void)validate_params(VariantId::penalty, p), ValidationError);

  p = {};
  p.Y = [](double x) { return 1.0 - x; };  // decreasing prize profile
  CHECK_THROWS_AS((void)validate_params(VariantId::lottery, p), ValidationError);

  // An out-of-range field a variant does not read is ignored.
  p = {};
  p.c = 5.0;
  CHECK_NOTHROW(validate_params(VariantId::classical, p));
}

TEST_CASE("degenerate parameters collapse onto simpler variants bitwise") {
  const Index n = 500;
  const auto run = [n](VariantId id, const VariantParams& params) {
    return solve_variant(make_variant<double>(id, n, params));
  };

  VariantParams zero_cost;
  zero_cost.c = 0.0;
  const auto classical = run(VariantId::classical, {});
  const auto as_cost = run(VariantId::cost, zero_cost);
  CHECK(classical.kappa == as_cost.kappa);
  CHECK(classical.payoff == as_cost.payoff);

  VariantParams pure_win;
  pure_win.alpha = 1.0;
  pure_win.beta = 0.0;
  pure_win.gamma = 0.0;
  const auto as_wld = run(VariantId::win_lose_draw, pure_win);
  CHECK(classical.kappa == as_wld.kappa);
  CHECK(classical.payoff == as_wld.payoff);

  // alpha = 1 - gamma, beta = 0 reproduces the cost problem with c = gamma
  // up to the constant shift -gamma in both the values and the stop payoffs.
  VariantParams shifted;
  shifted.alpha = 0.9;
  shifted.beta = 0.0;
  shifted.gamma = 0.1;
  VariantParams cost_like;
  cost_like.c = 0.1;
  const auto lhs = run(VariantId::win_lose_draw, shifted);
  const auto rhs = run(VariantId::cost, cost_like);
  CHECK(lhs.kappa == rhs.kappa);
  CHECK(lhs.payoff == doctest::Approx(rhs.payoff).epsilon(1e-12));

  VariantParams single;
  single.m = 1;
  const auto as_multi = run(VariantId::multicriteria, single);
  CHECK(classical.kappa == as_multi.kappa);
  CHECK(classical.payoff == as_multi.payoff);

  VariantParams certain;
  certain.p = 1.0;
  const auto as_uncertain = run(VariantId::uncertain, certain);
  CHECK(classical.kappa == as_uncertain.kappa);
  CHECK(classical.payoff == doctest::Approx(as_uncertain.payoff).epsilon(1e-12));
}

TEST_CASE("finite thresholds and payoffs approach the limits") {
  const Index n = 1000000;
  const double slack = 5.0 / std::sqrt(static_cast<double>(n));
  for (const auto& frozen : testsup::frozen_limits()) {
    const auto res = solve_variant(make_variant<double>(frozen.id, n));
    CAPTURE(variant_info(frozen.id).name);
    CHECK(std::abs(static_cast<double>(res.kappa) / n - frozen.theta) <= slack);
    CHECK(std::abs(res.payoff - frozen.payoff) <= slack);
  }
}

TEST_CASE("limit densities match the finite recurrence terms") {
  const Index n = 1000000;
  for (const auto id : testsup::all_variant_ids()) {
    const auto inst = make_variant<double>(id, n);
    for (double x : {0.2, 0.5, 0.8}) {
      const auto k = static_cast<Index>(x * n);
      const double g_fin = n * inst.spec.G(k);
      const double h_fin = n * (1.0 - inst.spec.H(k));
      const double xr = static_cast<double>(k + 1) / n;
      CAPTURE(variant_info(id).name);
      CAPTURE(x);
      CHECK(std::abs(g_fin - inst.spec.g_limit(xr)) <= 1e-3 * (1.0 + std::abs(g_fin)));
      CHECK(std::abs(h_fin - inst.spec.h_limit(xr)) <= 1e-3 * (1.0 + std::abs(h_fin)));
    }
  }
}

TEST_CASE("closed-form curves solve the limit equation f' = f h - g") {
  for (const auto id : testsup::all_variant_ids()) {
    const auto inst = make_variant<double>(id, 101);
    const auto f = closed_form_f(id, inst.params);
    double worst = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double x = 0.05 + 0.90 * i / 1000.0;
      const double h = 1e-5;
      const double fp = (f(x + h) - f(x - h)) / (2.0 * h);
      const double rhs = f(x) * inst.spec.h_limit(x) - inst.spec.g_limit(x);
      worst = std::max(worst, std::abs(fp - rhs));
    }
    CAPTURE(variant_info(id).name);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("closed-form curves hit the terminal value at x = 1") {
  for (const auto id : testsup::all_variant_ids()) {
    const auto& info = variant_info(id);
    if (info.singular_at_one) continue;  // limit and terminal decouple there
    const auto inst = make_variant<double>(id, 101);
    const auto f = closed_form_f(id, inst.params);
    CAPTURE(info.name);
    CHECK(std::abs(f(1.0) - static_cast<double>(inst.spec.mu)) <= 1e-9);
  }
}

TEST_CASE("analytic second derivatives match finite differences") {
  for (const auto id : testsup::all_variant_ids()) {
    const auto inst = make_variant<double>(id, 101);
    const auto fpp = closed_form_f_pp(id, inst.params);
    if (!fpp) continue;
    const auto f = closed_form_f(id, inst.params);
    double worst = 0.0;
    for (int i = 1; i < 200; ++i) {
      const double x = 0.1 + 0.8 * i / 200.0;
      const double h = 1e-4;
      const double fd = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
      worst = std::max(worst, std::abs(fd - fpp(x)) / (1.0 + std::abs(fpp(x))));
    }
    CAPTURE(variant_info(id).name);
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("lottery accepts monotone prize profiles and stays optimal") {
  VariantParams square;
  square.Y = [](double x) { return x * x; };
  square.y_name = "square";
  CHECK(threshold_optimality_gap<double>(VariantId::lottery, 1000, {}) <= 1e-10);
  CHECK(threshold_optimality_gap<double>(VariantId::lottery, 1000, square) <= 1e-10);
}

TEST_CASE("threshold rules attain the unconstrained optimum") {
  for (const auto id : testsup::all_variant_ids()) {
    for (Index n : {10, 100, 1000}) {
      CAPTURE(variant_info(id).name);
      CAPTURE(n);
      CHECK(threshold_optimality_gap<double>(id, n) <= 1e-10);
    }
  }
  // Pinned instances where both dynamic programs agree to full precision.
  CHECK(threshold_optimality_gap<double>(VariantId::classical, 100) <= 1e-12);
  CHECK(threshold_optimality_gap<double>(VariantId::postdoc, 100) <= 1e-12);
  CHECK(threshold_optimality_gap<double>(VariantId::wildcard, 50) <= 1e-12);
}

TEST_CASE("composite limit maps the curve to the frozen payoffs") {
  for (const auto& frozen : testsup::frozen_limits()) {
    const VariantParams params;
    const auto f = closed_form_f(frozen.id, params);
    const double payoff = composite_limit(frozen.id, params, frozen.theta, f(frozen.theta));
    CAPTURE(variant_info(frozen.id).name);
    CHECK(std::abs(payoff - frozen.payoff) <= 1e-10);
  }
}

TEST_CASE("make_variant rejects tiny horizons but accepts n = 2") {
  CHECK_THROWS_AS((void)make_variant<double>(VariantId::classical, 1), ValidationError);
  const auto res = solve_variant(make_variant<double>(VariantId::classical, 2));
  // At n = 2 both candidate rules succeed with probability 1/2.
  CHECK(res.payoff == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(res.kappa <= 1);
}

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>

#include "stoprule/backward.hpp"
#include "stoprule/variants.hpp"
#include "test_support.hpp"

using namespace stoprule;

namespace {

RecurrenceSpec<double> classical_spec(Index n) {
  return make_variant<double>(VariantId::classical, n).spec;
}

}  // namespace

TEST_CASE("backward pass reproduces the classical n=3 table by hand") {
  // F(3) = 0; F(k) = 1/3 + k/(k+1) F(k+1): F(2) = 1/3, F(1) = 1/2, F(0) = 1/3.
  const auto table = solve_backward(classical_spec(3));
  REQUIRE(table.values.size() == 4);
  CHECK(table.values[3] == 0.0);
  CHECK(table.values[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(table.values[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(table.values[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto inst = make_variant<double>(VariantId::classical, 3);
  const auto res = optimal_threshold(table, inst.payoff);
  CHECK(res.kappa == 1);
  CHECK(res.payoff == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(res.certified_by == CertifiedBy::both_agree);
  CHECK_FALSE(res.no_crossing);
}

TEST_CASE("backward pass reproduces the second-best n=4 table by hand") {
  // G(k) = k/12, H(k) = k/(k+1): table [0, 1/4, 1/3, 1/4, 0], kappa = 2.
  const auto inst = make_variant<double>(VariantId::postdoc, 4);
  const auto table = solve_backward(inst.spec);
  CHECK(table.values[4] == 0.0);
  CHECK(table.values[3] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(table.values[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(table.values[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(table.values[0] == 0.0);
  const auto res = optimal_threshold(table, inst.payoff);
  CHECK(res.kappa == 2);
  CHECK(res.payoff == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("zero immediate term and unit continuation keep the terminal value") {
  RecurrenceSpec<double> spec;
  spec.n = 50;
  spec.mu = 0.875;
  spec.G = [](Index) { return 0.0; };
  spec.H = [](Index) { return 1.0; };
  const auto table = solve_backward(spec);
  for (Index k = 0; k <= spec.n; ++k) CHECK(table.values[k] == 0.875);
}

TEST_CASE("optimal rule takes an always-available constant prize") {
  PayoffModel<double> payoff;
  payoff.n = 2;
  payoff.p = [](Index) { return 1.0; };
  payoff.stop_payoff = [](Index) { return 5.0; };
  CHECK(solve_optimal(payoff, 0.0) == 5.0);
}

TEST_CASE("decreasing stop values yield kappa zero with the no-crossing flag") {
  // F stays at 0 while the stop payoff is strictly positive, so no k has
  // F(k) > stop(k); the threshold degenerates to "stop immediately".
  RecurrenceSpec<double> spec;
  spec.n = 10;
  spec.mu = 0.0;
  spec.G = [](Index) { return 0.0; };
  spec.H = [](Index) { return 1.0; };
  const auto table = solve_backward(spec);
  PayoffModel<double> payoff;
  payoff.n = 10;
  payoff.p = [](Index) { return 1.0; };
  payoff.stop_payoff = [](Index k) { return 1.0 / static_cast<double>(k); };
  const auto res = optimal_threshold(table, payoff);
  CHECK(res.kappa == 0);
  CHECK(res.no_crossing);
  CHECK(res.certified_by == CertifiedBy::argmax);
}

TEST_CASE("validation and diagnostic errors fire on malformed input") {
  RecurrenceSpec<double> spec;
  spec.n = 1;
  spec.G = [](Index) { return 0.0; };
  spec.H = [](Index) { return 1.0; };
  CHECK_THROWS_AS((void)solve_backward(spec), ValidationError);

  spec.n = 5;
  spec.G = nullptr;
  CHECK_THROWS_AS((void)solve_backward(spec), ValidationError);

  spec.G = [](Index k) {
    return k == 2 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  CHECK_THROWS_AS((void)solve_backward(spec), DiagnosticError);
}

TEST_CASE("streaming scan agrees with the table-based certification") {
  for (const auto id : testsup::all_variant_ids()) {
    for (Index n : {7, 40, 333}) {
      const auto inst = make_variant<double>(id, n);
      const auto table = solve_backward(inst.spec);
      const auto via_table = certify_table(inst, table);
      const auto via_scan = solve_variant(inst);
      CAPTURE(static_cast<int>(id));
      CAPTURE(n);
      CHECK(via_scan.kappa == via_table.kappa);
      CHECK(via_scan.payoff == doctest::Approx(via_table.payoff).epsilon(1e-14));
      CHECK(via_scan.certified_by == via_table.certified_by);
      CHECK(via_scan.no_crossing == via_table.no_crossing);
    }
  }
}

TEST_CASE("solves are deterministic across repeated runs") {
  const auto a = solve_variant(make_variant<double>(VariantId::penalty, 5000));
  const auto b = solve_variant(make_variant<double>(VariantId::penalty, 5000));
  CHECK(a.kappa == b.kappa);
  CHECK(a.payoff == b.payoff);
}

TEST_CASE("double and long double lanes agree to double roundoff") {
  for (const auto id : testsup::all_variant_ids()) {
    const auto d = solve_variant(make_variant<double>(id, 2000));
    const auto l = solve_variant(make_variant<long double>(id, 2000));
    CAPTURE(static_cast<int>(id));
    CHECK(d.kappa == l.kappa);
    CHECK(std::abs(d.payoff - static_cast<double>(l.payoff)) <= 1e-12);
  }
}

TEST_CASE("table values stay within the stop payoff envelope") {
  // With 0 <= H <= 1 and G = (1 - H) * (a convex mix of stop values), F is
  // bounded by the extreme stop values and the terminal value.
  for (const auto id : testsup::all_variant_ids()) {
    if (id == VariantId::best_or_worst) continue;  // H(0) < 0 by construction
    const auto inst = make_variant<double>(id, 200);
    double lo = static_cast<double>(inst.spec.mu), hi = lo;
    for (Index k = 1; k <= 200; ++k) {
      lo = std::min(lo, inst.payoff.stop_payoff(k));
      hi = std::max(hi, inst.payoff.stop_payoff(k));
    }
    const auto table = solve_backward(inst.spec);
    for (Index k = 0; k <= 200; ++k) {
      CAPTURE(static_cast<int>(id));
      CAPTURE(k);
      CHECK(table.values[k] >= lo - 1e-12);
      CHECK(table.values[k] <= hi + 1e-12);
    }
  }
}

TEST_CASE("threshold value matches the unconstrained optimum for the classical rule") {
  for (Index n : {10, 100, 1000}) {
    const auto inst = make_variant<double>(VariantId::classical, n);
    const auto table = solve_backward(inst.spec);
    const double best = table.values.maxCoeff();
    const double optimal = solve_optimal(inst.payoff, inst.spec.mu);
    CHECK(std::abs(optimal - best) <= 1e-10 * std::max(1.0, std::abs(best)));
  }
}

TEST_CASE("classical threshold rule is optimal at n = 10^7") {
  const auto inst = make_variant<double>(VariantId::classical, 10000000);
  const double optimal = solve_optimal(inst.payoff, inst.spec.mu);
  const auto res = solve_variant(inst);
  // the two recurrences round differently; drift stays ~1e-11 over 10^7 steps
  CHECK(std::abs(optimal - res.payoff) <= 1e-10);
}

TEST_CASE("streaming scan runs in linear time") {
  const auto time_scan = [](Index n) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto inst = make_variant<double>(VariantId::classical, n);
      const auto start = std::chrono::steady_clock::now();
      const auto res = solve_variant(inst);
      const auto stop = std::chrono::steady_clock::now();
      CHECK(res.kappa > 0);
      best = std::min(best, std::chrono::duration<double>(stop - start).count());
    }
    return best;
  };
  const double t1 = time_scan(1000000);
  const double t2 = time_scan(2000000);
  // Doubling n should roughly double the time; allow wide scheduling slack.
  CHECK(t2 <= 4.0 * std::max(t1, 1e-4));
}

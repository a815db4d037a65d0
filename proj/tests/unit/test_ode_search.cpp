#include <doctest.h>

#include <cmath>

#include "stoprule/ode.hpp"
#include "stoprule/search.hpp"
#include "stoprule/variants.hpp"
#include "test_support.hpp"

using namespace stoprule;

TEST_CASE("sampled function interpolates cubics exactly and clamps outside") {
  const auto cubic = [](double x) { return 2.0 * x * x * x - x * x + 3.0 * x - 1.0; };
  Vxd xs(8), ys(8);
  for (int i = 0; i < 8; ++i) {
    xs[i] = 0.1 + 0.1 * i;
    ys[i] = cubic(xs[i]);
  }
  const SampledFunction f(xs, ys);
  for (int i = 0; i < 8; ++i) CHECK(f(xs[i]) == ys[i]);  // exact at nodes
  for (double x : {0.13, 0.25, 0.4999, 0.71}) {
    CHECK(f(x) == doctest::Approx(cubic(x)).epsilon(1e-13));
  }
  CHECK(f(-5.0) == ys[0]);
  CHECK(f(9.0) == ys[7]);
  CHECK(f.x_min() == xs[0]);
  CHECK(f.x_max() == xs[7]);
}

TEST_CASE("backward integration converges at fourth order") {
  // y' = y - g with g chosen so the exact solution is sin(4x) + 2; the
  // oscillation keeps the discretization error well above roundoff on the
  // coarse grids so the order measurement is stable.
  OdeProblem problem;
  problem.g = [](double x) { return std::sin(4.0 * x) + 2.0 - 4.0 * std::cos(4.0 * x); };
  problem.h = [](double) { return 1.0; };
  problem.terminal = std::sin(4.0) + 2.0;

  // Measure at cell midpoints: fixed off-grid points sit at grid-dependent
  // fractional positions and muddy the ratio, midpoints do not.
  const auto error_at = [&](int grid_points) {
    const auto f = integrate_ode(problem, grid_points);
    const auto& xs = f.grid();
    double worst = 0.0;
    for (Index i = 1; i < xs.size(); ++i) {
      const double x = 0.5 * (xs[i - 1] + xs[i]);
      worst = std::max(worst, std::abs(f(x) - (std::sin(4.0 * x) + 2.0)));
    }
    return worst;
  };

  const double coarse = error_at(101);
  const double fine = error_at(201);
  CHECK(coarse <= 2e-7);
  CHECK(fine <= 2e-8);
  CHECK(coarse / fine >= 12.0);  // halve the step, gain about 2^4
}

TEST_CASE("integration reproduces closed solutions of catalog problems") {
  // Classical: y' = y/x - 1, y(1) = 0, exact y = -x log x.
  OdeProblem classical;
  classical.g = [](double) { return 1.0; };
  classical.h = [](double x) { return 1.0 / x; };
  classical.terminal = 0.0;
  const auto fc = integrate_ode(classical);
  CHECK(std::abs(fc(0.5) - (-0.5 * std::log(0.5))) <= 1e-8);
  CHECK(std::abs(fc(std::exp(-1.0)) - std::exp(-1.0)) <= 1e-8);

  // Duration: y' = y/x - (1 - x), exact y = x^2 - x - x log x.
  OdeProblem duration;
  duration.g = [](double x) { return 1.0 - x; };
  duration.h = [](double x) { return 1.0 / x; };
  duration.terminal = 0.0;
  const auto fd = integrate_ode(duration);
  const double theta = 0.203187869979979953838479062062;
  CHECK(std::abs(fd(theta) - 0.161902559472978714911800490494) <= 1e-7);

  // Zero dynamics keep the terminal value everywhere.
  OdeProblem flat;
  flat.g = [](double) { return 0.0; };
  flat.h = [](double) { return 0.0; };
  flat.terminal = 0.625;
  const auto ff = integrate_ode(flat);
  CHECK(ff(0.001) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(ff(0.999) == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("integration validates its grid") {
  OdeProblem p;
  p.g = [](double) { return 0.0; };
  p.h = [](double) { return 0.0; };
  CHECK_THROWS_AS((void)integrate_ode(p, 99), ValidationError);
  CHECK_NOTHROW((void)integrate_ode(p, 100));
}

TEST_CASE("argmax search refines smooth maxima to high accuracy") {
  const auto r1 = find_argmax([](double x) { return -x * std::log(x); }, 1e-6, 1.0);
  CHECK(std::abs(r1.x - std::exp(-1.0)) <= 1e-9);
  CHECK(std::abs(r1.value - std::exp(-1.0)) <= 1e-12);

  const auto r2 = find_argmax([](double x) { return 2.0 * x - 2.0 * x * x; }, 0.0, 1.0);
  CHECK(std::abs(r2.x - 0.5) <= 1e-10);
  CHECK(std::abs(r2.value - 0.5) <= 1e-12);

  const auto r3 = find_argmax([](double x) { return x * (1.0 - x); }, 0.0, 1.0);
  CHECK(std::abs(r3.x - 0.5) <= 1e-9);
}

TEST_CASE("argmax search refuses flat objectives") {
  CHECK_THROWS_AS((void)find_argmax([](double) { return 1.0; }, 0.0, 1.0), DiagnosticError);
}

TEST_CASE("crossing search finds unique sign changes") {
  const auto identity = [](double x) { return x; };

  // Wildcard limit curve against the stop line.
  const auto fw = closed_form_f(VariantId::wildcard, {});
  const double xw = find_crossing(fw, identity, 1e-3, 0.999);
  CHECK(std::abs(xw - 0.545605016560749744861914679986) <= 1e-9);

  // Interruption limit curve against the stop line.
  const auto fi = closed_form_f(VariantId::interruption, {});
  const double xi = find_crossing(fi, identity, 1e-3, 0.999);
  CHECK(std::abs(xi - 0.271054590321180799501545429466) <= 1e-9);

  // Polynomial pair with the crossing at 2/3 (the one at 0 lies outside).
  const double xp = find_crossing([](double x) { return 2.0 * x - 2.0 * x * x; },
                                  [](double x) { return x * x; }, 0.1, 0.99);
  CHECK(std::abs(xp - 2.0 / 3.0) <= 1e-10);
}

TEST_CASE("crossing search rejects missing or ambiguous crossings") {
  const auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS((void)find_crossing([](double x) { return 1.0 + x; }, zero, 0.0, 1.0),
                  DiagnosticError);
  CHECK_THROWS_AS((void)find_crossing([](double x) { return std::sin(10.0 * x); }, zero, 0.1, 2.0),
                  DiagnosticError);
}

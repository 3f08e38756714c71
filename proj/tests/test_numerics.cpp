#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qaction/ode.hpp"
#include "qaction/quadrature.hpp"
#include "qaction/rootfind.hpp"

using namespace qaction;

TEST_CASE("gauss-kronrod handles smooth integrands to tight tolerance") {
  double v = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(std::fabs(v - 2.0) < 1e-13);

  double g = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
  CHECK(std::fabs(g - std::sqrt(M_PI)) < 1e-12);
}

TEST_CASE("sqrt-endpoint transform integrates turning-point style kernels") {
  // Half-circle area with sqrt endpoints on both sides.
  auto f = [](double x) { return std::sqrt(1.0 - x * x); };
  double v = integrate_sqrt_endpoints(f, -1.0, 1.0, true, true);
  CHECK(std::fabs(v - M_PI / 2) < 1e-12);

  // Inverse-sqrt singularity at the lower end.
  auto g = [](double x) { return 1.0 / std::sqrt(x); };
  double w = integrate_sqrt_endpoints(g, 0.0, 4.0, true, false);
  CHECK(std::fabs(w - 4.0) < 1e-11);
}

TEST_CASE("segmented integration splits at kinks") {
  auto f = [](double x) { return std::fabs(x); };
  double v = integrate_segmented(f, -1.0, 2.0, {0.0});
  CHECK(std::fabs(v - 2.5) < 1e-13);
}

TEST_CASE("dormand-prince reproduces exp and circular motion") {
  DormandPrince<2> ode;
  ode.rtol = 1e-12;
  ode.atol = 1e-14;

  std::array<double, 2> y{1.0, 0.0};
  ode.integrate([](double, const std::array<double, 2>& s,
                   std::array<double, 2>& d) { d = {s[0], 0.0}; },
                0.0, 2.0, y);
  CHECK(std::fabs(y[0] - std::exp(2.0)) < 1e-9);

  y = {1.0, 0.0};
  ode.integrate([](double, const std::array<double, 2>& s,
                   std::array<double, 2>& d) { d = {-s[1], s[0]}; },
                0.0, 10.0, y);
  CHECK(std::fabs(y[0] - std::cos(10.0)) < 1e-8);
  CHECK(std::fabs(y[1] - std::sin(10.0)) < 1e-8);
}

TEST_CASE("dormand-prince integrates backwards") {
  DormandPrince<2> ode;
  ode.rtol = 1e-12;
  std::array<double, 2> y{std::exp(1.0), 0.0};
  ode.integrate([](double, const std::array<double, 2>& s,
                   std::array<double, 2>& d) { d = {s[0], 0.0}; },
                1.0, 0.0, y);
  CHECK(std::fabs(y[0] - 1.0) < 1e-10);
}

TEST_CASE("bracket scan and hybrid refinement find roots") {
  auto f = [](double x) { return std::cos(x); };
  auto brackets = bracket_scan(f, 0.0, 10.0, 101);
  REQUIRE(brackets.size() == 3);
  double r = solve_bracketed(f, brackets[0], 1e-15);
  CHECK(std::fabs(r - M_PI / 2) < 1e-12);

  double b = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(std::fabs(b - std::sqrt(2.0)) < 1e-12);
}

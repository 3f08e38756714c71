#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qaction/discretize.hpp"
#include "qaction/errors.hpp"
#include "qaction/quadrature.hpp"
#include "qaction/rootfind.hpp"

using namespace qaction;

TEST_CASE("turning points of the harmonic oscillator at E=1/2 are +-1") {
  Potential p = builtin("harmonic_1d");
  auto tps = locate_turning_points(p, 0.5, -8.0, 8.0);
  REQUIRE(tps.size() == 2);
  CHECK(tps[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(tps[1] == doctest::Approx(1.0).epsilon(1e-10));
  for (double t : tps) CHECK(std::fabs(p.eval(t) - 0.5) <= 1e-12);
}

TEST_CASE("1D Coulomb at E=-1/2 has its right turning point at x=2") {
  Potential p = builtin("coulomb_1d");
  auto tps = locate_turning_points(p, -0.5, 1e-6, 50.0);
  REQUIRE(tps.size() == 1);
  CHECK(tps[0] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("double oscillator below the barrier has four turning points") {
  Potential p = builtin("double_oscillator");
  double e = 14.31247;
  auto tps = locate_turning_points(p, e, -16.0, 16.0);
  REQUIRE(tps.size() == 4);
  double inner = 3.0 - std::sqrt(e / 10.0);
  double outer = 3.0 + std::sqrt(e / 10.0);
  CHECK(tps[0] == doctest::Approx(-outer).epsilon(1e-9));
  CHECK(tps[1] == doctest::Approx(-inner).epsilon(1e-9));
  CHECK(tps[2] == doctest::Approx(inner).epsilon(1e-9));
  CHECK(tps[3] == doctest::Approx(outer).epsilon(1e-9));
}

TEST_CASE("turning points are invariant under bracket enlargement") {
  Potential p = builtin("harmonic_1d");
  auto a = locate_turning_points(p, 3.3, -4.0, 4.0);
  auto b = locate_turning_points(p, 3.3, -40.0, 40.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("tangency at a barrier top is dropped, outer crossings kept") {
  // V = (x^2-1)^2 touches E=1 at x=0 without crossing.
  Potential p = from_expression("(x^2-1)^2", {});
  auto tps = locate_turning_points(p, 1.0, -4.0, 4.0, {});
  REQUIRE(tps.size() == 2);
  CHECK(tps[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
  CHECK(tps[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("truncation reaches the decay budget (harmonic oracle)") {
  Potential p = builtin("harmonic_1d");
  PotentialScan scan(p, {});
  Truncation tr = scan.truncate(0.5);

  // Independent oracle: solve integral_1^X sqrt(x^2-1) dx = 20 by quadrature.
  auto tail = [&](double upper) {
    return integrate_sqrt_endpoints(
        [](double x) { return std::sqrt(std::fmax(0.0, x * x - 1.0)); }, 1.0,
        upper, true, false);
  };
  double x_oracle =
      bisect([&](double X) { return tail(X) - 20.0; }, 1.5, 50.0, 1e-12);

  CHECK(tr.x_d >= x_oracle - 1e-6);
  CHECK(tail(tr.x_d) >= 20.0 - 1e-6);
  CHECK(tail(tr.x_d) <= 40.0);  // overshoot bounded by the step growth
  CHECK(tr.x_c == doctest::Approx(-tr.x_d).epsilon(1e-12));  // symmetric
}

TEST_CASE("walls are hard truncations regardless of budget") {
  Potential p = builtin("infinite_well", {{"L", 1.0}});
  PotentialScan scan(p, {});
  Truncation tr = scan.truncate(20.0);
  CHECK(tr.x_c == 0.0);
  CHECK(tr.x_d == 1.0);
}

TEST_CASE("woods-saxon truncation extends past the shoulder") {
  Potential p = builtin("woods_saxon", {}, 1);
  PotentialScan scan(p, {});
  Truncation tr = scan.truncate(-0.97);
  CHECK(tr.x_d > 30.0);
  double acc = integrate(
      [&](double x) {
        double a2 = -p.kappa_sq(x, -0.97);
        return a2 > 0 ? std::sqrt(a2) : 0.0;
      },
      scan.allowed_span(-0.97).hi, tr.x_d, 1e-8);
  CHECK(acc >= 20.0 - 1e-4);
}

TEST_CASE("layers: constant potential gives constant kappa_sq") {
  Potential p = builtin("infinite_well", {{"L", 1.0}});
  double e = M_PI * M_PI / 2.0;
  Discretization d = build_layers(p, e, 0.0, 1.0, 10);
  REQUIRE(d.kappa_sq.size() == 10);
  for (double ks : d.kappa_sq)
    CHECK(ks == doctest::Approx(M_PI * M_PI).epsilon(1e-14));
  CHECK(d.layer_count * d.h() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("layers: sign of kappa_sq tracks the turning points") {
  Potential p = builtin("harmonic_1d");
  Discretization d = build_layers(p, 0.5, -6.0, 6.0, 600);
  for (int j = 0; j < d.layer_count; ++j) {
    double mid = d.midpoint(j);
    bool allowed = std::fabs(mid) < 1.0;
    CHECK((d.kappa_sq[j] > 0) == allowed);
  }
}

TEST_CASE("doubling the layer count preserves kappa_sq signs") {
  Potential p = builtin("double_oscillator");
  double e = 42.0;
  Discretization coarse = build_layers(p, e, -8.0, 8.0, 400);
  Discretization fine = build_layers(p, e, -8.0, 8.0, 800);
  double width = std::sqrt(e / 10.0);
  for (int j = 0; j < coarse.layer_count; ++j) {
    double mid = coarse.midpoint(j);
    // Skip the immediate turning-point neighborhoods where the sign flips.
    if (std::fabs(std::fabs(std::fabs(mid) - 3.0) - width) < 0.1) continue;
    bool coarse_allowed = coarse.kappa_sq[j] > 0;
    CHECK(coarse_allowed == (fine.kappa_sq[2 * j] > 0));
    CHECK(coarse_allowed == (fine.kappa_sq[2 * j + 1] > 0));
  }
}

TEST_CASE("midpoint sampling converges to the layer average O(h^2)") {
  Potential p = builtin("harmonic_1d");
  auto layer_err = [&](int n) {
    Discretization d = build_layers(p, 0.5, -2.0, 2.0, n);
    double worst = 0;
    for (int j = 0; j < n; ++j) {
      double a = d.boundary(j), b = d.boundary(j + 1);
      double avg =
          integrate([&](double x) { return p.eval(x); }, a, b) / (b - a);
      worst = std::fmax(worst, std::fabs(p.eval(d.midpoint(j)) - avg));
    }
    return worst;
  };
  double e1 = layer_err(50);
  double e2 = layer_err(100);
  CHECK(e2 < e1 / 3.0);
}

TEST_CASE("no turning points below the minimum") {
  Potential p = builtin("harmonic_1d");
  CHECK_THROWS_AS(locate_turning_points(p, -1.0, -8.0, 8.0), NoTurningPoints);
}

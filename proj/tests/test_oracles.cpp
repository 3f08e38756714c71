#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "qaction/errors.hpp"
#include "qaction/oracles.hpp"
#include "qaction/quantize.hpp"

using namespace qaction;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("analytic catalog values") {
  CHECK(analytic_eigenvalue(builtin("infinite_well", {{"L", 1.0}}), 2) ==
        doctest::Approx(9.0 * kPi * kPi / 2).epsilon(1e-15));
  CHECK(analytic_eigenvalue(builtin("harmonic_radial", {}, 3), 1) ==
        doctest::Approx(6.5).epsilon(1e-15));
  CHECK(analytic_eigenvalue(builtin("coulomb_radial", {}, 0), 0) ==
        doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(analytic_eigenvalue(builtin("harmonic_1d"), 4) ==
        doctest::Approx(4.5).epsilon(1e-15));
  CHECK_THROWS_AS(analytic_eigenvalue(builtin("woods_saxon", {}, 1), 0),
                  NoCatalogEntry);
}

TEST_CASE("numerov matches the analytic catalog") {
  NumerovOptions opts;
  CHECK(numerov_eigenvalue(builtin("harmonic_1d"), 0, opts) ==
        doctest::Approx(0.5).epsilon(2e-9));
  CHECK(numerov_eigenvalue(builtin("harmonic_1d"), 3, opts) ==
        doctest::Approx(3.5).epsilon(2e-9));
  CHECK(numerov_eigenvalue(builtin("infinite_well", {{"L", 1.0}}), 1, opts) ==
        doctest::Approx(4.0 * kPi * kPi / 2).epsilon(2e-9));
  CHECK(numerov_eigenvalue(builtin("harmonic_radial", {}, 2), 1, opts) ==
        doctest::Approx(5.5).epsilon(2e-9));
  CHECK(numerov_eigenvalue(builtin("coulomb_radial", {}, 1), 0, opts) ==
        doctest::Approx(-0.125).epsilon(2e-8));
}

TEST_CASE("numerov matches analytic spectra through n = 8") {
  for (auto& [p, label] : std::vector<std::pair<Potential, const char*>>{
           {builtin("harmonic_1d"), "harmonic_1d"},
           {builtin("infinite_well", {{"L", 1.0}}), "well"},
           {builtin("harmonic_radial", {}, 1), "harmonic_radial"}}) {
    for (int n = 0; n <= 8; ++n) {
      double exact = analytic_eigenvalue(p, n);
      double nv = numerov_eigenvalue(p, n);
      CHECK_MESSAGE(std::fabs(nv - exact) <= 1e-8 * std::fabs(exact) + 1e-9,
                    label, " n=", n);
    }
  }
}

TEST_CASE("numerov and the solver agree on the Woods-Saxon well") {
  Potential p = builtin("woods_saxon", {}, 1);
  for (int n : {0, 4}) {
    double oracle = numerov_eigenvalue(p, n);
    Eigensolution sol = solve_eigenvalue(p, n);
    CHECK(std::fabs(sol.e - oracle) < 1e-8);
  }
}

TEST_CASE("numerov refuses levels beyond the bound spectrum") {
  Potential p = from_expression("-0.05/(1+exp(2*(abs(x)-4)))", {});
  CHECK_THROWS_AS(numerov_eigenvalue(p, 12), NoSuchBoundState);
}

TEST_CASE("plain WKB on the infinite well gives (n+1/2)^2 E0") {
  Potential p = builtin("infinite_well", {{"L", 1.0}});
  double e0 = kPi * kPi / 2.0;
  for (int n = 0; n <= 2; ++n) {
    double e = wkb_eigenvalue(p, n, false);
    double expect = (n + 0.5) * (n + 0.5) * e0;
    CHECK(e == doctest::Approx(expect).epsilon(1e-9));
  }
  // The error against the exact spectrum is (1 - 1/4) E0 at n=0, i.e. WKB
  // misses the well's ground state badly while the exact condition nails it.
  double wkb0 = wkb_eigenvalue(p, 0, false);
  CHECK(std::fabs(wkb0 - e0) ==
        doctest::Approx(0.75 * e0).epsilon(1e-8));
}

TEST_CASE("WKB is exact for the 1D harmonic oscillator") {
  Potential p = builtin("harmonic_1d");
  for (int n = 0; n <= 3; ++n)
    CHECK(wkb_eigenvalue(p, n, false) ==
          doctest::Approx(n + 0.5).epsilon(1e-10));
}

TEST_CASE("Langer-corrected WKB is exact for the radial Coulomb problem") {
  for (int l : {0, 1, 2}) {
    Potential p = builtin("coulomb_radial", {}, l);
    for (int n = 0; n <= 2; ++n) {
      double big_n = l + n + 1;
      CHECK(wkb_eigenvalue(p, n, true) ==
            doctest::Approx(-0.5 / (big_n * big_n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("fixtures: verbatim strings, anomaly flag, labels") {
  auto tables = load_fixtures();
  REQUIRE(tables.size() == 2);

  const TableFixture& t1 = find_fixture(tables, "table1");
  CHECK(t1.third_label == "maslov");
  REQUIRE(t1.rows.size() == 9);
  CHECK(t1.rows[0].present_str == "-0.97815416");
  CHECK(t1.rows[0].exact_str == "-0.97815416");
  CHECK(t1.rows[8].present_str == "-0.09248716");
  CHECK(t1.rows[7].anomaly);  // printed Maslov value repeats row 8
  CHECK(t1.rows[7].third_str == t1.rows[8].third_str);
  for (int i = 0; i < 8; ++i) CHECK(t1.rows[i].n == i);

  const TableFixture& t2 = find_fixture(tables, "table2");
  CHECK(t2.third_label == "swkb");
  REQUIRE(t2.rows.size() == 9);
  CHECK(t2.rows[0].present_str == "14.312470");
  CHECK(t2.rows[8].present_str == "124.328691");
  for (const auto& row : t2.rows) CHECK(!row.anomaly);

  CHECK_THROWS_AS(find_fixture(tables, "table9"), FixtureError);
}

TEST_CASE("fixture directory override via environment") {
  setenv("QACTION_FIXTURES", "/nonexistent-dir", 1);
  CHECK_THROWS_AS(load_fixtures(), FixtureError);
  unsetenv("QACTION_FIXTURES");
  CHECK(load_fixtures().size() == 2);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "qaction/errors.hpp"
#include "qaction/potential.hpp"

using namespace qaction;

TEST_CASE("parser evaluates the documented example expressions") {
  auto ast = parse_potential("x^2/2", {});
  CHECK(ast->eval(1.0) == doctest::Approx(0.5).epsilon(1e-15));

  auto dble = parse_potential("10*(abs(x)-3)^2", {});
  CHECK(dble->eval(3.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(dble->eval(0.0) == doctest::Approx(90.0).epsilon(1e-15));

  auto ws = parse_potential("-1/(1+exp(2*(x-r0)))", {{"r0", 30.0}});
  CHECK(ws->eval(30.0) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("parser precedence: ^ binds tighter than unary minus, right-assoc") {
  CHECK(parse_potential("-x^2", {})->eval(3.0) == -9.0);
  CHECK(parse_potential("2^3^2", {})->eval(0.0) == 512.0);
  CHECK(parse_potential("2^-2", {})->eval(0.0) == 0.25);
  CHECK(parse_potential("1-2-3", {})->eval(0.0) == -4.0);
  CHECK(parse_potential("12/4/3", {})->eval(0.0) == 1.0);
}

TEST_CASE("parser reports byte offsets for syntax errors") {
  try {
    parse_potential("x^2 + ", {});
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 6);
  }
  try {
    parse_potential("x + (2*y)", {});
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name == "y");
    CHECK(e.offset == 7);
  }
  CHECK_THROWS_AS(parse_potential("", {}), SyntaxError);
  CHECK_THROWS_AS(parse_potential("sin 3", {}), SyntaxError);
}

TEST_CASE("parse -> unparse -> parse is a fixed point") {
  std::map<std::string, double> params{{"r0", 30.0}, {"a", 2.5}};
  const char* sources[] = {
      "x^2/2",
      "10*(abs(x)-3)^2",
      "-1/(1+exp(2*(x-r0)))",
      "a*sin(x)+cos(x)^2-sqrt(abs(x)+1)",
      "x^-2",
      "-(x+1)/(x-2)",
      "tanh(x/a)*ln(x^2+1)",
      "2^3^x",
  };
  for (const char* src : sources) {
    auto ast = parse_potential(src, params);
    std::string printed = ast->unparse();
    auto reparsed = parse_potential(printed, params);
    CHECK_MESSAGE(ast->equals(*reparsed), "round trip failed for: ", src,
                  " -> ", printed);
    CHECK(reparsed->unparse() == printed);
  }
}

TEST_CASE("builtin catalog matches the defining formulas") {
  Potential h = builtin("harmonic_1d");
  CHECK(h.eval(1.0) == doctest::Approx(0.5).epsilon(1e-15));

  Potential ws = builtin("woods_saxon", {}, 1);
  // -0.5 + l(l+1)/(2*900) at the shoulder radius
  CHECK(ws.eval(30.0) ==
        doctest::Approx(-0.5 + 2.0 / 1800.0).epsilon(1e-12));

  Potential c3 = builtin("coulomb_radial", {}, 1);
  CHECK(c3.eval(1.0) == doctest::Approx(0.0).epsilon(1e-15));

  Potential dbl = builtin("double_oscillator");
  CHECK(dbl.eval(0.0) == doctest::Approx(90.0).epsilon(1e-15));

  Potential well = builtin("infinite_well", {{"L", 1.0}});
  CHECK(well.eval(0.5) == 0.0);
  CHECK_THROWS_AS(well.eval(1.5), DomainError);
  CHECK_THROWS_AS(c3.eval(-1.0), DomainError);
  CHECK_THROWS_AS(ws.eval(0.0), DomainError);

  CHECK_THROWS_AS(builtin("no_such_potential"), UnknownBuiltin);
  CHECK_THROWS_AS(builtin("infinite_well", {{"L", -1.0}}), InvalidParam);
}

TEST_CASE("woods-saxon far tail is dominated by the centrifugal term") {
  Potential ws = builtin("woods_saxon", {}, 1);
  for (double r : {60.0, 100.0, 400.0}) {
    double centrifugal = 1.0 / (r * r);
    CHECK(std::fabs(ws.eval(r) - centrifugal) <= std::exp(-2.0 * (r - 30.0)));
  }
  // No overflow far out.
  CHECK(std::isfinite(ws.eval(1e6)));
}

TEST_CASE("symmetric builtins evaluate evenly") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  Potential h = builtin("harmonic_1d");
  Potential d = builtin("double_oscillator");
  for (int i = 0; i < 1000; ++i) {
    double x = dist(rng);
    CHECK(h.eval(x) == h.eval(-x));
    CHECK(d.eval(x) == d.eval(-x));
  }
}

TEST_CASE("parsed harmonic matches the builtin on a dense grid") {
  Potential parsed = from_expression("x^2/2", {});
  Potential built = builtin("harmonic_1d");
  for (int i = 0; i < 10000; ++i) {
    double x = -8.0 + 16.0 * i / 9999.0;
    // pow(x,2) and x*x may differ by a couple of ulp.
    CHECK(std::fabs(parsed.eval(x) - built.eval(x)) <=
          4 * std::numeric_limits<double>::epsilon() *
              std::fabs(built.eval(x)));
  }
}

TEST_CASE("centrifugal term equals l(l+1)/(2 m x^2) exactly") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> dist(0.05, 50.0);
  for (int l : {1, 2, 5}) {
    Potential with_l = builtin("harmonic_radial", {}, l);
    Potential without = builtin("harmonic_radial", {}, 0);
    for (int i = 0; i < 200; ++i) {
      double r = dist(rng);
      double expect = l * (l + 1) / (2.0 * r * r);
      // The difference is exact up to cancellation against the base V.
      double slack = 4 * std::numeric_limits<double>::epsilon() *
                     std::fabs(without.eval(r));
      CHECK(std::fabs((with_l.eval(r) - without.eval(r)) - expect) <=
            slack + 1e-18);
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  Potential ws = builtin("woods_saxon", {}, 1);
  double a = ws.eval(17.125);
  double b = ws.eval(17.125);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("dissociation probing classifies expression tails") {
  CHECK(from_expression("x^2/2", {}).confining());
  Potential c = from_expression("-1/(1+exp(2*(x-5)))", {});
  CHECK(!c.confining());
  CHECK(std::fabs(c.dissociation_limit) < 1e-9);
}

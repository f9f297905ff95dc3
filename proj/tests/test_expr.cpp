#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kyt/expr.hpp"

using kyt::EvalError;
using kyt::ParseError;
using kyt::Rational;
using kyt::ScalarField;

namespace {

// Central finite difference, the independent oracle for symbolic derivatives.
double central_diff(const ScalarField& f, std::vector<double> x, int i, double h) {
  x[i - 1] += h;
  double hi = f.eval(x);
  x[i - 1] -= 2 * h;
  double lo = f.eval(x);
  return (hi - lo) / (2 * h);
}

std::vector<double> random_point(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x[i] = lo + (hi - lo) * u;
  }
  return x;
}

}  // namespace

TEST_CASE("parse and evaluate basic expressions") {
  auto f = ScalarField::parse("x1^2 + ln(x2)", 2);
  CHECK(f.eval(std::vector<double>{1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(f.eval(std::vector<double>{2.0, 1.0}) == doctest::Approx(4.0));

  auto zero = ScalarField::parse("0", 3);
  CHECK(zero.is_zero());
  CHECK(zero.eval(std::vector<double>{0.3, -2.0, 5.0}) == 0.0);
}

TEST_CASE("coordinate index out of range is a parse error") {
  CHECK_THROWS_AS(ScalarField::parse("x3", 2), ParseError);
  try {
    ScalarField::parse("1 + x3", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    ScalarField::parse("x1 + * 2", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(ScalarField::parse("foo(x1)", 1), ParseError);
  CHECK_THROWS_AS(ScalarField::parse("(x1", 1), ParseError);
  CHECK_THROWS_AS(ScalarField::parse("x1^x1", 1), ParseError);
}

TEST_CASE("rational and decimal literals are exact") {
  auto f = ScalarField::parse("1/3", 1);
  CHECK(f.is_constant());
  auto g = ScalarField::parse("0.125", 1);
  CHECK(g.eval(std::vector<double>{0.0}) == 0.125);
  auto h = ScalarField::parse("2.5e2", 1);
  CHECK(h.eval(std::vector<double>{0.0}) == 250.0);
  auto k = ScalarField::parse("15e-1", 1);
  CHECK(k.eval(std::vector<double>{0.0}) == 1.5);
}

TEST_CASE("operator precedence and unary minus") {
  std::vector<double> x{2.0, 3.0};
  CHECK(ScalarField::parse("2 + 3*x1", 2).eval(x) == doctest::Approx(8.0));
  CHECK(ScalarField::parse("-x1^2", 2).eval(x) == doctest::Approx(-4.0));
  CHECK(ScalarField::parse("(2+x1)^2", 2).eval(x) == doctest::Approx(16.0));
  CHECK(ScalarField::parse("x1^-1", 2).eval(x) == doctest::Approx(0.5));
  CHECK(ScalarField::parse("1 - 2 - 3", 2).eval(x) == doctest::Approx(-4.0));
  CHECK(ScalarField::parse("12/4/3", 2).eval(x) == doctest::Approx(1.0));
}

TEST_CASE("evaluation domain errors") {
  std::vector<double> x{0.0, -1.0};
  CHECK_THROWS_AS(ScalarField::parse("ln(x2)", 2).eval(x), EvalError);
  CHECK_THROWS_AS(ScalarField::parse("sqrt(x2)", 2).eval(x), EvalError);
  CHECK_THROWS_AS(ScalarField::parse("1/x1", 2).eval(x), EvalError);
  CHECK_THROWS_AS(ScalarField::parse("x1^-2", 2).eval(x), EvalError);
  CHECK_THROWS_AS(ScalarField::parse("exp(x1 + 10000)", 2).eval(x), EvalError);
  try {
    ScalarField::parse("1 + ln(x1*x2)", 2).eval(x);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(e.subexpression() == "ln(x1*x2)");
  }
}

TEST_CASE("simple symbolic derivatives") {
  auto f = ScalarField::parse("x1^2", 2).diff(1);
  std::vector<double> x{3.5, 1.0};
  CHECK(f.eval(x) == doctest::Approx(7.0));

  auto g = ScalarField::parse("ln(x2)", 2).diff(2);
  CHECK(g.eval(std::vector<double>{0.0, 3.0}) == doctest::Approx(1.0 / 3.0));

  auto c = ScalarField::parse("5", 2).diff(1);
  CHECK(c.is_zero());
}

TEST_CASE("derivatives agree with the finite-difference oracle") {
  const char* exprs[] = {
      "x1^2*x2 + sin(x1)*cos(x2)",
      "exp(x1/2)*ln(3 + x2^2)",
      "sqrt(1 + x1^2 + x2^2)",
      "(x1 - x2)^3/(2 + cos(x1))",
      "1/(1 + x1^2) + x2^-2",
  };
  std::mt19937_64 rng(12345);
  for (const char* text : exprs) {
    auto f = ScalarField::parse(text, 2);
    for (int i = 1; i <= 2; ++i) {
      auto df = f.diff(i);
      for (int trial = 0; trial < 100; ++trial) {
        auto x = random_point(rng, 2, 0.5, 2.0);
        double sym = df.eval(x);
        double fd = central_diff(f, x, i, 1e-5);
        CHECK(std::abs(sym - fd) <= 1e-6 * std::max({1.0, std::abs(sym), std::abs(fd)}));
      }
    }
  }
}

TEST_CASE("diff is linear") {
  auto f = ScalarField::parse("sin(x1*x2)", 2);
  auto g = ScalarField::parse("exp(x1) + x2^3", 2);
  auto a = kyt::rat(3, 2);
  auto b = kyt::rat(-7, 3);
  auto combo = a * f + b * g;
  std::mt19937_64 rng(99);
  for (int i = 1; i <= 2; ++i) {
    auto lhs = combo.diff(i);
    auto rhs = a * f.diff(i) + b * g.diff(i);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = random_point(rng, 2, -1.0, 1.0);
      CHECK(lhs.eval(x) == doctest::Approx(rhs.eval(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mixed partials commute") {
  const char* exprs[] = {
      "exp(x1*x2)*sin(x2) + x1^3*x2^2",
      "ln(2 + x1^2 + x2^2)/(1 + x1^2)",
  };
  std::mt19937_64 rng(7);
  for (const char* text : exprs) {
    auto f = ScalarField::parse(text, 2);
    auto d12 = f.diff(1).diff(2);
    auto d21 = f.diff(2).diff(1);
    for (int trial = 0; trial < 30; ++trial) {
      auto x = random_point(rng, 2, -1.0, 1.0);
      CHECK(std::abs(d12.eval(x) - d21.eval(x)) <= 1e-10);
    }
  }
}

TEST_CASE("printing round-trips through the parser") {
  const char* exprs[] = {
      "x1^2 + ln(x2) - 3/4",
      "-(x1 + x2)*exp(-x1)",
      "sqrt(1 + x2^2)/(x1 - 2)^3",
      "1/2*x1 - 0.25*x2",
  };
  std::mt19937_64 rng(31);
  for (const char* text : exprs) {
    auto f = ScalarField::parse(text, 2);
    auto g = ScalarField::parse(f.to_string(), 2);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = random_point(rng, 2, 2.5, 3.5);
      CHECK(f.eval(x) == doctest::Approx(g.eval(x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("shared evaluation context reuses subtrees") {
  auto f = ScalarField::parse("exp(x1*x2)", 2);
  auto g = f * f + f;
  std::vector<double> x{0.3, 0.7};
  kyt::EvalContext ctx(x);
  double via_ctx = g.eval(ctx);
  CHECK(via_ctx == doctest::Approx(g.eval(x)).epsilon(1e-15));
}

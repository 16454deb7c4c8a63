#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "planeslope/expr.hpp"
#include "support.hpp"

using namespace planeslope;

namespace {

double ev(std::string_view text, std::size_t arity, std::initializer_list<double> p) {
  return eval(ScalarField(text, arity), Point(p));
}

// Random tree text over x, y using every operator and function.
std::string random_text(std::mt19937_64& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  if (depth == 0 || pick(4) == 0) {
    switch (pick(3)) {
      case 0:
        return "x";
      case 1:
        return "y";
      default: {
        std::ostringstream os;
        os.precision(17);
        os << testing::uniform(rng, 0.0, 3.0);
        return os.str();
      }
    }
  }
  const std::string a = random_text(rng, depth - 1);
  switch (pick(9)) {
    case 0:
      return a + "+" + random_text(rng, depth - 1);
    case 1:
      return a + "-" + random_text(rng, depth - 1);
    case 2:
      return a + "*" + random_text(rng, depth - 1);
    case 3:
      return a + "/(1+" + random_text(rng, depth - 1) + "^2)";
    case 4:
      return "(" + a + ")^" + std::to_string(pick(4));
    case 5:
      return "-" + a;
    case 6:
      return "sin(" + a + ")";
    case 7:
      return "exp(cos(" + a + "))";
    default:
      return "sqrt(abs(" + a + "))";
  }
}

}  // namespace

TEST_CASE("parse and evaluate the basic examples") {
  CHECK(ev("x^2*y^3", 2, {2, 1}) == 4.0);
  CHECK(ev("x^2*y/(x^4+y^2)", 2, {1, 1}) == 0.5);
  CHECK(ev("3*x+2*y+1", 2, {5, -7}) == 2.0);
}

TEST_CASE("operator precedence and associativity") {
  CHECK(ev("-2^2", 1, {0}) == -4.0);
  CHECK(ev("2^3^2", 1, {0}) == 512.0);
  CHECK(ev("2*-3", 1, {0}) == -6.0);
  CHECK(ev("1-2-3", 1, {0}) == -4.0);
  CHECK(ev("8/4/2", 1, {0}) == 1.0);
  CHECK(ev("2^-1", 1, {0}) == 0.5);
  CHECK(ev("1+2*3^2", 1, {0}) == 19.0);
  CHECK(ev("  x ^ 2 *\ty ", 2, {3, 2}) == 18.0);
  CHECK(ev("1.5e1 + .5", 1, {0}) == 15.5);
}

TEST_CASE("variable naming") {
  CHECK(ev("x+y+z", 3, {1, 2, 4}) == 7.0);
  CHECK(ev("x1+x3", 3, {1, 2, 4}) == 5.0);
  CHECK(ev("x1*x5", 5, {2, 0, 0, 0, 3}) == 6.0);
  CHECK(ev("x", 1, {7}) == 7.0);
  CHECK_THROWS_AS(parse("z", 2), UnknownIdentifier);
  CHECK_THROWS_AS(parse("x4", 3), UnknownIdentifier);
  CHECK_THROWS_AS(parse("x0", 3), UnknownIdentifier);
  CHECK_THROWS_AS(parse("y", 5), UnknownIdentifier);
  CHECK_THROWS_AS(parse("w+1", 2), UnknownIdentifier);
  try {
    parse("x + foo", 2);
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "foo");
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("syntax errors carry the byte offset") {
  try {
    parse("x/(y", 2);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse("", 2), SyntaxError);
  CHECK_THROWS_AS(parse("x+", 2), SyntaxError);
  CHECK_THROWS_AS(parse("x y", 2), SyntaxError);
  CHECK_THROWS_AS(parse("(x", 2), SyntaxError);
  CHECK_THROWS_AS(parse("x)", 2), SyntaxError);
  CHECK_THROWS_AS(parse("1.2.3", 2), SyntaxError);
  CHECK_THROWS_AS(parse("sin x", 2), SyntaxError);
  try {
    parse("x + $", 2);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("function arity") {
  CHECK_THROWS_AS(parse("sin(x,y)", 2), ArityError);
  CHECK_THROWS_AS(parse("exp()", 2), ArityError);
  CHECK(ev("sqrt(abs(-16))", 1, {0}) == 4.0);
  CHECK(ev("ln(exp(2))", 1, {0}) == doctest::Approx(2.0));
}

TEST_CASE("domain errors are raised, never returned as NaN") {
  CHECK_THROWS_AS(ev("x/y", 2, {1, 0}), DomainError);
  CHECK_THROWS_AS(ev("ln(x)", 1, {0}), DomainError);
  CHECK_THROWS_AS(ev("ln(x)", 1, {-1}), DomainError);
  CHECK_THROWS_AS(ev("sqrt(x)", 1, {-1e-300}), DomainError);
  CHECK_THROWS_AS(ev("exp(x)", 1, {1000}), DomainError);
  CHECK_THROWS_AS(ev("x^-1", 1, {0}), DomainError);
  CHECK_THROWS_AS(ev("x^0.5", 1, {-4}), DomainError);
  CHECK_THROWS_AS(ev("x^2*y/(x^4+y^2)", 2, {0, 0}), DomainError);
}

TEST_CASE("integer powers are exact for negative bases") {
  CHECK(ev("x^3", 1, {-2}) == -8.0);
  CHECK(ev("x^2", 1, {-3}) == 9.0);
  CHECK(ev("x^-2", 1, {-2}) == 0.25);
  CHECK(ev("x^0", 1, {-5}) == 1.0);
  CHECK(ev("x^0.5", 1, {4}) == doctest::Approx(2.0));
}

TEST_CASE("overrides shadow the expression at exact points only") {
  auto f = testing::pathological_field();
  CHECK(eval(f, Point{0.0, 0.0}) == 0.0);
  CHECK(eval(f, Point{1.0, 1.0}) == 0.5);
  CHECK_THROWS_AS(f.add_override({0.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.add_override({0.0}, 1.0), std::invalid_argument);

  std::mt19937_64 rng(3);
  ScalarField g("sin(x)*y + x^2", 2);
  const ScalarField plain = g;
  const Point key{0.25, -1.5};
  g.add_override(key, 42.0);
  CHECK(eval(g, key) == 42.0);
  for (int i = 0; i < 100; ++i) {
    Point p{testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2)};
    CHECK(std::bit_cast<std::uint64_t>(eval(g, p)) ==
          std::bit_cast<std::uint64_t>(eval(plain, p)));
  }
  // A neighbouring double is not the override key.
  Point near = key;
  near[0] = std::nextafter(near[0], 1.0);
  CHECK(eval(g, near) == eval(plain, near));
}

TEST_CASE("free variables") {
  CHECK(free_vars(parse("x^2*y^3", 2)) == std::set<std::size_t>{0, 1});
  CHECK(free_vars(parse("7", 2)).empty());
  CHECK(free_vars(parse("x1+x3", 3)) == std::set<std::size_t>{0, 2});
}

TEST_CASE("print/parse round trip evaluates identically") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::string text = random_text(rng, 4);
    CAPTURE(text);
    const ExprAst a = parse(text, 2);
    const ExprAst b = parse(print(a), 2);
    CHECK(print(b) == print(a));
    for (int i = 0; i < 100; ++i) {
      const double p[] = {testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2)};
      double va = 0, vb = 0;
      bool fa = false, fb = false;
      try { va = eval_ast(a, p); } catch (const DomainError&) { fa = true; }
      try { vb = eval_ast(b, p); } catch (const DomainError&) { fb = true; }
      REQUIRE(fa == fb);
      if (!fa) CHECK(std::bit_cast<std::uint64_t>(va) == std::bit_cast<std::uint64_t>(vb));
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const ScalarField f("sin(x)*exp(y)/(1+x^2) - sqrt(abs(x*y))", 2);
  const Point p{0.3, -1.7};
  const double first = eval(f, p);
  for (int i = 0; i < 100; ++i)
    CHECK(std::bit_cast<std::uint64_t>(eval(f, p)) == std::bit_cast<std::uint64_t>(first));
}

TEST_CASE("programmatic construction") {
  const ExprAst x = ExprAst::variable(2, 0), y = ExprAst::variable(2, 1);
  const ExprAst e = 2.0 * x * y - pow(y, ExprAst::constant(2, 2)) / (x + y);
  const double p[] = {1.0, 3.0};
  CHECK(eval_ast(e, p) == doctest::Approx(6.0 - 9.0 / 4.0));
  CHECK_THROWS_AS(ExprAst::variable(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(x + ExprAst::variable(3, 0), std::invalid_argument);
}

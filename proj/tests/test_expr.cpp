#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "warpcurv/eval.hpp"
#include "warpcurv/expr.hpp"
#include "warpcurv/parse.hpp"

using namespace warpcurv;
using gen::box1;
using gen::random_expr;

namespace {

Point at(Rational x1, Rational x2 = 1) {
  Point p;
  p.coordinates["x1"] = x1;
  p.coordinates["x2"] = x2;
  return p;
}

}  // namespace

TEST_CASE("parse produces the expected shapes") {
  Expr e = parse("x1^2 + 1");
  CHECK(e.kind() == Kind::sum);
  CHECK(to_string(e) == "x1^2 + 1");
  Expr w = parse("(1+2*exp(x1))");
  CHECK(is_zero(w - (1 + 2 * exp(Expr::variable("x1"))), box1()));
  CHECK(to_string(w) == "2*exp(x1) + 1");
}

TEST_CASE("parse reports the offset of a syntax error") {
  try {
    parse("x1 + * 2");
    FAIL("expected a syntax error");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 5);
  }
  CHECK_THROWS_AS(parse("x1 + y"), ParseError);
  CHECK_THROWS_AS(parse("x1 + 0.5"), ParseError);
  CHECK_THROWS_AS(parse("x1^x2"), ParseError);
  CHECK_THROWS_AS(parse("(x1 + 1"), ParseError);
  Symbols s{{"x1"}, {"a"}};
  CHECK_NOTHROW(parse("a*x1", s));
  CHECK_THROWS_AS(parse("x2", s), ParseError);
}

TEST_CASE("exponents bind tightly and associate to the right") {
  const Expr x1 = Expr::variable("x1");
  CHECK(structurally_equal(parse("x1^(1/2)"), pow(x1, Rational(1, 2))));
  CHECK(structurally_equal(parse("x1^1/2"), x1 / 2));
  CHECK(structurally_equal(parse("x1^2^3"), pow(x1, 8)));
  CHECK(structurally_equal(parse("x1^-2"), pow(x1, -2)));
  CHECK(structurally_equal(parse("-x1^2"), -pow(x1, 2)));
  CHECK(structurally_equal(parse("x1/2/3"), x1 / 6));
}

TEST_CASE("printer groups denominators") {
  const Expr x = Expr::variable("x1");
  const Expr y = Expr::variable("x2");
  CHECK(to_string(3 * x / (4 * y)) == "3*x1/(4*x2)");
  CHECK(to_string(x / (4 * Rational(5))) == "x1/20");
  CHECK(to_string(pow(x, Rational(1, 2))) == "x1^(1/2)");
  CHECK(to_string(1 / pow(x, 2)) == "1/x1^2");
  CHECK(to_string(x - y) == "x1 - x2");
  CHECK(to_string(-x) == "-x1");
}

TEST_CASE("builders simplify") {
  const Expr x = Expr::variable("x1");
  CHECK((x - x).is_zero_literal());
  CHECK((x * 0).is_zero_literal());
  CHECK(structurally_equal(x * x, pow(x, 2)));
  CHECK(structurally_equal(exp(x) * exp(-x), Expr(1)));
  CHECK(structurally_equal(pow(exp(x), 2), exp(2 * x)));
  CHECK(structurally_equal(pow(Expr(Rational(4, 9)), Rational(1, 2)), Expr(Rational(2, 3))));
  CHECK(structurally_equal(2 * (x + 1) - 2 * x, Expr(2)));
  CHECK(structurally_equal(x + Expr::variable("x2"), Expr::variable("x2") + x));
}

TEST_CASE("diff examples") {
  const Expr x1 = Expr::variable("x1");
  const Expr x2 = Expr::variable("x2");
  CHECK(structurally_equal(diff(pow(x1, 2), "x1"), 2 * x1));
  CHECK(structurally_equal(diff(exp(2 * x2), "x2"), 2 * exp(2 * x2)));
  CHECK(diff(Expr(7), "x1").is_zero_literal());
  CHECK(diff(x2, "x1").is_zero_literal());
  const Expr e = pow(x1 + 1, 2);
  const Real d = eval(diff(e, "x1"), at(1));
  CHECK(d == 4);
  const Real h("1e-6");
  Point p = at(1);
  Evaluator ev(p);
  Real plus = ev(substitute(e, {{"x1", Expr(1) + Expr(Rational(1, 1000000))}}));
  Real minus = ev(substitute(e, {{"x1", Expr(1) - Expr(Rational(1, 1000000))}}));
  CHECK(abs((plus - minus) / (2 * h) - d) <= Real("1e-8"));
}

TEST_CASE("eval examples") {
  const Expr x1 = Expr::variable("x1");
  const Expr k = 6 * exp(x1) * (1 + exp(x1)) / pow(1 + 2 * exp(x1), 3);
  CHECK(abs(eval(k, at(0)) - Real(Rational(4, 9))) < Real("1e-45"));
  CHECK(eval(Expr(0), at(3)) == 0);
  CHECK_THROWS_AS(eval(1 / x1, at(0)), DomainError);
  CHECK_THROWS_AS(eval(log(x1 - 1), at(0)), DomainError);
  CHECK_THROWS_AS(eval(Expr::variable("x7"), at(0)), UnboundVariable);
  CHECK_THROWS_AS(eval(Expr::parameter("a"), at(0)), UnboundVariable);
}

TEST_CASE("is_zero examples") {
  const Expr x = Expr::variable("x1");
  CHECK(is_zero(pow(sin(x), 2) + pow(cos(x), 2) - 1, box1()));
  CHECK_FALSE(is_zero(exp(x) - 1 - x, box1()));
  CHECK(is_zero(exp(2 * x) - pow(exp(x), 2), box1()));
  SampleBox bad;
  bad.coordinates["x1"] = {Rational(-2), Rational(-1)};
  CHECK_THROWS_AS(is_zero(log(x) - log(x) + x * 0 + log(x), bad), Inconclusive);
}

TEST_CASE("zero test is deterministic and scale aware") {
  const Expr x = Expr::variable("x1");
  const Expr big = exp(40 * x);
  CHECK(is_zero(big * (1 + pow(x, 2)) - big - big * pow(x, 2), box1()));
  CHECK_FALSE(is_zero(big * Rational(1, mp::mpz_int("1000000000000000000000000")) - big * 0, box1()));
  auto a = sample_points(box1(), 8, kDefaultSeed);
  auto b = sample_points(box1(), 8, kDefaultSeed);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coordinates == b[i].coordinates);
}

TEST_CASE("property: diff agrees with central differences on 100 random pairs") {
  std::string first;
  CHECK_MESSAGE(gen::finite_difference_failures(100, 20261015, &first) == 0, first);
}

TEST_CASE("property: print and parse round-trip") {
  std::mt19937_64 rng(99);
  ZeroTester zt(box1());
  for (int i = 0; i < 60; ++i) {
    const Expr e = random_expr(rng, 4);
    const Expr back = parse(to_string(e));
    CHECK_MESSAGE(zt.is_zero(back - e), to_string(e));
    const Expr again = parse(to_string(back));
    CHECK(zt.is_zero(again - back));
  }
}

TEST_CASE("property: e - e is zero and rational trees evaluate exactly") {
  std::mt19937_64 rng(5);
  ZeroTester zt(box1());
  const Expr x1 = Expr::variable("x1");
  const Expr x2 = Expr::variable("x2");
  for (int i = 0; i < 40; ++i) {
    const Expr e = random_expr(rng, 4);
    CHECK(zt.is_zero(e - e));
    const Expr r = pow(x1 + Rational(1, 3), 3) * x2 / (1 + x1 * x2) - Rational(i, 7) * pow(x2, -2);
    const Point p = at(Rational(i + 1, 5), Rational(2 * i + 3, 11));
    auto exact = eval_exact(r, p);
    REQUIRE(exact.has_value());
    Evaluator ev(p);
    CHECK(abs(ev.evaluate(r).value - Real(*exact)) <= Real("1e-45") * (1 + abs(Real(*exact))));
  }
}

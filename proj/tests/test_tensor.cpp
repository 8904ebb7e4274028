#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "reference_values.hpp"
#include "warpcurv/curvature.hpp"
#include "warpcurv/tensor.hpp"

using namespace warpcurv;

namespace {

using Rows = std::vector<std::vector<std::string>>;

ChartPtr euclid3() { return make_chart("e3", {"x1", "x2", "x3"}, Rows{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}); }

TensorField random_sym2(const ChartPtr& c, std::mt19937_64& rng) {
  TensorField t(c, 2, 0, Symmetry::sym2);
  for (int i = 0; i < c->dim(); ++i) {
    for (int j = i; j < c->dim(); ++j) t(i, j) = t(j, i) = gen::random_expr(rng, 2);
  }
  return t;
}

}  // namespace

TEST_CASE("make_chart fills the lower triangle and validates") {
  ChartPtr c = make_chart("t", {"x1", "x2"}, Rows{{"1", "x1"}, {"", "2 + x2^2"}});
  CHECK(structurally_equal(c->g(1, 0), c->g(0, 1)));
  CHECK(c->dim() == 2);
  CHECK_THROWS_AS(make_chart("bad", {"x1"}, Rows{{"1 + y"}}), ParseError);
  ChartPtr degenerate = make_chart("d", {"x1", "x2"}, Rows{{"x1", "x1"}, {"", "x1"}});
  CHECK_THROWS_AS(metric_inverse(degenerate), SingularMetric);
}

TEST_CASE("property: g^ik g_kj is the identity on every fixture") {
  for (const char* file : ref::all_fixtures()) {
    const ChartPtr c = ref::chart_of(ref::manifest(file));
    ZeroTester zt(c->sample_box());
    for (InverseMethod method : {InverseMethod::cofactor, InverseMethod::lu}) {
      const TensorField inv = metric_inverse(c, zt, method);
      const int n = c->dim();
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          Expr s;
          for (int k = 0; k < n; ++k) s += inv(i, k) * c->g(k, j);
          CHECK_MESSAGE(zt.is_zero(s - (i == j ? 1 : 0)), file);
        }
      }
    }
  }
}

TEST_CASE("property: Kulkarni-Nomizu products of sym2 tensors are curvature-like and commute") {
  std::mt19937_64 rng(11);
  const ChartPtr c = euclid3();
  ZeroTester zt(c->sample_box());
  for (int k = 0; k < 10; ++k) {
    const TensorField a = random_sym2(c, rng);
    const TensorField e = random_sym2(c, rng);
    const TensorField ae = kulkarni_nomizu(a, e);
    CHECK(is_generalized_curvature(ae, zt));
    CHECK(is_zero(ae - kulkarni_nomizu(e, a), zt));
  }
  const TensorField g = metric_tensor(c);
  CHECK(is_zero(Expr(Rational(1, 2)) * kulkarni_nomizu(g, g) - gaussian(c), zt));
}

TEST_CASE("gaussian tensor components") {
  const ChartPtr c = build_chart(ref::manifest("ex2.mf"));
  const TensorField gg = gaussian(c);
  ZeroTester zt(c->sample_box());
  // G_1221 = g_11 g_22
  CHECK(zt.is_zero(gg(0, 1, 1, 0) - c->g(0, 0) * c->g(1, 1)));
  CHECK(zt.is_zero(gg(0, 1, 0, 1) + c->g(0, 0) * c->g(1, 1)));
  CHECK(gg(0, 0, 1, 1).is_zero_literal());
}

TEST_CASE("raise_first and lower are inverse") {
  const ChartPtr c = build_chart(ref::manifest("ex1_fiber.mf"));
  CurvatureBundle b = compute_curvature(c);
  const TensorField up = raise_first(b.riemann, b.ginv);
  CHECK(up.upper() == 1);
  CHECK(is_zero(lower(up, b.g) - b.riemann, *b.tester));
}

TEST_CASE("symmetry defects are located") {
  const ChartPtr c = euclid3();
  ZeroTester zt(c->sample_box());
  TensorField t(c, 4);
  t(0, 1, 0, 1) = Expr::variable("x1");
  auto d = curvature_symmetry_defect(t, zt);
  REQUIRE(d.has_value());
  CHECK(d->rule == "antisymmetry");
  t(1, 0, 0, 1) = -Expr::variable("x1");
  t(1, 0, 1, 0) = Expr::variable("x1");
  t(0, 1, 1, 0) = -Expr::variable("x1");
  CHECK(is_generalized_curvature(t, zt));
  t(0, 2, 1, 2) = 1;
  CHECK_FALSE(is_generalized_curvature(t, zt));
}

TEST_CASE("linear dependence reports the ratio") {
  const ChartPtr c = euclid3();
  std::mt19937_64 rng(3);
  const TensorField a = random_sym2(c, rng);
  const TensorField e = Expr(2) * a;
  const Point p = c->sample_box().coordinates.empty() ? Point{} : sample_points(c->sample_box(), 1, 1).front();
  const Dependence d = linear_dependence_check(a, e, p);
  CHECK(d.dependent);
  REQUIRE(d.ratio.has_value());
  CHECK(abs(*d.ratio - Real("0.5")) < Real("1e-40"));
  TensorField other = a;
  other(0, 0) = a(0, 0) + 1;
  CHECK_FALSE(linear_dependence_check(other, e, p).dependent);
  const TensorField zero(c, 2, 0, Symmetry::sym2);
  const Dependence z = linear_dependence_check(a, zero, p);
  CHECK(z.dependent);
  CHECK_FALSE(z.ratio.has_value());
}

TEST_CASE("tensor arithmetic requires a common chart") {
  const TensorField a = metric_tensor(euclid3());
  const TensorField b = metric_tensor(euclid3());
  CHECK_THROWS_AS(a + b, TensorMismatch);
  CHECK_NOTHROW(a - a);
}

TEST_CASE("index labels and flattening") {
  CHECK(index_label({0, 1, 1, 0}) == "1221");
  const TensorField t(euclid3(), 4);
  CHECK(t.size() == 81);
  const std::size_t flat = t.index({2, 0, 1, 2});
  CHECK(t.unflatten(flat) == std::vector<int>{2, 0, 1, 2});
}

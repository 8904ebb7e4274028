#include "doctest.h"
#include "reference_values.hpp"
#include "warpcurv/conditions.hpp"
#include "warpcurv/parse.hpp"
#include "warpcurv/warped.hpp"

using namespace warpcurv;

namespace {

using Rows = std::vector<std::vector<std::string>>;

WarpedModel model(const char* file, const ParameterOverrides& o = {}) {
  return WarpedModel(build_warped(ref::manifest(file), o));
}

Expr expr_in(const WarpedModel& m, const std::string& s) { return parse(s, m.product()->symbols()); }

bool has(const std::vector<std::string>& labels, const char* l) {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

}  // namespace

TEST_CASE("fiber relabeling and assembly") {
  WarpedSpec spec = build_warped(ref::manifest("ex2_warped.mf"));
  std::map<std::string, std::string> renaming;
  ChartPtr fiber = relabel_fiber(spec, &renaming);
  CHECK(fiber->coordinates == std::vector<std::string>{"x2", "x3", "x4"});
  CHECK(renaming.at("y1") == "x2");
  ChartPtr product = assemble_product(spec);
  CHECK(product->dim() == 4);
  ZeroTester zt(product->sample_box());
  CHECK(zt.is_zero(product->g(2, 2) - parse("1 + 2*exp(x1)", product->symbols())));
  CHECK(product->g(0, 2).is_zero_literal());
}

TEST_CASE("invalid warped specifications") {
  const ChartPtr base = make_chart("b", {"x1"}, Rows{{"1"}});
  const ChartPtr fiber = make_chart("f", {"y1"}, Rows{{"1"}});
  CHECK_THROWS_AS(assemble_product({"neg", base, fiber, parse("x1 - 3")}), WarpedSpecError);
  CHECK_THROWS_AS(assemble_product({"fib", base, fiber, Expr::variable("y1") + 2}), WarpedSpecError);
  const ChartPtr pa = make_chart("pa", {"x1"}, Rows{{"1 + a"}}, {{"a", {Rational(1), Rational(1)}}});
  const ChartPtr pb = make_chart("pb", {"y1"}, Rows{{"1 + a"}}, {{"a", {Rational(2), Rational(2)}}});
  CHECK_THROWS_AS(assemble_product({"clash", pa, pb, Expr(1)}), WarpedSpecError);
}

TEST_CASE("ex1 auxiliaries") {
  WarpedModel m = model("ex1_warped.mf");
  ZeroTester& zt = m.base_tester();
  const WarpedAux& aux = m.aux();
  const Symbols s = m.base().chart->symbols();
  auto e = [&](const char* t) { return parse(t, s); };
  CHECK(zt.is_zero(aux.hessian(0, 0) - e("2*(2*a*x1^2 + 4*a*x1 + 2*a + 1)/(a*x1^2 + 2*a*x1 + a + 1)")));
  CHECK(zt.is_zero(aux.t(0, 0) - e("a/(a*x1^2 + 2*a*x1 + a + 1)")));
  CHECK(zt.is_zero(aux.trace_t - e("a")));
  CHECK(zt.is_zero(aux.delta - e("(a*x1^2 + 2*a*x1 + a + 1)/(x1 + 1)^2")));
  CHECK(zt.is_zero(aux.omega - e("-4*a*x1^2 - 8*a*x1 - 4*a - 3")));
}

TEST_CASE("six-index canonical patterns") {
  const int p = 2;
  auto pattern = [&](std::array<int, 6> idx) { return canonicalize6(idx.data(), p); };
  CHECK(pattern({0, 1, 0, 1, 0, 1}).pattern == BlockPattern::bbbb_bb);
  CHECK(pattern({0, 2, 0, 2, 1, 1}).pattern == BlockPattern::zero);
  CHECK(pattern({0, 2, 0, 2, 0, 1}).pattern == BlockPattern::bfbf_bb);
  CHECK(pattern({2, 0, 0, 2, 0, 1}).pattern == BlockPattern::bfbf_bb);
  CHECK(pattern({2, 0, 0, 2, 0, 1}).sign == -pattern({0, 2, 0, 2, 0, 1}).sign);
  CHECK(pattern({0, 1, 0, 2, 1, 2}).pattern == BlockPattern::bbbf_bf);
  CHECK(pattern({0, 1, 0, 2, 2, 1}).sign == -pattern({0, 1, 0, 2, 1, 2}).sign);
  CHECK(pattern({0, 2, 3, 2, 0, 3}).pattern == BlockPattern::bfff_bf);
  CHECK(pattern({0, 2, 0, 2, 2, 3}).pattern == BlockPattern::bfbf_ff);
  CHECK(pattern({2, 3, 2, 3, 2, 3}).pattern == BlockPattern::ffff_ff);
  CHECK(std::string(to_string(BlockPattern::bfbf_bb)) == "aAbBst");
}

TEST_CASE("property: block formulas equal the direct computation on every warped fixture") {
  for (const char* a : {"0", "1", "-2", "3/7"}) {
    CHECK_MESSAGE(oracle_equivalence(model("ex1_warped.mf", {{"a", a}})).all_equal(), a);
  }
  for (const char* file : {"ex2_warped.mf", "product.mf", "flat_sphere.mf", "curved_flat.mf"}) {
    const OracleReport r = oracle_equivalence(model(file));
    CHECK_MESSAGE(r.all_equal(), file);
    CHECK(r.scalar_equal);
    for (const auto& t : r.tensors) CHECK(t.checked > 0);
  }
}

TEST_CASE("the printed first Q(S,R) block only differs on a base of dimension three") {
  for (const char* file : {"ex1_warped.mf", "ex2_warped.mf", "product.mf", "flat_sphere.mf"}) {
    CHECK_MESSAGE(oracle_equivalence(model(file), QsrBaseBlock::verbatim).all_equal(), file);
  }
  const OracleReport r = oracle_equivalence(model("curved_flat.mf"), QsrBaseBlock::verbatim);
  CHECK_FALSE(r.all_equal());
  for (const auto& t : r.tensors) {
    if (t.equal) continue;
    CHECK(t.tensor == "Q(S,R)");
    for (const auto& [label, block] : t.mismatches) CHECK(block == "abcdst");
  }
}

TEST_CASE("criterion conditions agree with the direct check") {
  WarpedModel ex2 = model("ex2_warped.mf");
  const std::vector<std::pair<std::string, std::string>> good = {
      {ref::ex2_l1_i, "0"}, {"1", ref::ex2_l2_iii}, {"0", "1"}};
  for (const auto& [a, b] : good) {
    const CriterionVerdict v = verify_criterion_conditions(ex2, expr_in(ex2, a), expr_in(ex2, b));
    CHECK(v.all_hold());
    CHECK(v.conditions.size() == 6);
    CHECK(direct_pseudosymmetry_check(ex2, expr_in(ex2, a), expr_in(ex2, b)));
  }
  const Expr wrong = expr_in(ex2, std::string(ref::ex2_l1_i) + " + 1");
  const CriterionVerdict v = verify_criterion_conditions(ex2, wrong, Expr(0));
  CHECK_FALSE(v.all_hold());
  CHECK_FALSE(v["III"].holds);
  std::string first;
  CHECK_FALSE(direct_pseudosymmetry_check(ex2, wrong, Expr(0), &first));
  CHECK_FALSE(first.empty());
}

TEST_CASE("a mismatched L fails condition (V) with a residual excerpt") {
  WarpedModel ex1 = model("ex1_warped.mf");
  const CriterionVerdict v = verify_criterion_conditions(ex1, expr_in(ex1, "a + 1"), Expr(0));
  CHECK_FALSE(v["V"].holds);
  const std::string& d = v["V"].detail;
  REQUIRE(d.find(": ") != std::string::npos);
  CHECK(d.size() > 8);
  CHECK(verify_criterion_conditions(ex1, expr_in(ex1, "a"), Expr(0)).all_hold());
}

TEST_CASE("L must be a base function") {
  WarpedModel ex2 = model("ex2_warped.mf");
  CHECK_THROWS_AS(verify_criterion_conditions(ex2, expr_in(ex2, "x3"), Expr(0)), std::invalid_argument);
}

TEST_CASE("corollaries: base and fiber of pseudosymmetric products") {
  WarpedModel ex1 = model("ex1_warped.mf");
  const Expr a = expr_in(ex1, "a");
  REQUIRE(verify_criterion_conditions(ex1, a, Expr(0)).all_hold());
  CHECK(is_zero(identity_defect("R.R=L1 Q(g,R)", ex1.base(), {{"L1", a}}), ex1.base_tester()));

  WarpedModel prod = model("product.mf");
  REQUIRE(verify_criterion_conditions(prod, Expr(0), Expr(0)).all_hold());
  CHECK(is_zero(identity_defect("R.R=0", prod.base(), {}), prod.base_tester()));

  // Semisymmetric case: the fiber satisfies R~.R~ = f Delta Q(g~,R~) up to
  // orientation, with f Delta = 1 here.
  WarpedModel semi = model("ex1_warped.mf", {{"a", "0"}});
  REQUIRE(verify_criterion_conditions(semi, Expr(0), Expr(0)).all_hold());
  CHECK(semi.base_tester().is_zero(semi.f() * semi.aux().delta - 1));
  CHECK(is_zero(identity_defect("R.R=L1 Q(g,R)", semi.fiber(), {{"L1", Expr(-1)}}), semi.fiber_tester()));
}

TEST_CASE("trichotomy labels") {
  WarpedModel ex1 = model("ex1_warped.mf");
  for (const TrichotomyPoint& tp : trichotomy_report(ex1, expr_in(ex1, "a"))) {
    CHECK(has(tp.labels, kLabelBaseFlat));
    CHECK(has(tp.labels, kLabelTProportional));
    CHECK_FALSE(has(tp.labels, kLabelFiberEinstein));
  }
  WarpedModel ex2 = model("ex2_warped.mf");
  for (const TrichotomyPoint& tp : trichotomy_report(ex2, expr_in(ex2, ref::ex2_l1_i))) {
    CHECK(tp.labels.size() == 3);
  }
  WarpedModel cf = model("curved_flat.mf");
  for (const TrichotomyPoint& tp : trichotomy_report(cf, Expr(0))) {
    CHECK(tp.labels == std::vector<std::string>{kLabelFiberEinstein});
  }
}

TEST_CASE("dichotomy") {
  WarpedModel ex2 = model("ex2_warped.mf");
  const DichotomyResult d = dichotomy_check(ex2, Expr(1), Expr(0));
  CHECK(d.base_flat);
  CHECK(d.fiber_einstein);
  REQUIRE(d.conditions_hold.has_value());
  CHECK(*d.conditions_hold);
  CHECK_FALSE(d.consistency_violation);
  CHECK_THROWS_AS(dichotomy_check(ex2, Expr(0)), std::domain_error);
  CHECK_FALSE(dichotomy_check(ex2, Expr(1)).conditions_hold.has_value());
  WarpedModel cf = model("curved_flat.mf");
  const DichotomyResult c = dichotomy_check(cf, Expr(1), Expr(1));
  CHECK_FALSE(c.base_flat);
  CHECK(c.fiber_einstein);
  CHECK_FALSE(*c.conditions_hold);
}

TEST_CASE("factor test decides each factor on its own chart") {
  WarpedModel m = model("flat_sphere.mf");
  const Symbols s = m.product()->symbols();
  const std::vector<Expr> base_nonzero = {parse("1 + x1^2", s)};
  const std::vector<Expr> base_zero = {parse("x1 - x1", s), Expr(0)};
  const std::vector<Expr> fiber_nonzero = {parse("sin(x3)", s)};
  CHECK_FALSE(factor_test(m, base_nonzero, fiber_nonzero).product_zero());
  const FactorTest z = factor_test(m, base_zero, fiber_nonzero);
  CHECK(z.base_factor_zero);
  CHECK_FALSE(z.fiber_factor_zero);
  CHECK(z.product_zero());
}

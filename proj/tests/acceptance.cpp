// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "reference_values.hpp"
#include "warpcurv/actions.hpp"
#include "warpcurv/conditions.hpp"
#include "warpcurv/curvature.hpp"
#include "warpcurv/parse.hpp"
#include "warpcurv/warped.hpp"

using namespace warpcurv;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (!pass) detail << "; ";
    pass = false;
    detail << what;
  }
  void require_listing(const std::vector<std::string>& bad, const std::string& what) {
    if (bad.empty()) return;
    std::string labels;
    for (const auto& l : bad) labels += (labels.empty() ? "" : ",") + l;
    require(false, what + " differs at " + labels);
  }
};

Expr expr_in(const ChartPtr& c, const std::string& s) { return parse(s, c->symbols()); }

const std::vector<std::string> kA = {"0", "1", "-2", "3/7"};

Outcome ac1() {
  Outcome o;
  const ChartPtr c = build_chart(ref::manifest("ex1_fiber.mf"));
  CurvatureBundle b = compute_curvature(c);
  ZeroTester& zt = *b.tester;
  o.require_listing(ref::mismatched(b.riemann, ref::ex1_fiber_riemann, zt), "R~");
  o.require_listing(ref::mismatched(b.ricci, ref::ex1_fiber_ricci, zt), "S~");
  o.require(zt.is_zero(b.scalar + 12), "kappa~ != -12");
  // The printed S~_22 carries the opposite constant; keep that pinned.
  o.require(!zt.is_zero(b.ricci(1, 1) - expr_in(c, ref::ex1_fiber_ricci_22_as_printed)),
            "S~_22 unexpectedly equals the printed form");
  const TensorField defect = identity_defect("R.R=L1 Q(g,R)", b, {{"L1", Expr(-1)}});
  o.require(defect.size() == 4096, "R~.R~ defect is not n^6");
  o.require(is_zero(defect, zt), "R~.R~ != -Q(g~,R~)");
  o.require(zt.trials() == 8, "zero test not on 8 points");
  return o;
}

Outcome ac2() {
  Outcome o;
  const Manifest m = ref::manifest("ex1_warped.mf");
  for (const std::string& a : kA) {
    const ChartPtr c = ref::chart_of(m, {{"a", a}});
    CurvatureBundle b = compute_curvature(c);
    ZeroTester& zt = *b.tester;
    const std::string tag = "a=" + a + ": ";
    o.require(zt.is_zero(b.scalar - expr_in(c, "20*a")), tag + "kappa != 20a");
    o.require(check_identity("R.R=L1 Q(g,R)", b, {{"L1", expr_in(c, "a")}}).holds, tag + "R.R != a Q(g,R)");
    o.require(check_identity("W.R=0", b, {}).holds, tag + "W.R != 0");
    const PseudosymmetryTensors t = pseudosymmetry_tensors(b);
    o.require_listing(ref::mismatched(b.riemann, ref::ex1_riemann, zt), tag + "R");
    o.require_listing(ref::mismatched(b.ricci, ref::ex1_ricci, zt), tag + "S");
    o.require_listing(ref::mismatched(t.rr, ref::ex1_rr, zt), tag + "R.R");
    o.require_listing(ref::mismatched(t.qgr, ref::ex1_qgr, zt), tag + "Q(g,R)");
    o.require_listing(ref::mismatched(t.qsr, ref::ex1_qsr, zt), tag + "Q(S,R)");
  }
  return o;
}

Outcome ac3() {
  Outcome o;
  const ChartPtr c = build_chart(ref::manifest("ex2.mf"));
  CurvatureBundle b = compute_curvature(c);
  ZeroTester& zt = *b.tester;
  const PseudosymmetryTensors t = pseudosymmetry_tensors(b);
  const TensorField& p = b.projective(ProjectiveCoefficient::n_minus_1);
  const TensorField pr = derivation_action(p, b.riemann, b.ginv);
  o.require_listing(ref::mismatched(b.riemann, ref::ex2_riemann, zt), "R");
  o.require_listing(ref::mismatched(b.ricci, ref::ex2_ricci, zt), "S");
  o.require(zt.is_zero(b.scalar - expr_in(c, ref::ex2_scalar)), "kappa");
  o.require_listing(ref::mismatched(p, ref::ex2_projective, zt), "P");
  o.require_listing(ref::mismatched(t.rr, ref::ex2_pattern(ref::ex2_rr_value), zt), "R.R");
  o.require_listing(ref::mismatched(t.qgr, ref::ex2_pattern(ref::ex2_qgr_value), zt), "Q(g,R)");
  o.require_listing(ref::mismatched(t.qsr, ref::ex2_pattern(ref::ex2_qsr_value), zt), "Q(S,R)");
  o.require_listing(ref::mismatched(pr, ref::ex2_pattern(ref::ex2_pr_value), zt), "P.R");

  const Expr l1 = expr_in(c, ref::ex2_l1_i);
  o.require(check_identity("R.R=L1 Q(g,R)", b, {{"L1", l1}}).candidates_confirmed, "(i) R.R = L Q(g,R)");
  o.require(check_identity("R.R=Q(S,R)", b, {}).holds, "(i) R.R = Q(S,R)");
  CheckOptions n1;
  n1.projective = ProjectiveCoefficient::n_minus_1;
  o.require(check_identity("P.R=L1 Q(g,R)", b, {{"L1", expr_in(c, ref::ex2_l1_ii)}}, n1).candidates_confirmed,
            "(ii)");
  o.require(check_identity("R.R=L1 Q(g,R)+L2 Q(S,R)", b, {{"L1", Expr(1)}, {"L2", expr_in(c, ref::ex2_l2_iii)}})
                .candidates_confirmed,
            "(iii)");

  const ConditionReport fit = fit_pseudosymmetry(b, t, fit_points(b));
  o.require(fit.fits.size() >= 5, "too few fit points");
  for (const PointFit& f : fit.fits) {
    o.require(f.rank == 1, "fit rank " + std::to_string(f.rank) + " at " + to_string(f.point));
    o.require(f.consistent, "fit residual at " + to_string(f.point));
    o.require(f.nullspace.size() == 1, "no one-parameter family at " + to_string(f.point));
  }
  return o;
}

Outcome ac4() {
  Outcome o;
  const std::vector<std::pair<const char*, ParameterOverrides>> specs = {
      {"ex1_warped.mf", {{"a", "3/7"}}}, {"ex2_warped.mf", {}}, {"flat_sphere.mf", {}}, {"curved_flat.mf", {}}};
  for (const auto& [file, params] : specs) {
    WarpedModel model(build_warped(ref::manifest(file), params));
    const OracleReport r = oracle_equivalence(model);
    o.require(r.all_equal(), std::string(file) + " block formulas differ from the direct computation");
  }
  struct Pair {
    const char* file;
    const char* l1;
    const char* l2;
    bool expected;
  };
  const std::vector<Pair> pairs = {
      {"ex1_warped.mf", "a", "0", true},
      {"ex1_warped.mf", "a + 1", "0", false},
      {"ex2_warped.mf", ref::ex2_l1_i, "0", true},
      {"ex2_warped.mf", "1", ref::ex2_l2_iii, true},
      {"ex2_warped.mf", "0", "1", true},
      {"ex2_warped.mf", "exp(x1)/(2*exp(x1) + 1)^3 + 1", "0", false},
  };
  for (const Pair& pr : pairs) {
    WarpedModel model(build_warped(ref::manifest(pr.file), {{"a", "3/7"}}));
    const Expr l1 = parse(pr.l1, model.product()->symbols());
    const Expr l2 = parse(pr.l2, model.product()->symbols());
    const bool conditions = verify_criterion_conditions(model, l1, l2).all_hold();
    const bool direct = direct_pseudosymmetry_check(model, l1, l2);
    const std::string tag = std::string(pr.file) + " (" + pr.l1 + ", " + pr.l2 + ")";
    o.require(conditions == direct, tag + ": conditions and direct check disagree");
    o.require(direct == pr.expected, tag + ": unexpected verdict");
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  int charts = 0;
  for (const char* file : ref::all_fixtures()) {
    const ChartPtr c = ref::chart_of(ref::manifest(file));
    CurvatureBundle b = compute_curvature(c);
    ZeroTester& zt = *b.tester;
    ++charts;
    const std::string tag = std::string(file) + ": ";
    std::vector<std::pair<const char*, std::function<const TensorField&()>>> tensors = {
        {"R", [&]() -> const TensorField& { return b.riemann; }},
        {"G", [&]() -> const TensorField& { return b.gaussian(); }},
    };
    if (b.dim() >= 2) tensors.emplace_back("W", [&]() -> const TensorField& { return b.concircular(); });
    if (b.dim() >= 3) {
      tensors.emplace_back("C", [&]() -> const TensorField& { return b.conformal(); });
      tensors.emplace_back("K", [&]() -> const TensorField& { return b.conharmonic(); });
    }
    for (const auto& [name, get] : tensors) {
      o.require(is_generalized_curvature(get(), zt), tag + name + " is not a generalized curvature tensor");
    }
    o.require(is_zero(tachibana(b.g, b.gaussian()), zt), tag + "Q(g,G) != 0");
    if (b.dim() >= 3) {
      const PseudosymmetryTensors t = pseudosymmetry_tensors(b);
      const TensorField pr = derivation_action(b.projective(), b.riemann, b.ginv);
      const Expr c2 = Expr(Rational(1, b.dim() - 2));
      o.require(is_zero(pr - (t.rr - c2 * t.qsr), zt), tag + "P.R != R.R - Q(S,R)/(n-2)");
    }
  }
  o.require(charts == static_cast<int>(ref::all_fixtures().size()), "fixture count");

  {
    CurvatureBundle b = compute_curvature(build_chart(ref::manifest("ex2.mf")));
    o.require(!is_generalized_curvature(b.projective(), *b.tester), "P of ex2 passes the curvature symmetries");
    o.require(!is_generalized_curvature(b.projective(ProjectiveCoefficient::n_minus_1), *b.tester),
              "P (n-1) of ex2 passes the curvature symmetries");
  }

  {
    const ChartPtr c = make_chart("factor", {"x1", "x2", "x3"},
                                  std::vector<std::vector<std::string>>{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
    ZeroTester zt(c->sample_box());
    std::mt19937_64 rng(424242);
    int agree = 0;
    for (int k = 0; k < 50; ++k) {
      TensorField a(c, 2, 0, Symmetry::sym2);
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) a(i, j) = a(j, i) = gen::random_expr(rng, 2);
      }
      TensorField e(c, 2, 0, Symmetry::sym2);
      const bool dependent = k % 2 == 0;
      const Expr scale = gen::random_expr(rng, 2);
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) e(i, j) = e(j, i) = dependent ? scale * a(i, j) : gen::random_expr(rng, 2);
      }
      const bool q_zero = is_zero(tachibana(a, e), zt);
      bool all_dependent = true;
      for (const Point& p : zt.points()) all_dependent = all_dependent && linear_dependence_check(a, e, p).dependent;
      if (q_zero == all_dependent && q_zero == dependent) ++agree;
    }
    o.require(agree == 50, "linear dependence matches Q(A,E) = 0 on " + std::to_string(agree) + " of 50 pairs");
  }

  {
    const ChartPtr c = build_chart(ref::manifest("ex2.mf"));
    CurvatureBundle b = compute_curvature(c);
    const PseudosymmetryTensors t = pseudosymmetry_tensors(b);
    const Point at = b.tester->points().front();
    const Real l1 = eval(expr_in(c, ref::ex2_l1_i), at);
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> coef(-9, 9);
    auto vec = [&] {
      Vector v(4);
      for (auto& x : v) x = Real(coef(rng)) / 7;
      return v;
    };
    int found = 0;
    for (int tries = 0; found < 10 && tries < 1000; ++tries) {
      const Plane p1{vec(), vec()};
      const Plane p2{vec(), vec()};
      auto r = deszcz_ratio(t.rr, t.qgr, at, p1, p2);
      if (!r) continue;
      ++found;
      o.require(abs(*r - l1) <= Real("1e-20") * abs(l1), "Deszcz ratio depends on the planes");
    }
    o.require(found == 10, "only " + std::to_string(found) + " curvature-dependent plane pairs");
  }
  return o;
}

Outcome ac6() {
  Outcome o;
  const Manifest ex1 = ref::manifest("ex1_warped.mf");
  for (const std::string& a : kA) {
    WarpedModel model(build_warped(ex1, {{"a", a}}));
    const Expr l1 = parse("a", model.product()->symbols());
    const auto report = trichotomy_report(model, l1);
    o.require(!report.empty(), "empty trichotomy report");
    for (const TrichotomyPoint& tp : report) {
      const bool has = std::find(tp.labels.begin(), tp.labels.end(), kLabelTProportional) != tp.labels.end();
      o.require(has, "a=" + a + ": no 'T = L1 g' at " + to_string(tp.point));
    }
  }
  {
    WarpedModel model(build_warped(ref::manifest("ex2_warped.mf")));
    const DichotomyResult d = dichotomy_check(model, Expr(1), Expr(0));
    o.require(d.fiber_einstein, "ex2 fiber not reported Einstein");
    o.require(!d.consistency_violation, "ex2 dichotomy consistency violation");
  }
  {
    WarpedModel model(build_warped(ref::manifest("curved_flat.mf")));
    o.require(oracle_equivalence(model, QsrBaseBlock::repaired).all_equal(), "repaired Q(S,R) block fails the oracle");
    o.require(!oracle_equivalence(model, QsrBaseBlock::verbatim).all_equal(),
              "verbatim Q(S,R) block passes the oracle on the curved base");
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  std::string first;
  const int failures = gen::finite_difference_failures(100, 7777, &first);
  o.require(failures == 0, std::to_string(failures) + " of 100 pairs off, first " + first);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 ex1 fiber components, kappa = -12, R.R = -Q(g,R)", ac1},
      {"AC2 ex1 warped, a in {0, 1, -2, 3/7}", ac2},
      {"AC3 ex2 components, conditions (i)-(iii), rank-1 fit", ac3},
      {"AC4 block formulas and conditions vs direct computation", ac4},
      {"AC5 property suites", ac5},
      {"AC6 trichotomy, dichotomy, repaired Q(S,R) block", ac6},
      {"AC7 derivatives vs central differences", ac7},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name;
    if (!o.pass) std::cout << ": " << o.detail.str();
    std::cout << " [" << static_cast<int>(secs * 10) / 10.0 << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

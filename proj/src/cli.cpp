#include "warpcurv/cli.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "warpcurv/conditions.hpp"
#include "warpcurv/parse.hpp"
#include "warpcurv/warped.hpp"

namespace warpcurv {

namespace {

std::string rational_string(const Rational& r) { return r.str(); }

std::string real_string(const Real& v) { return v.str(20); }

// Short form for the text report; values at round-off level print as 0.
std::string display(const Real& v) {
  if (abs(v) < Real("1e-40")) return "0";
  return v.str(12);
}

Json point_json(const Point& p) {
  Json j = Json::object();
  for (const auto& [name, v] : p.coordinates) j[name] = rational_string(v);
  for (const auto& [name, v] : p.parameters) j[name] = rational_string(v);
  return j;
}

Json sampled(const Expr& e, const std::vector<Point>& points) {
  Json out = Json::array();
  for (const Point& p : points) {
    try {
      out.push_back(real_string(eval(e, p)));
    } catch (const DomainError&) {
      out.push_back(nullptr);
    }
  }
  return out;
}

Json quantity(const Expr& e, const std::vector<Point>& points) {
  return Json{{"expr", to_string(e)}, {"samples", sampled(e, points)}};
}

std::uint64_t seed_of(const Manifest& m, const RunOptions& opt) {
  return opt.seed ? *opt.seed : m.seed ? *m.seed : kDefaultSeed;
}

int points_of(const Manifest& m, const RunOptions& opt) {
  const int k = opt.points ? *opt.points : m.points ? *m.points : kDefaultTrials;
  if (k < 1) throw std::invalid_argument("--points must be positive");
  return k;
}

Json interval_json(const std::map<std::string, Located>& entries) {
  Json j = Json::object();
  for (const auto& [name, l] : entries) j[name] = l.text;
  return j;
}

Json echo_manifest(const Manifest& m, const RunOptions& opt) {
  Json j;
  j["file"] = std::filesystem::path(m.file).filename().string();
  j["kind"] = m.kind;
  j["name"] = m.name;
  j["orientation"] = to_string(m.orientation);
  j["projective"] = to_string(m.projective);
  j["seed"] = seed_of(m, opt);
  j["points"] = points_of(m, opt);
  Json params = interval_json(m.parameters);
  for (const auto& [name, text] : opt.parameters) params[name] = text;
  j["parameters"] = params;
  if (m.kind == "chart") {
    j["coordinates"] = m.coordinates;
    j["box"] = interval_json(m.box);
    Json metric = Json::array();
    for (const auto& [ij, l] : m.metric) {
      metric.push_back(Json{{"i", ij.first + 1}, {"j", ij.second + 1}, {"expr", l.text}});
    }
    j["metric"] = metric;
  } else {
    j["base"] = echo_manifest(*m.base_manifest, RunOptions{opt.seed, opt.points, {}, {}, {}, false});
    j["fiber"] = echo_manifest(*m.fiber_manifest, RunOptions{opt.seed, opt.points, {}, {}, {}, false});
    j["warping"] = m.warping.text;
  }
  Json analyses = Json::array();
  for (const Analysis& a : m.analyses) {
    Json aj{{"kind", a.kind}};
    if (!a.name.empty()) aj["name"] = a.name;
    Json sc = Json::object();
    for (const auto& [k, v] : a.scalars) sc[k] = v.text;
    aj["scalars"] = sc;
    analyses.push_back(aj);
  }
  j["analyses"] = analyses;
  return j;
}

Json header(const std::string& command, const Manifest& m, const RunOptions& opt) {
  Json j;
  j["schema"] = kReportSchema;
  j["version"] = kReportVersion;
  j["command"] = command;
  j["manifest"] = echo_manifest(m, opt);
  j["scope"] = "identities are decided on sampled points of the chart box only";
  return j;
}

// The chart analysed by curvature/classify: the chart itself, or the
// assembled product for a warped manifest.
ChartPtr analysed_chart(const Manifest& m, const RunOptions& opt) {
  if (m.kind == "chart") return build_chart(m, opt.parameters);
  return assemble_product(build_warped(m, opt.parameters));
}

Scalars scalars_of(const Manifest& m, const Analysis& a, const Symbols& symbols) {
  Scalars out;
  for (const auto& [name, l] : a.scalars) out[name] = parse_located(m, l, symbols);
  return out;
}

std::string index_string(const std::vector<int>& idx) { return index_label(idx); }

}  // namespace

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

Json parse_report(const std::string& text) { return Json::parse(text); }

std::optional<std::string> input_error_message(const std::exception& e) {
  if (dynamic_cast<const ManifestError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const WarpedSpecError*>(&e) || dynamic_cast<const SingularMetric*>(&e) ||
      dynamic_cast<const UnknownCondition*>(&e) || dynamic_cast<const MissingScalar*>(&e) ||
      dynamic_cast<const Inconclusive*>(&e) || dynamic_cast<const std::invalid_argument*>(&e) ||
      dynamic_cast<const std::domain_error*>(&e) || dynamic_cast<const UnboundVariable*>(&e)) {
    return std::string(e.what());
  }
  return std::nullopt;
}

CommandResult cmd_curvature(const Manifest& m, const RunOptions& opt) {
  CommandResult res;
  res.report = header("curvature", m, opt);
  ChartPtr chart = analysed_chart(m, opt);
  CurvatureBundle b = compute_curvature(chart, m.orientation, points_of(m, opt), seed_of(m, opt));
  ZeroTester& zt = *b.tester;
  const std::vector<Point> points = zt.points();
  const int n = b.dim();
  std::ostringstream text;
  text << "chart " << chart->name << " (n = " << n << ", orientation " << to_string(b.orientation) << ")\n";

  Json riemann = Json::array();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = i; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          if (k == i && l < j) continue;
          const Expr& e = b.riemann(i, j, k, l);
          if (e.is_zero_literal() || zt.is_zero(e)) continue;
          const std::string label = index_string({i, j, k, l});
          Json q = quantity(e, points);
          q["index"] = label;
          riemann.push_back(q);
          text << "R_" << label << " = " << to_string(e) << "\n";
        }
      }
    }
  }
  Json ricci = Json::array();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Expr& e = b.ricci(i, j);
      if (e.is_zero_literal() || zt.is_zero(e)) continue;
      const std::string label = index_string({i, j});
      Json q = quantity(e, points);
      q["index"] = label;
      ricci.push_back(q);
      text << "S_" << label << " = " << to_string(e) << "\n";
    }
  }
  const bool flat = riemann.empty();
  if (flat) text << "all curvature components zero\n";
  text << "kappa = " << to_string(b.scalar) << "\n";

  Json cj;
  cj["orientation"] = to_string(b.orientation);
  cj["points"] = Json::array();
  for (const Point& p : points) cj["points"].push_back(point_json(p));
  cj["all_zero"] = flat;
  cj["riemann"] = riemann;
  cj["ricci"] = ricci;
  cj["scalar"] = quantity(b.scalar, points);
  res.report["curvature"] = cj;

  Json expectations = Json::array();
  const Symbols symbols = chart->symbols();
  for (const Expectation& e : m.expectations) {
    const Expr want = parse_located(m, e.expr, symbols);
    for (int i : e.index) {
      if (i >= n) throw ManifestError(m.file, e.expr.line, "expectation index out of range");
    }
    Expr got;
    std::string label = e.what;
    if (e.what == "scalar") {
      got = b.scalar;
    } else if (e.what == "R") {
      got = b.riemann(e.index[0], e.index[1], e.index[2], e.index[3]);
      label += "_" + index_string(e.index);
    } else {
      got = b.ricci(e.index[0], e.index[1]);
      label += "_" + index_string(e.index);
    }
    const bool ok = zt.is_zero(got - want);
    expectations.push_back(Json{{"quantity", label}, {"expected", e.expr.text}, {"holds", ok}});
    text << (ok ? "PASS " : "FAIL ") << label << " = " << e.expr.text << "\n";
    if (!ok) res.exit_code = kExitVerdictFailure;
  }
  res.report["expectations"] = expectations;
  res.text = text.str();
  return res;
}

CommandResult cmd_classify(const Manifest& m, const RunOptions& opt) {
  CommandResult res;
  res.report = header("classify", m, opt);
  ChartPtr chart = analysed_chart(m, opt);
  const int k = points_of(m, opt);
  if (k < 5) throw std::invalid_argument("classify needs --points >= 5 for the least-squares fit");
  const std::uint64_t seed = seed_of(m, opt);
  CurvatureBundle b = compute_curvature(chart, m.orientation, k, seed);
  std::ostringstream text;
  text << "chart " << chart->name << " (n = " << b.dim() << ")\n";

  const std::vector<Point> points = fit_points(b, k, seed);
  ConditionReport report = fit_pseudosymmetry(b, points);
  Json fits = Json::array();
  for (const PointFit& f : report.fits) {
    Json nj = Json::array();
    for (const auto& [a, c] : f.nullspace) nj.push_back(Json::array({real_string(a), real_string(c)}));
    fits.push_back(Json{{"point", point_json(f.point)},
                        {"L1", real_string(f.l1)},
                        {"L2", real_string(f.l2)},
                        {"residual", real_string(f.residual)},
                        {"rank", f.rank},
                        {"trivial", f.trivial},
                        {"consistent", f.consistent},
                        {"nullspace", nj}});
  }
  const ConstantType ct = constant_type_check(report);

  CheckOptions co{k, seed, m.projective};
  const Symbols symbols = chart->symbols();
  Json verdicts = Json::array();
  std::vector<std::string> holding;
  auto record = [&](const IdentityVerdict& v, const Json& scalars, bool requested) {
    verdicts.push_back(Json{{"name", v.name},
                            {"structure", v.structure},
                            {"holds", v.holds},
                            {"candidates_confirmed", v.candidates_confirmed},
                            {"requested", requested},
                            {"scalars", scalars},
                            {"checked_points", v.checked_points},
                            {"excluded_points", v.excluded_points},
                            {"failure", v.failure}});
    report.verdicts[v.name] = v;
    std::string line = v.name;
    if (!scalars.empty()) {
      std::string sep = " with ";
      for (const auto& [key, val] : scalars.items()) {
        line += sep + key + " = " + val.get<std::string>();
        sep = ", ";
      }
    }
    text << (v.holds ? "holds  " : "fails  ") << line;
    if (v.excluded_points) text << " (" << v.excluded_points << " points outside the defining set)";
    if (!v.holds) text << " at " << v.failure;
    text << "\n";
    if (v.holds) holding.push_back(v.structure);
    if (requested && !v.holds) res.exit_code = kExitVerdictFailure;
  };

  std::set<std::string> requested;
  for (const Analysis& a : m.analyses) {
    if (a.kind == "check") requested.insert(a.name);
  }
  bool semisymmetric = false;
  Json skipped = Json::array();
  for (const char* name : {"R.R=0", "R.R=Q(S,R)", "W.R=0", "P.R=0", "R.S=0"}) {
    if (requested.count(name)) continue;
    try {
      IdentityVerdict v = check_identity(name, b, {}, co);
      if (v.name == "R.R=0") semisymmetric = v.holds;
      record(v, Json::object(), false);
    } catch (const std::invalid_argument& e) {
      skipped.push_back(Json{{"name", name}, {"reason", e.what()}});
      text << "skip   " << name << " (" << e.what() << ")\n";
    }
  }
  bool pseudo_requested = false;
  for (const Analysis& a : m.analyses) {
    if (a.kind != "check") continue;
    Scalars sc = scalars_of(m, a, symbols);
    Json sj = Json::object();
    for (const auto& [key, l] : a.scalars) sj[key] = l.text;
    if (a.name == "R.R=L1 Q(g,R)") pseudo_requested = true;
    IdentityVerdict v = check_identity(a.name, b, sc, co);
    if (v.name == "R.R=0") semisymmetric = v.holds;
    record(v, sj, true);
  }
  if (semisymmetric && !pseudo_requested) {
    record(check_identity("R.R=L1 Q(g,R)", b, {{"L1", Expr()}}, co), Json{{"L1", "0"}}, false);
  }
  const bool einstein = einstein_check(b);

  Json cj;
  cj["fits"] = fits;
  cj["skipped_points"] = report.skipped_points;
  cj["fit_consistent"] = report.consistent();
  cj["trivial"] = report.all_trivial();
  cj["constant_type"] = Json{{"constant", ct.constant},
                             {"degenerate", ct.degenerate},
                             {"L1", real_string(ct.l1)},
                             {"L2", real_string(ct.l2)}};
  cj["einstein"] = einstein;
  cj["verdicts"] = verdicts;
  cj["skipped"] = skipped;
  res.report["conditions"] = cj;

  text << "fit: ";
  if (report.all_trivial()) {
    text << "R.R, Q(g,R) and Q(S,R) vanish at every sampled point; semisymmetric (trivially)\n";
  } else {
    int rank = 0;
    for (const auto& f : report.fits) rank = std::max(rank, f.rank);
    text << "rank " << rank << (report.consistent() ? ", residual 0" : ", nonzero residual");
    if (ct.constant && !ct.degenerate) text << ", constant type L1 = " << display(ct.l1) << ", L2 = " << display(ct.l2);
    text << "\n";
  }
  text << "einstein: " << (einstein ? "yes" : "no") << "\n";
  res.text = text.str();
  return res;
}

namespace {

Json oracle_json(const OracleReport& r) {
  Json j;
  j["all_equal"] = r.all_equal();
  j["scalar_equal"] = r.scalar_equal;
  Json ts = Json::array();
  for (const auto& t : r.tensors) {
    Json mm = Json::array();
    for (std::size_t i = 0; i < t.mismatches.size() && i < 10; ++i) {
      mm.push_back(Json{{"index", t.mismatches[i].first}, {"block", t.mismatches[i].second}});
    }
    ts.push_back(Json{{"tensor", t.tensor},
                      {"equal", t.equal},
                      {"checked", t.checked},
                      {"mismatch_count", t.mismatches.size()},
                      {"mismatches", mm}});
  }
  j["tensors"] = ts;
  return j;
}

}  // namespace

CommandResult cmd_warped_verify(const Manifest& m, const RunOptions& opt) {
  if (m.kind != "warped") throw std::invalid_argument("warped-verify needs a warped manifest");
  CommandResult res;
  res.report = header("warped-verify", m, opt);
  WarpedSpec spec = build_warped(m, opt.parameters);
  WarpedModel model(spec, m.orientation, points_of(m, opt), seed_of(m, opt));
  const Symbols symbols = model.product()->symbols();
  std::ostringstream text;
  text << "warped product " << spec.name << ": base dim " << model.p() << ", fiber dim " << model.n() - model.p()
       << ", f = " << to_string(model.f()) << "\n";

  std::vector<std::pair<std::string, std::string>> pairs;
  if (opt.l1 || opt.l2) {
    pairs.emplace_back(opt.l1.value_or("0"), opt.l2.value_or("0"));
  } else {
    for (const Analysis& a : m.analyses) {
      if (a.kind != "verify") continue;
      auto get = [&](const char* key) {
        auto it = a.scalars.find(key);
        return it == a.scalars.end() ? std::string("0") : it->second.text;
      };
      pairs.emplace_back(get("L1"), get("L2"));
    }
  }
  if (pairs.empty()) throw std::invalid_argument("no candidate (L1, L2): pass --L1/--L2 or add a 'verify' analysis");

  const std::vector<Point> points = model.tester().points();
  Json wj;
  Json renaming = Json::object();
  for (const auto& [from, to] : model.fiber_renaming()) renaming[from] = to;
  wj["fiber_renaming"] = renaming;
  const WarpedAux& aux = model.aux();
  Json t = Json::array();
  for (int a = 0; a < model.p(); ++a) {
    for (int b = a; b < model.p(); ++b) {
      Json q = quantity(aux.t(a, b), points);
      q["index"] = index_string({a, b});
      t.push_back(q);
    }
  }
  wj["points"] = Json::array();
  for (const Point& p : points) wj["points"].push_back(point_json(p));
  wj["auxiliaries"] = Json{{"T", t},
                           {"trace_T", quantity(aux.trace_t, points)},
                           {"Delta", quantity(aux.delta, points)},
                           {"Omega", quantity(aux.omega, points)}};
  wj["scalar"] = quantity(model.scalar_block(), points);

  const OracleReport oracle = oracle_equivalence(model);
  const OracleReport verbatim = oracle_equivalence(model, QsrBaseBlock::verbatim);
  wj["oracle"] = oracle_json(oracle);
  wj["oracle_verbatim_qsr_base_block"] = verbatim.all_equal();
  text << "oracle equivalence (blocks vs direct): " << (oracle.all_equal() ? "pass" : "FAIL") << "\n";
  for (const auto& tc : oracle.tensors) {
    if (!tc.equal) text << "  " << tc.tensor << ": " << tc.mismatches.size() << " mismatching components\n";
  }
  if (!oracle.all_equal()) res.exit_code = kExitVerdictFailure;

  Json candidates = Json::array();
  for (const auto& [l1s, l2s] : pairs) {
    const Expr l1 = parse(l1s, symbols);
    const Expr l2 = parse(l2s, symbols);
    text << "candidate L1 = " << l1s << ", L2 = " << l2s << "\n";
    CriterionVerdict tv = verify_criterion_conditions(model, l1, l2);
    std::string first;
    const bool direct = direct_pseudosymmetry_check(model, l1, l2, &first);
    Json conds = Json::array();
    for (const auto& c : tv.conditions) {
      conds.push_back(Json{{"name", c.name}, {"statement", c.statement}, {"holds", c.holds}, {"detail", c.detail}});
      text << "  (" << c.name << ") " << (c.holds ? "holds" : "FAILS");
      if (!c.holds && !c.detail.empty()) text << " at " << c.detail;
      text << "\n";
    }
    text << "  direct check: " << (direct ? "holds" : "fails at " + first) << "\n";
    Json cj{{"L1", l1s}, {"L2", l2s}, {"conditions", conds}, {"all_hold", tv.all_hold()}, {"direct", direct},
            {"direct_failure", first}, {"agree", tv.all_hold() == direct}};
    if (!tv.all_hold() || tv.all_hold() != direct) res.exit_code = kExitVerdictFailure;

    Json tri = Json::array();
    const std::vector<TrichotomyPoint> tps = trichotomy_report(model, l1);
    std::map<std::vector<std::string>, int> label_sets;
    for (const TrichotomyPoint& tp : tps) {
      tri.push_back(Json{{"point", point_json(tp.point)}, {"labels", tp.labels}});
      ++label_sets[tp.labels];
    }
    for (const auto& [labels, count] : label_sets) {
      std::string joined;
      for (const auto& l : labels) joined += (joined.empty() ? "" : ", ") + l;
      if (joined.empty()) joined = "no alternative holds";
      text << "  trichotomy: " << joined << " (" << count << " of " << tps.size() << " points)\n";
    }
    cj["trichotomy"] = tri;
    try {
      DichotomyResult d = dichotomy_check(model, l2, l1);
      cj["dichotomy"] = Json{{"applicable", true},
                             {"base_flat", d.base_flat},
                             {"fiber_einstein", d.fiber_einstein},
                             {"consistency_violation", d.consistency_violation}};
      text << "  dichotomy: base " << (d.base_flat ? "flat" : "not flat") << ", fiber "
           << (d.fiber_einstein ? "Einstein" : "not Einstein") << (d.consistency_violation ? " (CONSISTENCY VIOLATION)" : "")
           << "\n";
      if (d.consistency_violation) res.exit_code = kExitVerdictFailure;
    } catch (const std::domain_error& e) {
      if (opt.require_dichotomy) throw;
      cj["dichotomy"] = Json{{"applicable", false}, {"reason", e.what()}};
      text << "  dichotomy: not applicable (" << e.what() << ")\n";
    }
    candidates.push_back(cj);
  }
  wj["candidates"] = candidates;
  res.report["warped"] = wj;
  res.text = text.str();
  return res;
}

namespace {

struct Suite {
  std::ostringstream text;
  Json checks = Json::array();
  bool ok = true;

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back(Json{{"name", name}, {"pass", pass}, {"detail", detail}});
    text << (pass ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) text << " (" << detail << ")";
    text << "\n";
    ok = ok && pass;
  }

  template <class F>
  void guarded(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      check(name, false, e.what());
    }
  }
};

Json verdict_signature(const CommandResult& r) {
  Json sig = Json::array();
  if (r.report.contains("conditions")) {
    for (const auto& v : r.report["conditions"]["verdicts"]) sig.push_back(Json{{v["name"], v["holds"]}});
  }
  if (r.report.contains("warped")) {
    for (const auto& c : r.report["warped"]["candidates"]) {
      for (const auto& cond : c["conditions"]) sig.push_back(Json{{cond["name"], cond["holds"]}});
      sig.push_back(c["direct"]);
    }
  }
  return sig;
}

}  // namespace

CommandResult cmd_selftest(const std::filesystem::path& dir, const RunOptions& opt) {
  Suite s;
  auto load = [&](const char* name) { return load_manifest(dir / name); };
  RunOptions base = opt;

  s.guarded("ex1 fiber curvature", [&] {
    CommandResult r = cmd_curvature(load("ex1_fiber.mf"), base);
    s.check("ex1 fiber curvature", r.exit_code == kExitPass);
  });
  s.guarded("ex1 fiber classify", [&] {
    CommandResult r = cmd_classify(load("ex1_fiber.mf"), base);
    s.check("ex1 fiber classify", r.exit_code == kExitPass);
  });
  for (const char* a : {"0", "1", "-2", "3/7"}) {
    const std::string tag = std::string("ex1 warped a = ") + a;
    s.guarded(tag, [&] {
      RunOptions o = base;
      o.parameters["a"] = a;
      const Manifest m = load("ex1_warped.mf");
      s.check(tag + " curvature", cmd_curvature(m, o).exit_code == kExitPass);
      s.check(tag + " verify", cmd_warped_verify(m, o).exit_code == kExitPass);
    });
  }
  s.guarded("ex2", [&] {
    s.check("ex2 chart curvature", cmd_curvature(load("ex2.mf"), base).exit_code == kExitPass);
    s.check("ex2 chart classify", cmd_classify(load("ex2.mf"), base).exit_code == kExitPass);
    s.check("ex2 warped verify", cmd_warped_verify(load("ex2_warped.mf"), base).exit_code == kExitPass);
  });
  s.guarded("property fixtures", [&] {
    CommandResult flat = cmd_curvature(load("flat.mf"), base);
    s.check("flat chart has zero curvature", flat.report["curvature"]["all_zero"].get<bool>());
    CommandResult sphere = cmd_classify(load("sphere.mf"), base);
    s.check("round sphere is Einstein", sphere.report["conditions"]["einstein"].get<bool>());
    s.check("product verify", cmd_warped_verify(load("product.mf"), base).exit_code == kExitPass);
    for (const char* name : {"flat_sphere.mf", "curved_flat.mf"}) {
      const Json w = cmd_warped_verify(load(name), base).report["warped"];
      bool agree = w["oracle"]["all_equal"].get<bool>();
      for (const auto& c : w["candidates"]) agree = agree && c["agree"].get<bool>();
      s.check(std::string(name) + " blocks and conditions agree with the direct computation", agree);
    }
  });
  s.guarded("corrupted fixture", [&] {
    std::ifstream in(dir / "ex2.mf");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    const std::string from = "1 1 = 1 + 2*exp(x1)";
    const auto at = text.find(from);
    if (at == std::string::npos) throw std::runtime_error("ex2.mf has no '" + from + "' line");
    text.replace(at, from.size(), "1 1 = 1 + 3*exp(x1)");
    CommandResult r = cmd_curvature(parse_manifest(text, "corrupted", dir), base);
    s.check("corrupted fixture is detected", r.exit_code == kExitVerdictFailure);
  });
  s.guarded("seed invariance", [&] {
    RunOptions other = base;
    other.seed = (base.seed ? *base.seed : kDefaultSeed) + 1;
    const Manifest ex2 = load("ex2_warped.mf");
    const Manifest fib = load("ex1_fiber.mf");
    const bool same = verdict_signature(cmd_warped_verify(ex2, base)) == verdict_signature(cmd_warped_verify(ex2, other)) &&
                      verdict_signature(cmd_classify(fib, base)) == verdict_signature(cmd_classify(fib, other));
    s.check("verdicts invariant under a seed change", same);
  });

  CommandResult res;
  res.report["schema"] = kReportSchema;
  res.report["version"] = kReportVersion;
  res.report["command"] = "selftest";
  res.report["checks"] = s.checks;
  res.report["pass"] = s.ok;
  res.text = s.text.str();
  res.exit_code = s.ok ? kExitPass : kExitVerdictFailure;
  return res;
}

}  // namespace warpcurv

#include "warpcurv/conditions.hpp"

#include <Eigen/SVD>
#include <boost/multiprecision/eigen.hpp>

namespace warpcurv {

namespace {

const std::vector<CatalogEntry> kCatalog = {
    {"R.R=0", "semisymmetric", {}, ""},
    {"R.R=L1 Q(g,R)", "pseudosymmetric", {"L1"}, "Q(g,R)"},
    {"R.R=L2 Q(S,R)", "Ricci generalized pseudosymmetric", {"L2"}, ""},
    {"R.R=Q(S,R)", "special Ricci generalized pseudosymmetric", {}, ""},
    {"W.R=0", "semisymmetric due to concircular curvature tensor", {}, ""},
    {"W.R=L2 Q(S,R)", "Ricci generalized pseudosymmetric due to concircular curvature tensor", {"L2"}, ""},
    {"P.R=0", "semisymmetric due to projective curvature tensor", {}, ""},
    {"P.R=L1 Q(g,R)", "pseudosymmetric due to projective curvature tensor", {"L1"}, "R-k/(n(n-1)) G"},
    {"R.S=0", "Ricci semisymmetric", {}, ""},
    {"R.C=L_R Q(g,C)", "conformally pseudosymmetric", {"L_R"}, "C"},
    {"R.S=L_S Q(g,S)", "Ricci pseudosymmetric", {"L_S"}, "S-k/n g"},
    {"R.P=L_P Q(g,P)", "projective pseudosymmetric", {"L_P"}, "Q(g,P)"},
    {"P.S=L2 Q(g,S)", "Ricci pseudosymmetric due to projective curvature tensor", {"L2"}, "S-k/n g"},
    {"R.R=L1 Q(g,R)+L2 Q(S,R)", "pseudosymmetric type", {"L1", "L2"}, ""},
};

const Expr& scalar(const Scalars& s, const std::string& name, const std::string& identity) {
  auto it = s.find(name);
  if (it == s.end()) throw MissingScalar("identity '" + identity + "' needs a candidate for " + name);
  return it->second;
}

void check_symbols(const Chart& c, const Scalars& s) {
  std::set<std::string> allowed(c.coordinates.begin(), c.coordinates.end());
  for (const auto& [p, _] : c.parameters) allowed.insert(p);
  for (const auto& [name, e] : s) {
    for (const std::string& sym : free_symbols(e)) {
      if (!allowed.count(sym)) throw std::invalid_argument(name + " uses unknown symbol '" + sym + "'");
    }
  }
}

TensorField einstein_defect(const CurvatureBundle& b) {
  TensorField out(b.chart, 2, 0, Symmetry::sym2);
  const Expr mean = b.scalar * pow(Expr(b.dim()), -1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = b.ricci[i] - mean * b.g[i];
  return out;
}

TensorField qualifier_tensor(const std::string& q, const CurvatureBundle& b) {
  const int n = b.dim();
  if (q == "Q(g,R)") return tachibana(b.g, b.riemann);
  if (q == "C") return b.conformal();
  if (q == "S-k/n g") return einstein_defect(b);
  if (q == "Q(g,P)") return tachibana(b.g, b.projective());
  if (q == "R-k/(n(n-1)) G") {
    if (n < 2) throw std::invalid_argument("concircular qualifier needs dimension at least 2");
    return b.riemann - (b.scalar * pow(Expr(n * (n - 1)), -1)) * b.gaussian();
  }
  throw std::logic_error("unknown qualifier " + q);
}

bool vanishes_at(Evaluator& ev, const TensorField& t) {
  for (const Expr& e : t.data()) {
    if (e.is_zero_literal()) continue;
    if (!negligible(ev.evaluate(e))) return false;
  }
  return true;
}

std::optional<std::size_t> first_nonzero_at(Evaluator& ev, const TensorField& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].is_zero_literal()) continue;
    if (!negligible(ev.evaluate(t[i]))) return i;
  }
  return std::nullopt;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() { return kCatalog; }

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : kCatalog) {
    if (e.name == name) return e;
  }
  throw UnknownCondition("unknown condition '" + name + "'");
}

TensorField identity_defect(const std::string& name, const CurvatureBundle& b, const Scalars& s,
                            ProjectiveCoefficient pc) {
  catalog_entry(name);
  check_symbols(*b.chart, s);
  const TensorField& r = b.riemann;
  auto rr = [&] { return derivation_action(r, r, b.ginv); };
  auto qgr = [&] { return tachibana(b.g, r); };
  auto qsr = [&] { return tachibana(b.ricci, r); };
  if (name == "R.R=0") return rr();
  if (name == "R.R=L1 Q(g,R)") return rr() - scalar(s, "L1", name) * qgr();
  if (name == "R.R=L2 Q(S,R)") return rr() - scalar(s, "L2", name) * qsr();
  if (name == "R.R=Q(S,R)") return rr() - qsr();
  if (name == "W.R=0") return derivation_action(b.concircular(), r, b.ginv);
  if (name == "W.R=L2 Q(S,R)") return derivation_action(b.concircular(), r, b.ginv) - scalar(s, "L2", name) * qsr();
  if (name == "P.R=0") return derivation_action(b.projective(pc), r, b.ginv);
  if (name == "P.R=L1 Q(g,R)") return derivation_action(b.projective(pc), r, b.ginv) - scalar(s, "L1", name) * qgr();
  if (name == "R.S=0") return derivation_action(r, b.ricci, b.ginv);
  if (name == "R.C=L_R Q(g,C)") {
    return derivation_action(r, b.conformal(), b.ginv) - scalar(s, "L_R", name) * tachibana(b.g, b.conformal());
  }
  if (name == "R.S=L_S Q(g,S)") {
    return derivation_action(r, b.ricci, b.ginv) - scalar(s, "L_S", name) * tachibana(b.g, b.ricci);
  }
  if (name == "R.P=L_P Q(g,P)") {
    return derivation_action(r, b.projective(pc), b.ginv) - scalar(s, "L_P", name) * tachibana(b.g, b.projective(pc));
  }
  if (name == "P.S=L2 Q(g,S)") {
    return derivation_action(b.projective(pc), b.ricci, b.ginv) - scalar(s, "L2", name) * tachibana(b.g, b.ricci);
  }
  const Expr& l1 = scalar(s, "L1", name);
  const Expr& l2 = scalar(s, "L2", name);
  return rr() - l1 * qgr() - l2 * qsr();
}

IdentityVerdict check_identity(const std::string& name, const CurvatureBundle& b, const Scalars& candidates,
                               const CheckOptions& opt) {
  const CatalogEntry& entry = catalog_entry(name);
  IdentityVerdict v;
  v.name = entry.name;
  v.structure = entry.structure;
  const TensorField defect = identity_defect(name, b, candidates, opt.projective);
  std::optional<TensorField> qualifier;
  if (!entry.qualifier.empty()) qualifier = qualifier_tensor(entry.qualifier, b);
  v.holds = true;
  for (const Point& pt : sample_points(b.chart->sample_box(), 2 * opt.points, opt.seed)) {
    if (v.checked_points + v.excluded_points == opt.points) break;
    Evaluator ev(pt);
    try {
      if (qualifier && vanishes_at(ev, *qualifier)) {
        ++v.excluded_points;
        continue;
      }
      if (auto bad = first_nonzero_at(ev, defect)) {
        v.holds = false;
        v.failure = index_label(defect.unflatten(*bad));
        ++v.checked_points;
        break;
      }
    } catch (const DomainError&) {
      continue;
    }
    ++v.checked_points;
  }
  if (v.checked_points + v.excluded_points == 0) throw Inconclusive("no sample point is in the domain of " + name);
  v.candidates_confirmed = v.holds && !entry.scalars.empty();
  return v;
}

bool einstein_check(const CurvatureBundle& b) { return is_zero(einstein_defect(b), *b.tester); }

bool ConditionReport::all_trivial() const {
  for (const auto& f : fits) {
    if (!f.trivial) return false;
  }
  return true;
}

bool ConditionReport::consistent() const {
  for (const auto& f : fits) {
    if (!f.consistent) return false;
  }
  return true;
}

std::vector<Point> fit_points(const CurvatureBundle& b, int count, std::uint64_t seed) {
  std::vector<Point> out;
  for (Point& pt : sample_points(b.chart->sample_box(), 2 * count, seed)) {
    if (static_cast<int>(out.size()) == count) break;
    Evaluator ev(pt);
    try {
      for (const Expr& e : b.riemann.data()) ev.evaluate(e);
      for (const Expr& e : b.ginv.data()) ev.evaluate(e);
    } catch (const DomainError&) {
      continue;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

ConditionReport fit_pseudosymmetry(const CurvatureBundle& b, const std::vector<Point>& points) {
  return fit_pseudosymmetry(b, pseudosymmetry_tensors(b), points);
}

ConditionReport fit_pseudosymmetry(const CurvatureBundle& b, const PseudosymmetryTensors& t,
                                   const std::vector<Point>& points) {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  if (points.size() < 5) throw std::invalid_argument("fit_pseudosymmetry needs at least 5 points");
  (void)b;
  ConditionReport report;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.rr.size(); ++i) {
    if (!t.rr[i].is_zero_literal() || !t.qgr[i].is_zero_literal() || !t.qsr[i].is_zero_literal()) rows.push_back(i);
  }
  const Real tol = rank_tolerance();
  for (const Point& pt : points) {
    Evaluator ev(pt);
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), 2);
    Matrix rhs = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), 1);
    bool any = false;
    try {
      auto value = [&](const Expr& e) -> Real {
        if (e.is_zero_literal()) return 0;
        Valued v = ev.evaluate(e);
        if (negligible(v)) return 0;
        any = true;
        return v.value;
      };
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        rhs(row, 0) = value(t.rr[rows[r]]);
        a(row, 0) = value(t.qgr[rows[r]]);
        a(row, 1) = value(t.qsr[rows[r]]);
      }
    } catch (const DomainError&) {
      ++report.skipped_points;
      continue;
    }
    PointFit fit;
    fit.point = pt;
    if (!any) {
      fit.trivial = true;
      fit.nullspace = {{Real(1), Real(0)}, {Real(0), Real(1)}};
      report.fits.push_back(std::move(fit));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Real top = sv(0);
    Matrix x = Matrix::Zero(2, 1);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (top > 0 && sv(i) > tol * top) {
        ++fit.rank;
        const Real coef = (svd.matrixU().col(i).transpose() * rhs)(0, 0) / sv(i);
        x += coef * svd.matrixV().col(i);
      } else {
        fit.nullspace.emplace_back(svd.matrixV()(0, i), svd.matrixV()(1, i));
      }
    }
    fit.l1 = x(0, 0);
    fit.l2 = x(1, 0);
    fit.residual = (a * x - rhs).norm();
    fit.consistent = fit.residual <= tol * (1 + rhs.norm());
    report.fits.push_back(std::move(fit));
  }
  return report;
}

ConstantType constant_type_check(const ConditionReport& r) {
  ConstantType out;
  const PointFit* first = nullptr;
  const Real tol = rank_tolerance();
  auto close = [&](const Real& a, const Real& b) {
    Real scale = abs(a) > abs(b) ? Real(abs(a)) : Real(abs(b));
    if (scale < 1) scale = 1;
    return abs(a - b) <= tol * scale;
  };
  for (const PointFit& f : r.fits) {
    if (f.trivial || f.rank == 0) continue;
    if (!first) {
      first = &f;
      continue;
    }
    if (!close(f.l1, first->l1) || !close(f.l2, first->l2)) return out;
  }
  out.constant = true;
  out.degenerate = first == nullptr;
  if (first) {
    out.l1 = first->l1;
    out.l2 = first->l2;
  }
  return out;
}

}  // namespace warpcurv

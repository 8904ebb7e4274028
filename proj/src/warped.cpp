#include "warpcurv/warped.hpp"

#include <set>
#include <stdexcept>

namespace warpcurv {

namespace {

std::string coordinate_name(int i) { return "x" + std::to_string(i + 1); }

bool only_symbols(const Expr& e, const std::set<std::string>& allowed, std::string* bad) {
  for (const std::string& s : free_symbols(e)) {
    if (!allowed.count(s)) {
      if (bad) *bad = s;
      return false;
    }
  }
  return true;
}

std::map<std::string, Interval> merged_parameters(const WarpedSpec& spec) {
  std::map<std::string, Interval> params = spec.base->parameters;
  for (const auto& [name, iv] : spec.fiber->parameters) {
    auto it = params.find(name);
    if (it != params.end() && (it->second.lo != iv.lo || it->second.hi != iv.hi)) {
      throw WarpedSpecError("parameter '" + name + "' has different values on base and fiber");
    }
    params[name] = iv;
  }
  return params;
}

}  // namespace

ChartPtr relabel_fiber(const WarpedSpec& spec, std::map<std::string, std::string>* renaming) {
  const int p = spec.base->dim();
  const int q = spec.fiber->dim();
  std::map<std::string, Expr> substitution;
  std::map<std::string, std::string> names;
  std::vector<std::string> coords;
  for (int alpha = 0; alpha < q; ++alpha) {
    const std::string& old = spec.fiber->coordinates[static_cast<std::size_t>(alpha)];
    const std::string fresh = coordinate_name(p + alpha);
    names[old] = fresh;
    coords.push_back(fresh);
    if (old != fresh) substitution[old] = Expr::variable(fresh);
  }
  for (const std::string& b : spec.base->coordinates) {
    if (std::find(coords.begin(), coords.end(), b) != coords.end()) {
      throw WarpedSpecError("base coordinate '" + b + "' collides with relabeled fiber coordinate");
    }
  }
  for (const auto& [param, _] : merged_parameters(spec)) {
    if (std::find(coords.begin(), coords.end(), param) != coords.end() ||
        std::find(spec.base->coordinates.begin(), spec.base->coordinates.end(), param) !=
            spec.base->coordinates.end()) {
      throw WarpedSpecError("parameter '" + param + "' collides with a coordinate name");
    }
  }
  std::vector<std::vector<Expr>> metric(static_cast<std::size_t>(q), std::vector<Expr>(static_cast<std::size_t>(q)));
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          substitution.empty() ? spec.fiber->g(i, j) : substitute(spec.fiber->g(i, j), substitution);
    }
  }
  std::map<std::string, Interval> box;
  for (const auto& [old, fresh] : names) {
    auto it = spec.fiber->box.find(old);
    if (it != spec.fiber->box.end()) box[fresh] = it->second;
  }
  if (renaming) *renaming = names;
  return make_chart(spec.fiber->name, coords, std::move(metric), spec.fiber->parameters, std::move(box));
}

namespace {

ChartPtr assemble(const WarpedSpec& spec, const ChartPtr& fiber) {
  const int p = spec.base->dim();
  const int q = fiber->dim();
  const int n = p + q;
  std::set<std::string> base_symbols(spec.base->coordinates.begin(), spec.base->coordinates.end());
  std::map<std::string, Interval> params = merged_parameters(spec);
  for (const auto& [name, _] : params) base_symbols.insert(name);
  std::string bad;
  if (!only_symbols(spec.warping, base_symbols, &bad)) {
    throw WarpedSpecError("warping function uses '" + bad + "', which is not a base coordinate or parameter");
  }
  std::vector<std::string> coords = spec.base->coordinates;
  coords.insert(coords.end(), fiber->coordinates.begin(), fiber->coordinates.end());
  std::vector<std::vector<Expr>> metric(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) metric[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = spec.base->g(a, b);
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const Expr& gf = fiber->g(a, b);
      metric[static_cast<std::size_t>(p + a)][static_cast<std::size_t>(p + b)] =
          gf.is_zero_literal() ? Expr() : spec.warping * gf;
    }
  }
  std::map<std::string, Interval> box = spec.base->box;
  box.insert(fiber->box.begin(), fiber->box.end());
  auto product = make_chart(spec.name, coords, std::move(metric), params, std::move(box));
  // f > 0 on the base box
  SampleBox base_box = spec.base->sample_box();
  base_box.parameters = params;
  for (const Point& pt : sample_points(base_box, 2 * kDefaultTrials, kDefaultSeed)) {
    Real v;
    try {
      v = eval(spec.warping, pt);
    } catch (const DomainError&) {
      throw WarpedSpecError("warping function is undefined at " + to_string(pt));
    }
    if (!(v > 0)) throw WarpedSpecError("warping function is not positive at " + to_string(pt));
  }
  return product;
}

}  // namespace

ChartPtr assemble_product(const WarpedSpec& spec) { return assemble(spec, relabel_fiber(spec)); }

WarpedAux auxiliaries(const CurvatureBundle& base, const Expr& f, int n) {
  const ChartPtr& c = base.chart;
  const int p = c->dim();
  WarpedAux aux;
  for (const std::string& x : c->coordinates) aux.grad.push_back(diff(f, x));
  aux.hessian = covariant_hessian(c, base.gamma, f);
  const Expr inv2f = pow(2 * f, -1);
  aux.t = TensorField(c, 2, 0, Symmetry::sym2);
  for (int a = 0; a < p; ++a) {
    for (int b = a; b < p; ++b) {
      aux.t(a, b) = inv2f * (aux.hessian(a, b) - aux.grad[static_cast<std::size_t>(a)] * aux.grad[static_cast<std::size_t>(b)] * inv2f);
      aux.t(b, a) = aux.t(a, b);
    }
  }
  std::vector<Expr> tr;
  std::vector<Expr> grad2;
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      if (base.ginv(a, b).is_zero_literal()) continue;
      tr.push_back(base.ginv(a, b) * aux.t(a, b));
      grad2.push_back(base.ginv(a, b) * aux.grad[static_cast<std::size_t>(a)] * aux.grad[static_cast<std::size_t>(b)]);
    }
  }
  aux.trace_t = sum(tr);
  aux.delta = sum(grad2) * pow(4 * pow(f, 2), -1);
  aux.omega = -(f * (Expr(n - p - 1) * aux.delta + aux.trace_t));
  aux.t_raised = TensorField(c, 2, 0, Symmetry::none);
  for (int t = 0; t < p; ++t) {
    for (int s = 0; s < p; ++s) {
      std::vector<Expr> terms;
      for (int b = 0; b < p; ++b) terms.push_back(base.ginv(t, b) * aux.t(b, s));
      aux.t_raised(t, s) = sum(terms);
    }
  }
  aux.t_squared = TensorField(c, 2, 0, Symmetry::sym2);
  for (int a = 0; a < p; ++a) {
    for (int s = 0; s < p; ++s) {
      std::vector<Expr> terms;
      for (int t = 0; t < p; ++t) terms.push_back(aux.t_raised(t, a) * aux.t(t, s));
      aux.t_squared(a, s) = sum(terms);
    }
  }
  return aux;
}

const char* to_string(BlockPattern p) {
  switch (p) {
    case BlockPattern::bbbb_bb: return "abcdst";
    case BlockPattern::bfbf_bb: return "aAbBst";
    case BlockPattern::bbbf_bf: return "abcAsB";
    case BlockPattern::bfff_bf: return "aABCsD";
    case BlockPattern::bfbf_ff: return "aAbBCD";
    case BlockPattern::ffff_ff: return "ABCDEF";
    default: return "other";
  }
}

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::rr: return "R.R";
    case ActionKind::qgr: return "Q(g,R)";
    default: return "Q(S,R)";
  }
}

namespace {

struct Image4 {
  std::array<int, 4> order;
  int sign;
};

// The symmetry orbit of a curvature-like index quadruple.
constexpr std::array<Image4, 8> kCurvatureImages = {{
    {{0, 1, 2, 3}, 1}, {{1, 0, 2, 3}, -1}, {{0, 1, 3, 2}, -1}, {{1, 0, 3, 2}, 1},
    {{2, 3, 0, 1}, 1}, {{3, 2, 0, 1}, -1}, {{2, 3, 1, 0}, -1}, {{3, 2, 1, 0}, 1},
}};

std::string types(const int* idx, int count, int p) {
  std::string s;
  for (int i = 0; i < count; ++i) s += idx[i] < p ? 'b' : 'f';
  return s;
}

struct Canonical4 {
  std::string pattern;  // "bbbb", "bfbf", "bbbf", "bfff", "ffff" or ""
  std::array<int, 4> index{};
  int sign = 0;
};

Canonical4 canonicalize4(const int* idx, int p) {
  static const std::set<std::string> listed = {"bbbb", "bfbf", "bbbf", "bfff", "ffff"};
  for (const Image4& im : kCurvatureImages) {
    std::array<int, 4> j{};
    for (int r = 0; r < 4; ++r) j[static_cast<std::size_t>(r)] = idx[im.order[static_cast<std::size_t>(r)]];
    const std::string t = types(j.data(), 4, p);
    if (listed.count(t)) return {t, j, im.sign};
  }
  return {};
}

}  // namespace

Canonical6 canonicalize6(const int* idx, int p) {
  Canonical6 out;
  Canonical4 c = canonicalize4(idx, p);
  if (c.pattern.empty()) return out;
  int u = idx[4];
  int v = idx[5];
  if (u == v) return out;
  int sign = c.sign;
  if (u >= p && v < p) {
    std::swap(u, v);
    sign = -sign;
  }
  const std::string last = types(std::array<int, 2>{u, v}.data(), 2, p);
  const std::string key = c.pattern + last;
  BlockPattern pattern = BlockPattern::zero;
  if (key == "bbbbbb") pattern = BlockPattern::bbbb_bb;
  else if (key == "bfbfbb") pattern = BlockPattern::bfbf_bb;
  else if (key == "bbbfbf") pattern = BlockPattern::bbbf_bf;
  else if (key == "bfffbf") pattern = BlockPattern::bfff_bf;
  else if (key == "bfbfff") pattern = BlockPattern::bfbf_ff;
  else if (key == "ffffff") pattern = BlockPattern::ffff_ff;
  if (pattern == BlockPattern::zero) return out;
  out.pattern = pattern;
  for (int r = 0; r < 4; ++r) out.index[static_cast<std::size_t>(r)] = c.index[static_cast<std::size_t>(r)];
  out.index[4] = u;
  out.index[5] = v;
  out.sign = sign;
  return out;
}

WarpedModel::WarpedModel(WarpedSpec spec, Orientation o, int trials, std::uint64_t seed)
    : spec_(std::move(spec)), orientation_(o) {
  ChartPtr fiber = relabel_fiber(spec_, &renaming_);
  product_ = assemble(spec_, fiber);
  p_ = spec_.base->dim();
  n_ = product_->dim();
  f_ = spec_.warping;
  // Parameters of the whole product are visible on both factors.
  auto widen = [&](const ChartPtr& c) {
    auto copy = std::make_shared<Chart>(*c);
    copy->parameters = product_->parameters;
    return ChartPtr(copy);
  };
  base_ = compute_curvature(widen(spec_.base), o, trials, seed);
  fiber_ = compute_curvature(widen(fiber), o, trials, seed);
  tester_ = std::make_shared<ZeroTester>(product_->sample_box(), trials, seed);
  aux_ = auxiliaries(base_, f_, n_);

  const Expr eps(sign(o));
  geo_.rb = eps * base_.riemann;
  geo_.sb = eps * base_.ricci;
  geo_.kb = eps * base_.scalar;
  geo_.rf = eps * fiber_.riemann;
  geo_.sf = eps * fiber_.ricci;
  geo_.kf = eps * fiber_.scalar;
  geo_.gf_gauss = fiber_.gaussian();
  geo_.rr_b = derivation_action(geo_.rb, geo_.rb, base_.ginv);
  geo_.qgr_b = tachibana(base_.g, geo_.rb);
  geo_.qsr_b = tachibana(geo_.sb, geo_.rb);
  geo_.qtr_b = tachibana(aux_.t, geo_.rb);
  geo_.rt_b = derivation_action(geo_.rb, aux_.t, base_.ginv);
  geo_.qgt_b = tachibana(base_.g, aux_.t);
  geo_.qst_b = tachibana(geo_.sb, aux_.t);
  geo_.rr_f = derivation_action(geo_.rf, geo_.rf, fiber_.ginv);
  geo_.qgr_f = tachibana(fiber_.g, geo_.rf);
  geo_.qsr_f = tachibana(geo_.sf, geo_.rf);
  geo_.qsg_f = tachibana(geo_.sf, geo_.gf_gauss);
  geo_.qgs_f = tachibana(fiber_.g, geo_.sf);
}

Expr WarpedModel::geometric_riemann(const int* idx) const {
  Canonical4 c = canonicalize4(idx, p_);
  const int p = p_;
  Expr v;
  if (c.pattern == "bbbb") {
    v = geo_.rb(c.index[0], c.index[1], c.index[2], c.index[3]);
  } else if (c.pattern == "bfbf") {
    v = f_ * aux_.t(c.index[0], c.index[2]) * fiber_.g(c.index[1] - p, c.index[3] - p);
  } else if (c.pattern == "ffff") {
    const int a = c.index[0] - p, b = c.index[1] - p, cc = c.index[2] - p, d = c.index[3] - p;
    v = f_ * geo_.rf(a, b, cc, d) - pow(f_, 2) * aux_.delta * geo_.gf_gauss(a, b, cc, d);
  } else {
    return Expr();
  }
  return c.sign < 0 ? -v : v;
}

Expr WarpedModel::riemann_block(const int* idx) const {
  return Expr(sign(orientation_)) * geometric_riemann(idx);
}

Expr WarpedModel::ricci_block(int i, int j) const {
  Expr v;
  if (i < p_ && j < p_) {
    v = geo_.sb(i, j) - Expr(n_ - p_) * aux_.t(i, j);
  } else if (i >= p_ && j >= p_) {
    v = geo_.sf(i - p_, j - p_) + aux_.omega * fiber_.g(i - p_, j - p_);
  } else {
    return Expr();
  }
  return Expr(sign(orientation_)) * v;
}

Expr WarpedModel::scalar_block() const {
  const int q = n_ - p_;
  const Expr v = geo_.kb + geo_.kf / f_ - Expr(q) * (Expr(q - 1) * aux_.delta + 2 * aux_.trace_t);
  return Expr(sign(orientation_)) * v;
}

Expr WarpedModel::geometric_action(ActionKind k, const Canonical6& c, QsrBaseBlock variant) const {
  const int p = p_;
  const Expr np(n_ - p_);
  const auto& x = c.index;
  const TensorField& gb = base_.g;
  const TensorField& gf = fiber_.g;
  const TensorField& t = aux_.t;
  const Expr& f = f_;
  const Expr& delta = aux_.delta;
  const Expr& omega = aux_.omega;
  switch (c.pattern) {
    case BlockPattern::bbbb_bb: {
      const int* i = x.data();
      const std::size_t at = geo_.rr_b.index(i);
      if (k == ActionKind::rr) return geo_.rr_b[at];
      if (k == ActionKind::qgr) return geo_.qgr_b[at];
      if (variant == QsrBaseBlock::verbatim) return geo_.qsr_b[at] - np * geo_.qsr_b[at];
      return geo_.qsr_b[at] - np * geo_.qtr_b[at];
    }
    case BlockPattern::bfbf_bb: {
      // (a, α, b, β, s, t)
      const int a = x[0], alpha = x[1] - p, b = x[2], beta = x[3] - p, s = x[4], tt = x[5];
      const TensorField& src = k == ActionKind::rr ? geo_.rt_b : (k == ActionKind::qgr ? geo_.qgt_b : geo_.qst_b);
      return f * gf(alpha, beta) * src(a, b, s, tt);
    }
    case BlockPattern::bbbf_bf: {
      // (a, b, c, α, s, η)
      const int a = x[0], b = x[1], cc = x[2], alpha = x[3] - p, s = x[4], eta = x[5] - p;
      if (k == ActionKind::rr) {
        std::vector<Expr> terms = {t(a, s) * t(b, cc), -(t(a, cc) * t(b, s))};
        for (int u = 0; u < p; ++u) terms.push_back(aux_.t_raised(u, s) * geo_.rb(a, b, cc, u));
        return f * gf(alpha, eta) * sum(terms);
      }
      if (k == ActionKind::qgr) {
        const Expr terms[] = {geo_.rb(a, b, cc, s), -(gb(b, s) * t(a, cc)), gb(a, s) * t(b, cc)};
        return -(f * gf(alpha, eta) * sum(terms));
      }
      const Expr sa = geo_.sb(a, s) - np * t(a, s);
      const Expr sbs = geo_.sb(b, s) - np * t(b, s);
      return -(geo_.rb(a, b, cc, s) * (geo_.sf(alpha, eta) + omega * gf(alpha, eta)) +
               f * gf(alpha, eta) * (t(b, cc) * sa - t(a, cc) * sbs));
    }
    case BlockPattern::bfff_bf: {
      // (a, α, β, γ, s, η)
      const int a = x[0], alpha = x[1] - p, beta = x[2] - p, gamma = x[3] - p, s = x[4], eta = x[5] - p;
      const Expr rt = geo_.rf(eta, alpha, beta, gamma);
      const Expr gt = geo_.gf_gauss(eta, alpha, beta, gamma);
      if (k == ActionKind::rr) {
        return -(f * t(a, s) * (rt - f * delta * gt)) - pow(f, 2) * aux_.t_squared(a, s) * gt;
      }
      if (k == ActionKind::qgr) {
        return f * (gb(a, s) * rt + f * (t(a, s) - delta * gb(a, s)) * gt);
      }
      const Expr sa = geo_.sb(a, s) - np * t(a, s);
      return f * sa * (rt - f * delta * gt) +
             f * t(a, s) *
                 (gf(alpha, beta) * (geo_.sf(gamma, eta) + omega * gf(gamma, eta)) -
                  gf(alpha, gamma) * (geo_.sf(beta, eta) + omega * gf(beta, eta)));
    }
    case BlockPattern::bfbf_ff: {
      // (a, α, b, β, μ, η)
      if (k != ActionKind::qsr) return Expr();
      const int a = x[0], alpha = x[1] - p, b = x[2], beta = x[3] - p, mu = x[4] - p, eta = x[5] - p;
      return -(f * t(a, b) * geo_.qgs_f(alpha, beta, mu, eta));
    }
    case BlockPattern::ffff_ff: {
      std::array<int, 6> l{};
      for (std::size_t r = 0; r < 6; ++r) l[r] = x[r] - p;
      const std::size_t at = geo_.rr_f.index(l.data());
      if (k == ActionKind::rr) return f * (geo_.rr_f[at] - f * delta * geo_.qgr_f[at]);
      if (k == ActionKind::qgr) return pow(f, 2) * geo_.qgr_f[at];
      return f * (geo_.qsr_f[at] - f * delta * geo_.qsg_f[at] + omega * geo_.qgr_f[at]);
    }
    default:
      return Expr();
  }
}

Expr WarpedModel::action_block(ActionKind k, const int* idx, QsrBaseBlock variant) const {
  Canonical6 c = canonicalize6(idx, p_);
  if (c.pattern == BlockPattern::zero) return Expr();
  Expr v = geometric_action(k, c, variant);
  if (c.sign < 0) v = -v;
  // R·R and Q(S,R) are even in the orientation, Q(g,R) is odd.
  if (k == ActionKind::qgr && orientation_ == Orientation::reversed) v = -v;
  return v;
}

TensorField WarpedModel::assemble_riemann() const {
  TensorField r(product_, 4, 0, Symmetry::curvature);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::vector<int> idx = r.unflatten(i);
    r[i] = riemann_block(idx.data());
  }
  return r;
}

TensorField WarpedModel::assemble_ricci() const {
  TensorField s(product_, 2, 0, Symmetry::sym2);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) s(i, j) = ricci_block(i, j);
  }
  return s;
}

TensorField WarpedModel::assemble_action(ActionKind k, QsrBaseBlock variant) const {
  TensorField out(product_, 6, 0, Symmetry::none);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<int> idx = out.unflatten(i);
    out[i] = action_block(k, idx.data(), variant);
  }
  return out;
}

bool OracleReport::all_equal() const {
  if (!scalar_equal) return false;
  for (const auto& t : tensors) {
    if (!t.equal) return false;
  }
  return true;
}

namespace {

TensorComparison compare_tensors(const std::string& name, const TensorField& blocks, const TensorField& direct,
                                 ZeroTester& zt, int p) {
  TensorComparison out;
  out.tensor = name;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Expr d = blocks[i] - direct[i];
    ++out.checked;
    if (d.is_zero_literal() || zt.is_zero(d)) continue;
    out.equal = false;
    std::vector<int> idx = blocks.unflatten(i);
    std::string pattern;
    if (idx.size() == 6) pattern = to_string(canonicalize6(idx.data(), p).pattern);
    else pattern = types(idx.data(), static_cast<int>(idx.size()), p);
    if (out.mismatches.size() < 4096) out.mismatches.emplace_back(index_label(idx), pattern);
  }
  return out;
}

}  // namespace

OracleReport oracle_equivalence(const WarpedModel& m, QsrBaseBlock variant) {
  OracleReport report;
  CurvatureBundle direct = compute_curvature(m.product(), m.orientation(), m.tester().trials());
  ZeroTester& zt = m.tester();
  report.tensors.push_back(compare_tensors("R", m.assemble_riemann(), direct.riemann, zt, m.p()));
  report.tensors.push_back(compare_tensors("S", m.assemble_ricci(), direct.ricci, zt, m.p()));
  report.scalar_equal = zt.is_zero(m.scalar_block() - direct.scalar);
  PseudosymmetryTensors ps = pseudosymmetry_tensors(direct);
  report.tensors.push_back(compare_tensors("R.R", m.assemble_action(ActionKind::rr), ps.rr, zt, m.p()));
  report.tensors.push_back(compare_tensors("Q(g,R)", m.assemble_action(ActionKind::qgr), ps.qgr, zt, m.p()));
  report.tensors.push_back(compare_tensors("Q(S,R)", m.assemble_action(ActionKind::qsr, variant), ps.qsr, zt, m.p()));
  return report;
}

namespace {

void require_base_function(const WarpedModel& m, const Expr& e, const char* what) {
  std::set<std::string> allowed(m.base().chart->coordinates.begin(), m.base().chart->coordinates.end());
  for (const auto& [name, _] : m.product()->parameters) allowed.insert(name);
  std::string bad;
  if (!only_symbols(e, allowed, &bad)) {
    throw std::invalid_argument(std::string(what) + " depends on '" + bad +
                                "', which is not a base coordinate or parameter");
  }
}

std::string excerpt(const Expr& e) {
  constexpr std::size_t kMaxNodes = 300;
  constexpr std::size_t kMaxChars = 160;
  if (node_count(e) > kMaxNodes) return "<residual with " + std::to_string(node_count(e)) + " nodes>";
  std::string s = to_string(e);
  if (s.size() > kMaxChars) s = s.substr(0, kMaxChars) + "...";
  return s;
}

// Scans index tuples of `dims` ranges; `residual` returns the expression
// that must vanish. Stops at the first nonzero one.
template <class F>
bool scan(ZeroTester& zt, std::vector<int> dims, F&& residual, std::string* where) {
  std::vector<int> idx(dims.size(), 0);
  for (;;) {
    const Expr r = residual(idx);
    if (!zt.is_zero(r)) {
      if (where) *where = index_label(idx) + ": " + excerpt(r);
      return false;
    }
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
      if (k == 0) return true;
    }
    if (idx.empty()) return true;
  }
}

}  // namespace

bool CriterionVerdict::all_hold() const {
  for (const auto& c : conditions) {
    if (!c.holds) return false;
  }
  return true;
}

const ConditionVerdict& CriterionVerdict::operator[](const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no condition named " + name);
}

FactorTest factor_test(const WarpedModel& m, std::span<const Expr> base_factor, std::span<const Expr> fiber_factor) {
  FactorTest out;
  out.base_factor_zero = m.base_tester().all_zero(base_factor);
  out.fiber_factor_zero = m.fiber_tester().all_zero(fiber_factor);
  return out;
}

CriterionVerdict verify_criterion_conditions(const WarpedModel& m, const Expr& l1_bundle, const Expr& l2) {
  require_base_function(m, l1_bundle, "L1");
  require_base_function(m, l2, "L2");
  const auto& geo = m.geometric();
  const auto& aux = m.aux();
  const TensorField& gb = m.base().g;
  const TensorField& gf = m.fiber().g;
  const int p = m.p();
  const int q = m.n() - p;
  const Expr np(q);
  const Expr& f = m.f();
  const Expr l1 = Expr(sign(m.orientation())) * l1_bundle;
  ZeroTester& zt = m.tester();
  CriterionVerdict out;

  auto add = [&](std::string name, std::string statement, bool holds, std::string detail) {
    out.conditions.push_back({std::move(name), std::move(statement), holds, std::move(detail)});
  };

  std::string where;
  bool ok = scan(zt, {p, p, p, p, p, p}, [&](const std::vector<int>& i) {
    const std::size_t at = geo.rr_b.index(i.data());
    return geo.rr_b[at] - l1 * geo.qgr_b[at] - l2 * (geo.qsr_b[at] - np * geo.qtr_b[at]);
  }, &where);
  add("I", "Rb.Rb = L1 Q(gb,Rb) + L2 Q(Sb,Rb) - L2 (n-p) Q(T,Rb)", ok, where);

  where.clear();
  ok = scan(zt, {p, p, p, q, p, q}, [&](const std::vector<int>& i) {
    const int a = i[0], b = i[1], c = i[2], alpha = i[3], s = i[4], eta = i[5];
    if (gf(alpha, eta).is_zero_literal() && geo.sf(alpha, eta).is_zero_literal()) return Expr();
    std::vector<Expr> lhs = {aux.t(a, s) * aux.t(b, c), -(aux.t(a, c) * aux.t(b, s))};
    for (int t = 0; t < p; ++t) lhs.push_back(aux.t_raised(t, s) * geo.rb(a, b, c, t));
    const Expr sa = geo.sb(a, s) - np * aux.t(a, s);
    const Expr sbs = geo.sb(b, s) - np * aux.t(b, s);
    const Expr terms[] = {
        f * gf(alpha, eta) * sum(lhs),
        l1 * f * gf(alpha, eta) * (geo.rb(a, b, c, s) - aux.t(a, c) * gb(b, s) + aux.t(b, c) * gb(a, s)),
        l2 * geo.rb(a, b, c, s) * (geo.sf(alpha, eta) + aux.omega * gf(alpha, eta)),
        l2 * f * gf(alpha, eta) * (aux.t(b, c) * sa - aux.t(a, c) * sbs),
    };
    return sum(terms);
  }, &where);
  add("II", "f g_AB (T_as T_bc - T_ac T_bs + T^t_s Rb_abct) + L1 f g_AB (Rb_abcs - T_ac gb_bs + T_bc gb_as) "
      "+ L2 Rb_abcs (Sf_AB + Omega gf_AB) + L2 f gf_AB [T_bc Sb'_as - T_ac Sb'_bs] = 0", ok, where);

  where.clear();
  ok = scan(zt, {p, q, q, q, p, q}, [&](const std::vector<int>& i) {
    const int a = i[0], alpha = i[1], beta = i[2], gamma = i[3], s = i[4], eta = i[5];
    const Expr rt = geo.rf(eta, alpha, beta, gamma);
    const Expr gt = geo.gf_gauss(eta, alpha, beta, gamma);
    const Expr sa = geo.sb(a, s) - np * aux.t(a, s);
    const Expr terms[] = {
        aux.t(a, s) * (rt - f * aux.delta * gt),
        f * aux.t_squared(a, s) * gt,
        l1 * (gb(a, s) * rt + f * (aux.t(a, s) - aux.delta * gb(a, s)) * gt),
        l2 * sa * (rt - f * aux.delta * gt),
        l2 * aux.t(a, s) *
            (gf(alpha, beta) * (geo.sf(gamma, eta) + aux.omega * gf(gamma, eta)) -
             gf(alpha, gamma) * (geo.sf(beta, eta) + aux.omega * gf(beta, eta))),
    };
    return sum(terms);
  }, &where);
  add("III", "T_as (Rf - f Delta Gf) + f T2_as Gf + L1 [gb_as Rf + f (T_as - Delta gb_as) Gf] "
      "+ L2 Sb'_as (Rf - f Delta Gf) + L2 T_as [gf_AB Sf'_CE - gf_AC Sf'_BE] = 0", ok, where);

  std::vector<Expr> base_factor;
  for (std::size_t k = 0; k < aux.t.size(); ++k) base_factor.push_back(l2 * aux.t[k]);
  std::vector<Expr> fiber_factor(geo.qgs_f.data().begin(), geo.qgs_f.data().end());
  FactorTest ft = factor_test(m, base_factor, fiber_factor);
  add("IV", "L2 T_ab Q(gf,Sf)_ABCD = 0", ft.product_zero(),
      ft.product_zero() ? (ft.base_factor_zero ? "L2 T = 0" : "Q(gf,Sf) = 0") : "neither factor vanishes");

  where.clear();
  const Expr coef = f * aux.delta + f * l1 + aux.omega * l2;
  ok = scan(zt, {q, q, q, q, q, q}, [&](const std::vector<int>& i) {
    const std::size_t at = geo.rr_f.index(i.data());
    return geo.rr_f[at] - coef * geo.qgr_f[at] - l2 * geo.qsr_f[at] + l2 * f * aux.delta * geo.qsg_f[at];
  }, &where);
  add("V", "Rf.Rf = (f Delta + f L1 + Omega L2) Q(gf,Rf) + L2 Q(Sf,Rf) - L2 f Delta Q(Sf,Gf)", ok, where);

  where.clear();
  ok = scan(zt, {p, p, p, p}, [&](const std::vector<int>& i) {
    const std::size_t at = geo.rt_b.index(i.data());
    return geo.rt_b[at] - l1 * geo.qgt_b[at] - l2 * geo.qst_b[at];
  }, &where);
  add("corollary", "Rb.T = L1 Q(gb,T) + L2 Q(Sb,T)", ok, where);
  return out;
}

bool direct_pseudosymmetry_check(const WarpedModel& m, const Expr& l1, const Expr& l2, std::string* first_failure) {
  CurvatureBundle direct = compute_curvature(m.product(), m.orientation(), m.tester().trials());
  PseudosymmetryTensors ps = pseudosymmetry_tensors(direct);
  ZeroTester& zt = m.tester();
  for (std::size_t i = 0; i < ps.rr.size(); ++i) {
    if (!zt.is_zero(ps.rr[i] - l1 * ps.qgr[i] - l2 * ps.qsr[i])) {
      if (first_failure) *first_failure = index_label(ps.rr.unflatten(i));
      return false;
    }
  }
  return true;
}

namespace {

// True when every expression is negligible at the evaluator's point.
bool vanishes_at(Evaluator& ev, std::span<const Expr> es) {
  for (const Expr& e : es) {
    if (e.is_zero_literal()) continue;
    if (!negligible(ev.evaluate(e))) return false;
  }
  return true;
}

std::vector<Expr> einstein_defect(const CurvatureBundle& b) {
  const int q = b.chart->dim();
  std::vector<Expr> out;
  const Expr mean = b.scalar * pow(Expr(q), -1);
  for (int i = 0; i < q; ++i) {
    for (int j = i; j < q; ++j) out.push_back(b.ricci(i, j) - mean * b.g(i, j));
  }
  return out;
}

}  // namespace

std::vector<TrichotomyPoint> trichotomy_report(const WarpedModel& m, const Expr& l1) {
  require_base_function(m, l1, "L1");
  const std::vector<Expr> flat(m.base().riemann.data().begin(), m.base().riemann.data().end());
  std::vector<Expr> t_minus;
  for (std::size_t k = 0; k < m.aux().t.size(); ++k) t_minus.push_back(m.aux().t[k] - l1 * m.base().g[k]);
  const std::vector<Expr> einstein = einstein_defect(m.fiber());
  std::vector<TrichotomyPoint> out;
  for (const Point& pt : m.tester().points()) {
    Evaluator ev(pt);
    TrichotomyPoint tp{pt, {}};
    try {
      if (vanishes_at(ev, flat)) tp.labels.emplace_back(kLabelBaseFlat);
      if (vanishes_at(ev, t_minus)) tp.labels.emplace_back(kLabelTProportional);
      if (vanishes_at(ev, einstein)) tp.labels.emplace_back(kLabelFiberEinstein);
    } catch (const DomainError&) {
      continue;
    }
    if (tp.labels.empty()) tp.labels.emplace_back("none");
    out.push_back(std::move(tp));
  }
  return out;
}

DichotomyResult dichotomy_check(const WarpedModel& m, const Expr& l2, const std::optional<Expr>& l1) {
  require_base_function(m, l2, "L2");
  for (const Point& pt : m.tester().points()) {
    Evaluator ev(pt);
    if (negligible(ev.evaluate(l2))) {
      throw std::domain_error("L2 vanishes at " + to_string(pt));
    }
  }
  DichotomyResult out;
  out.base_flat = is_zero(m.base().riemann, m.base_tester());
  const std::vector<Expr> einstein = einstein_defect(m.fiber());
  out.fiber_einstein = m.fiber_tester().all_zero(einstein);
  if (l1) {
    out.conditions_hold = verify_criterion_conditions(m, *l1, l2).all_hold();
    out.consistency_violation = *out.conditions_hold && !out.base_flat && !out.fiber_einstein;
  }
  return out;
}

}  // namespace warpcurv

#include "warpcurv/actions.hpp"

#include <array>

namespace warpcurv {

namespace {

struct Image {
  std::array<int, 4> idx;
  int sign;
};

// Orbits of the leading k indices under the declared symmetry of H.
std::vector<std::vector<Image>> leading_orbits(const TensorField& h) {
  const int n = h.dim();
  const int k = h.rank();
  std::vector<std::vector<Image>> out;
  if (k == 4 && h.symmetry() == Symmetry::curvature) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int a = 0; a < n; ++a) {
          for (int b = a + 1; b < n; ++b) {
            if (i * n + j > a * n + b) continue;
            std::vector<Image> orbit = {{{i, j, a, b}, 1}, {{j, i, a, b}, -1}, {{i, j, b, a}, -1}, {{j, i, b, a}, 1}};
            if (i != a || j != b) {
              orbit.push_back({{a, b, i, j}, 1});
              orbit.push_back({{b, a, i, j}, -1});
              orbit.push_back({{a, b, j, i}, -1});
              orbit.push_back({{b, a, j, i}, 1});
            }
            out.push_back(std::move(orbit));
          }
        }
      }
    }
    return out;
  }
  if (k == 2 && h.symmetry() == Symmetry::sym2) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        std::vector<Image> orbit = {{{i, j, 0, 0}, 1}};
        if (i != j) orbit.push_back({{j, i, 0, 0}, 1});
        out.push_back(std::move(orbit));
      }
    }
    return out;
  }
  std::size_t count = 1;
  for (int r = 0; r < k; ++r) count *= static_cast<std::size_t>(n);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::array<int, 4> idx{};
    std::size_t rest = flat;
    for (int r = k - 1; r >= 0; --r) {
      idx[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    out.push_back({{idx, 1}});
  }
  return out;
}

// Builds a (0,k+2) result from a component function evaluated on orbit
// representatives only.
template <class Component>
TensorField build(const TensorField& h, bool antisymmetric_uv, Component component) {
  const int n = h.dim();
  const int k = h.rank();
  if (k != 2 && k != 4) throw TensorMismatch("actions: H must be a (0,2) or (0,4) tensor");
  if (h.upper() != 0) throw TensorMismatch("actions: H must be covariant");
  TensorField out(h.chart(), k + 2, 0, Symmetry::none);
  std::array<int, 6> full{};
  for (const auto& orbit : leading_orbits(h)) {
    const Image& rep = orbit.front();
    for (int r = 0; r < k; ++r) full[static_cast<std::size_t>(r)] = rep.idx[static_cast<std::size_t>(r)];
    for (int u = 0; u < n; ++u) {
      for (int v = antisymmetric_uv ? u + 1 : 0; v < n; ++v) {
        full[static_cast<std::size_t>(k)] = u;
        full[static_cast<std::size_t>(k + 1)] = v;
        const Expr e = component(full.data(), k);
        if (e.is_zero_literal()) continue;
        const Expr neg = -e;
        for (const Image& im : orbit) {
          std::array<int, 6> at{};
          for (int r = 0; r < k; ++r) at[static_cast<std::size_t>(r)] = im.idx[static_cast<std::size_t>(r)];
          at[static_cast<std::size_t>(k)] = u;
          at[static_cast<std::size_t>(k + 1)] = v;
          out[out.index(at.data())] = im.sign > 0 ? e : neg;
          if (antisymmetric_uv) {
            at[static_cast<std::size_t>(k)] = v;
            at[static_cast<std::size_t>(k + 1)] = u;
            out[out.index(at.data())] = im.sign > 0 ? neg : e;
          }
        }
      }
    }
  }
  return out;
}

bool antisymmetric_first_pair(const TensorField& d) {
  if (d.symmetry() == Symmetry::curvature) return true;
  const int n = d.dim();
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          if (!(d(l, i, j, k) + d(l, j, i, k)).is_zero_literal()) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TensorField derivation_action_raised(const TensorField& d_up, const TensorField& h) {
  require_same_chart(d_up, h, "derivation_action");
  if (d_up.rank() != 4 || d_up.upper() != 1) throw TensorMismatch("derivation_action: expected a (1,3) operator");
  const int n = h.dim();
  std::vector<Expr> terms;
  auto component = [&](const int* idx, int k) {
    terms.clear();
    const int u = idx[k];
    const int v = idx[k + 1];
    std::array<int, 4> moved{};
    for (int m = 0; m < k; ++m) {
      for (int r = 0; r < k; ++r) moved[static_cast<std::size_t>(r)] = idx[r];
      for (int t = 0; t < n; ++t) {
        const Expr& op = d_up(t, u, v, idx[m]);
        if (op.is_zero_literal()) continue;
        moved[static_cast<std::size_t>(m)] = t;
        const Expr& hv = h[h.index(moved.data())];
        if (!hv.is_zero_literal()) terms.push_back(op * hv);
      }
    }
    return -sum(terms);
  };
  return build(h, antisymmetric_first_pair(d_up), component);
}

TensorField derivation_action(const TensorField& d, const TensorField& h, const TensorField& ginv) {
  require_same_chart(d, h, "derivation_action");
  TensorField up = raise_first(d, ginv);
  if (d.symmetry() == Symmetry::curvature) up.set_symmetry(Symmetry::curvature);
  return derivation_action_raised(up, h);
}

TensorField tachibana(const TensorField& a, const TensorField& h) {
  require_same_chart(a, h, "tachibana");
  if (a.rank() != 2 || a.upper() != 0) throw TensorMismatch("tachibana: A must be a (0,2) tensor");
  std::vector<Expr> terms;
  auto component = [&](const int* idx, int k) {
    terms.clear();
    const int u = idx[k];
    const int v = idx[k + 1];
    std::array<int, 4> moved{};
    for (int m = 0; m < k; ++m) {
      for (int r = 0; r < k; ++r) moved[static_cast<std::size_t>(r)] = idx[r];
      const Expr& au = a(u, idx[m]);
      if (!au.is_zero_literal()) {
        moved[static_cast<std::size_t>(m)] = v;
        const Expr& hv = h[h.index(moved.data())];
        if (!hv.is_zero_literal()) terms.push_back(au * hv);
      }
      const Expr& av = a(v, idx[m]);
      if (!av.is_zero_literal()) {
        moved[static_cast<std::size_t>(m)] = u;
        const Expr& hu = h[h.index(moved.data())];
        if (!hu.is_zero_literal()) terms.push_back(-(av * hu));
      }
    }
    return sum(terms);
  };
  return build(h, true, component);
}

PseudosymmetryTensors pseudosymmetry_tensors(const CurvatureBundle& b) {
  return {derivation_action(b.riemann, b.riemann, b.ginv), tachibana(b.g, b.riemann),
          tachibana(b.ricci, b.riemann)};
}

namespace {

struct Contraction {
  Real value;
  Real scale;
};

Contraction contract6(const TensorField& t, Evaluator& ev, const std::array<const Vector*, 6>& vs) {
  const int n = t.dim();
  Contraction c{0, 0};
  std::array<int, 6> idx{};
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    if (t[flat].is_zero_literal()) continue;
    std::size_t rest = flat;
    for (int r = 5; r >= 0; --r) {
      idx[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    Real w = 1;
    for (std::size_t r = 0; r < 6; ++r) w *= (*vs[r])[static_cast<std::size_t>(idx[r])];
    if (w == 0) continue;
    Valued v = ev.evaluate(t[flat]);
    Real term = w * v.value;
    c.value += term;
    c.scale += abs(w) * (v.scale > abs(v.value) ? v.scale : abs(v.value));
  }
  return c;
}

void require_plane(const Plane& p, int n) {
  if (static_cast<int>(p.first.size()) != n || static_cast<int>(p.second.size()) != n) {
    throw std::invalid_argument("plane vectors must have one entry per coordinate");
  }
  Real aa = 0, bb = 0, ab = 0;
  for (int i = 0; i < n; ++i) {
    aa += p.first[static_cast<std::size_t>(i)] * p.first[static_cast<std::size_t>(i)];
    bb += p.second[static_cast<std::size_t>(i)] * p.second[static_cast<std::size_t>(i)];
    ab += p.first[static_cast<std::size_t>(i)] * p.second[static_cast<std::size_t>(i)];
  }
  if (aa * bb - ab * ab <= rank_tolerance() * aa * bb) throw std::invalid_argument("plane vectors are parallel");
}

}  // namespace

std::optional<Real> deszcz_ratio(const TensorField& rr, const TensorField& qgr, const Point& at,
                                 const Plane& p1, const Plane& p2) {
  require_same_chart(rr, qgr, "deszcz_ratio");
  const int n = rr.dim();
  require_plane(p1, n);
  require_plane(p2, n);
  Evaluator ev(at);
  const std::array<const Vector*, 6> vs = {&p1.first, &p1.second, &p1.first, &p1.second, &p2.first, &p2.second};
  Contraction num = contract6(rr, ev, vs);
  Contraction den = contract6(qgr, ev, vs);
  if (abs(den.value) <= zero_threshold() * (1 + den.scale)) return std::nullopt;
  return num.value / den.value;
}

std::optional<Real> deszcz_ratio(const CurvatureBundle& b, const Point& at, const Plane& p1, const Plane& p2) {
  TensorField rr = derivation_action(b.riemann, b.riemann, b.ginv);
  TensorField qgr = tachibana(b.g, b.riemann);
  return deszcz_ratio(rr, qgr, at, p1, p2);
}

}  // namespace warpcurv

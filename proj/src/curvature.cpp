#include "warpcurv/curvature.hpp"

namespace warpcurv {

const char* to_string(Orientation o) { return o == Orientation::geometric ? "geometric" : "reversed"; }

const char* to_string(ProjectiveCoefficient c) {
  return c == ProjectiveCoefficient::n_minus_2 ? "1/(n-2)" : "1/(n-1)";
}

namespace {

void require_dim_at_least_3(int n, const char* what) {
  if (n < 3) throw std::invalid_argument(std::string(what) + " needs dimension at least 3");
}

void require_dim_at_least_2(int n, const char* what) {
  if (n < 2) throw std::invalid_argument(std::string(what) + " needs dimension at least 2");
}

TensorField projective_tensor(const CurvatureBundle& b, ProjectiveCoefficient coef) {
  const int n = b.dim();
  require_dim_at_least_3(n, "projective tensor");
  const Expr c = coef == ProjectiveCoefficient::n_minus_2 ? Expr(Rational(1, n - 2)) : Expr(Rational(1, n - 1));
  TensorField p(b.chart, 4, 0, Symmetry::none);
  const TensorField& s = b.ricci;
  const TensorField& g = b.g;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          p(i, j, k, l) = b.riemann(i, j, k, l) - c * (s(j, k) * g(i, l) - s(i, k) * g(j, l));
        }
      }
    }
  }
  return p;
}

}  // namespace

const TensorField& CurvatureBundle::gaussian() const {
  if (!gaussian_) gaussian_ = warpcurv::gaussian(chart);
  return *gaussian_;
}

const TensorField& CurvatureBundle::conformal() const {
  if (!conformal_) {
    const int n = dim();
    require_dim_at_least_3(n, "conformal tensor");
    TensorField gs = kulkarni_nomizu(g, ricci);
    const Expr a = Expr(Rational(1, n - 2));
    const Expr b = scalar * Expr(Rational(1, (n - 1) * (n - 2)));
    TensorField c = riemann - a * gs + b * gaussian();
    c.set_symmetry(Symmetry::curvature);
    conformal_ = std::move(c);
  }
  return *conformal_;
}

const TensorField& CurvatureBundle::concircular() const {
  if (!concircular_) {
    const int n = dim();
    require_dim_at_least_2(n, "concircular tensor");
    TensorField w = riemann - (scalar * Expr(Rational(1, n * (n - 1)))) * gaussian();
    w.set_symmetry(Symmetry::curvature);
    concircular_ = std::move(w);
  }
  return *concircular_;
}

const TensorField& CurvatureBundle::conharmonic() const {
  if (!conharmonic_) {
    const int n = dim();
    require_dim_at_least_3(n, "conharmonic tensor");
    TensorField k = riemann - Expr(Rational(1, n - 2)) * kulkarni_nomizu(g, ricci);
    k.set_symmetry(Symmetry::curvature);
    conharmonic_ = std::move(k);
  }
  return *conharmonic_;
}

const TensorField& CurvatureBundle::projective(ProjectiveCoefficient c) const {
  auto& slot = projective_[c == ProjectiveCoefficient::n_minus_2 ? 0 : 1];
  if (!slot) slot = projective_tensor(*this, c);
  return *slot;
}

TensorField christoffel(const ChartPtr& c, const TensorField& ginv) {
  const int n = c->dim();
  // dg[l][i][j] = ∂_l g_ij
  std::vector<Expr> dg(static_cast<std::size_t>(n * n * n));
  auto at = [n](int l, int i, int j) { return static_cast<std::size_t>((l * n + i) * n + j); };
  for (int l = 0; l < n; ++l) {
    Differentiator d(c->coordinates[static_cast<std::size_t>(l)]);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        dg[at(l, i, j)] = d(c->g(i, j));
        dg[at(l, j, i)] = dg[at(l, i, j)];
      }
    }
  }
  TensorField gamma(c, 3, 1, Symmetry::none);
  const Expr half(Rational(1, 2));
  std::vector<Expr> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // Γ_ijl (first kind) = ½(∂i g_jl + ∂j g_il - ∂l g_ij)
      std::vector<Expr> first(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) {
        const Expr parts[] = {dg[at(i, j, l)], dg[at(j, i, l)], -dg[at(l, i, j)]};
        first[static_cast<std::size_t>(l)] = half * sum(parts);
      }
      for (int k = 0; k < n; ++k) {
        terms.clear();
        for (int l = 0; l < n; ++l) {
          const Expr& gi = ginv(k, l);
          const Expr& f = first[static_cast<std::size_t>(l)];
          if (!gi.is_zero_literal() && !f.is_zero_literal()) terms.push_back(gi * f);
        }
        gamma(k, i, j) = sum(terms);
        gamma(k, j, i) = gamma(k, i, j);
      }
    }
  }
  return gamma;
}

TensorField riemann(const ChartPtr& c, const TensorField& gamma, Orientation o) {
  const int n = c->dim();
  std::vector<Differentiator> d;
  d.reserve(static_cast<std::size_t>(n));
  for (const std::string& x : c->coordinates) d.emplace_back(x);
  // up[m][i][j][k] = R^m_ijk for i < j
  TensorField up(c, 4, 1, Symmetry::none);
  std::vector<Expr> terms;
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          terms.clear();
          terms.push_back(d[static_cast<std::size_t>(i)](gamma(m, j, k)));
          terms.push_back(-d[static_cast<std::size_t>(j)](gamma(m, i, k)));
          for (int p = 0; p < n; ++p) {
            if (!gamma(p, j, k).is_zero_literal() && !gamma(m, i, p).is_zero_literal()) {
              terms.push_back(gamma(p, j, k) * gamma(m, i, p));
            }
            if (!gamma(p, i, k).is_zero_literal() && !gamma(m, j, p).is_zero_literal()) {
              terms.push_back(-(gamma(p, i, k) * gamma(m, j, p)));
            }
          }
          up(m, i, j, k) = sum(terms);
        }
      }
    }
  }
  const Expr eps(sign(o));
  TensorField r(c, 4, 0, Symmetry::curvature);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          terms.clear();
          for (int m = 0; m < n; ++m) {
            const Expr& g = c->g(l, m);
            const Expr& v = up(m, i, j, k);
            if (!g.is_zero_literal() && !v.is_zero_literal()) terms.push_back(g * v);
          }
          r(i, j, k, l) = eps * sum(terms);
          r(j, i, k, l) = -r(i, j, k, l);
        }
      }
    }
  }
  return r;
}

TensorField ricci(const TensorField& r, const TensorField& ginv) {
  const int n = r.dim();
  TensorField s(r.chart(), 2, 0, Symmetry::sym2);
  std::vector<Expr> terms;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      terms.clear();
      for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) {
          const Expr& g = ginv(i, l);
          const Expr& v = r(i, j, k, l);
          if (!g.is_zero_literal() && !v.is_zero_literal()) terms.push_back(g * v);
        }
      }
      s(j, k) = sum(terms);
    }
  }
  return s;
}

Expr scalar_curvature(const TensorField& s, const TensorField& ginv) {
  const int n = s.dim();
  std::vector<Expr> terms;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (!ginv(j, k).is_zero_literal() && !s(j, k).is_zero_literal()) terms.push_back(ginv(j, k) * s(j, k));
    }
  }
  return sum(terms);
}

CurvatureBundle compute_curvature(const ChartPtr& c, Orientation o, int trials, std::uint64_t seed) {
  CurvatureBundle b;
  b.chart = c;
  b.orientation = o;
  b.tester = std::make_shared<ZeroTester>(c->sample_box(), trials, seed);
  validate_chart(*c, *b.tester);
  b.g = metric_tensor(c);
  b.ginv = metric_inverse(c, *b.tester);
  b.gamma = christoffel(c, b.ginv);
  b.riemann = riemann(c, b.gamma, o);
  b.ricci = ricci(b.riemann, b.ginv);
  b.scalar = scalar_curvature(b.ricci, b.ginv);
  return b;
}

DerivedTensors derived_tensors(const CurvatureBundle& b, ProjectiveCoefficient c) {
  require_dim_at_least_3(b.dim(), "derived tensors");
  return {b.conformal(), b.concircular(), b.conharmonic(), b.projective(c)};
}

TensorField covariant_hessian(const ChartPtr& c, const TensorField& gamma, const Expr& phi) {
  const int n = c->dim();
  std::vector<Expr> grad;
  for (const std::string& x : c->coordinates) grad.push_back(diff(phi, x));
  TensorField h(c, 2, 0, Symmetry::sym2);
  std::vector<Expr> terms;
  for (int a = 0; a < n; ++a) {
    Differentiator d(c->coordinates[static_cast<std::size_t>(a)]);
    for (int b = a; b < n; ++b) {
      terms.clear();
      terms.push_back(d(grad[static_cast<std::size_t>(b)]));
      for (int k = 0; k < n; ++k) {
        if (!gamma(k, a, b).is_zero_literal() && !grad[static_cast<std::size_t>(k)].is_zero_literal()) {
          terms.push_back(-(gamma(k, a, b) * grad[static_cast<std::size_t>(k)]));
        }
      }
      h(a, b) = sum(terms);
      h(b, a) = h(a, b);
    }
  }
  return h;
}

}  // namespace warpcurv

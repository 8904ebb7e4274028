#include <cmath>

#include "doctest.h"
#include "reference_values.hpp"
#include "warpcurv/actions.hpp"
#include "warpcurv/curvature.hpp"
#include "warpcurv/parse.hpp"

using namespace warpcurv;

namespace {

using Matrix = std::vector<std::vector<Real>>;

Matrix metric_at(const Chart& c, const Point& p) {
  const int n = c.dim();
  Matrix m(n, std::vector<Real>(n));
  Evaluator ev(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = ev(c.g(i, j));
  }
  return m;
}

Matrix inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Real>(n, Real(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    const Real d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Real f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

Point shifted(Point p, const std::string& v, const Rational& h) {
  p.coordinates[v] += h;
  return p;
}

// Γ^k_ij from central differences of the metric, indexed [k][i][j].
std::vector<Matrix> christoffel_fd(const Chart& c, const Point& p, const Rational& h) {
  const int n = c.dim();
  std::vector<Matrix> dg(n);
  for (int l = 0; l < n; ++l) {
    const Matrix plus = metric_at(c, shifted(p, c.coordinates[l], h));
    const Matrix minus = metric_at(c, shifted(p, c.coordinates[l], -h));
    dg[l] = Matrix(n, std::vector<Real>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) dg[l][i][j] = (plus[i][j] - minus[i][j]) / (2 * Real(h));
    }
  }
  const Matrix ginv = inverse(metric_at(c, p));
  std::vector<Matrix> gamma(n, Matrix(n, std::vector<Real>(n, Real(0))));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) gamma[k][i][j] += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]) / 2;
      }
    }
  }
  return gamma;
}

bool close(const Real& a, const Real& b, const Real& tol) { return abs(a - b) <= tol * (1 + abs(b)); }

}  // namespace

TEST_CASE("curved3 curvature matches independently derived values") {
  const ChartPtr c = build_chart(ref::manifest("curved3.mf"));
  CurvatureBundle geo = compute_curvature(c, Orientation::geometric);
  ZeroTester& zt = *geo.tester;
  const Symbols s = c->symbols();
  auto e = [&](const char* text) { return parse(text, s); };
  CHECK(zt.is_zero(geo.gamma(0, 1, 1) - e("-exp(2*x1)")));
  CHECK(zt.is_zero(geo.gamma(1, 0, 1) - 1));
  CHECK(zt.is_zero(geo.gamma(1, 2, 2) - e("-x2*exp(-2*x1)")));
  CHECK(zt.is_zero(geo.gamma(2, 1, 2) - e("x2/(x2^2 + 1)")));
  CHECK(zt.is_zero(geo.riemann(0, 1, 0, 1) - e("exp(2*x1)")));
  CHECK(zt.is_zero(geo.riemann(0, 2, 1, 2) - e("-x2")));
  CHECK(zt.is_zero(geo.riemann(1, 2, 1, 2) - e("1/(x2^2 + 1)")));
  CHECK(zt.is_zero(geo.riemann(0, 2, 0, 2)));
  CHECK(zt.is_zero(geo.ricci(0, 0) + 1));
  CHECK(zt.is_zero(geo.ricci(0, 1) - e("x2/(x2^2 + 1)")));
  CHECK(zt.is_zero(geo.ricci(1, 1) - e("-exp(2*x1) - 1/(x2^2 + 1)^2")));
  CHECK(zt.is_zero(geo.ricci(2, 2) - e("-exp(-2*x1)/(x2^2 + 1)")));
  CHECK(zt.is_zero(geo.scalar - e("-2 - 2*exp(-2*x1)/(x2^2 + 1)^2")));

  CurvatureBundle rev = compute_curvature(c);
  CHECK(rev.orientation == Orientation::reversed);
  CHECK(is_zero(rev.riemann + geo.riemann, zt));
  CHECK(is_zero(rev.ricci + geo.ricci, zt));
  CHECK(zt.is_zero(rev.scalar + geo.scalar));
}

TEST_CASE("orientation is pinned by the ex2 chart") {
  CurvatureBundle b = compute_curvature(build_chart(ref::manifest("ex2.mf")));
  const Point p = b.tester->points().front();
  CHECK(eval(b.riemann(0, 1, 0, 1), p) < 0);
  CHECK(eval(b.ricci(0, 0), p) > 0);
  CurvatureBundle sphere = compute_curvature(build_chart(ref::manifest("sphere.mf")));
  CHECK(sphere.tester->is_zero(sphere.scalar + 2));
}

TEST_CASE("property: Christoffel symbols and Riemann match finite differences") {
  const Rational h(1, 100000000);
  const Rational hin(1, 1000000000000LL);
  for (const char* file : {"ex2.mf", "ex1_fiber.mf", "curved3.mf", "sphere.mf", "ex1_warped.mf"}) {
    const ChartPtr c = ref::chart_of(ref::manifest(file));
    CurvatureBundle b = compute_curvature(c, Orientation::geometric);
    const int n = c->dim();
    const auto points = b.tester->points();
    for (std::size_t k = 0; k < 5 && k < points.size(); ++k) {
      const Point& p = points[k];
      Evaluator ev(p);
      const auto gamma = christoffel_fd(*c, p, hin);
      for (int a = 0; a < n; ++a) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) CHECK_MESSAGE(close(ev(b.gamma(a, i, j)), gamma[a][i][j], Real("1e-5")), file);
        }
      }
      std::vector<std::vector<Matrix>> dgamma(n);
      for (int l = 0; l < n; ++l) {
        const auto plus = christoffel_fd(*c, shifted(p, c->coordinates[l], h), hin);
        const auto minus = christoffel_fd(*c, shifted(p, c->coordinates[l], -h), hin);
        dgamma[l] = plus;
        for (int a = 0; a < n; ++a) {
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) dgamma[l][a][i][j] = (plus[a][i][j] - minus[a][i][j]) / (2 * Real(h));
          }
        }
      }
      const Matrix g = metric_at(*c, p);
      int bad = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int kk = 0; kk < n; ++kk) {
            for (int l = 0; l < n; ++l) {
              // R_ijkl = g_lm R^m_kij
              Real r = 0;
              for (int m = 0; m < n; ++m) {
                Real up = dgamma[i][m][j][kk] - dgamma[j][m][i][kk];
                for (int q = 0; q < n; ++q) up += gamma[m][i][q] * gamma[q][j][kk] - gamma[m][j][q] * gamma[q][i][kk];
                r += g[l][m] * up;
              }
              if (!close(ev(b.riemann(i, j, kk, l)), r, Real("1e-5"))) ++bad;
            }
          }
        }
      }
      CHECK_MESSAGE(bad == 0, file);
    }
  }
}

TEST_CASE("property: first Bianchi and curvature symmetries hold on every fixture") {
  for (const char* file : ref::all_fixtures()) {
    CurvatureBundle b = compute_curvature(ref::chart_of(ref::manifest(file)));
    CHECK_MESSAGE(!curvature_symmetry_defect(b.riemann, *b.tester).has_value(), file);
    CHECK_MESSAGE(is_generalized_curvature(b.gaussian(), *b.tester), file);
    if (b.dim() >= 3) {
      CHECK_MESSAGE(is_generalized_curvature(b.conformal(), *b.tester), file);
      CHECK_MESSAGE(is_generalized_curvature(b.conharmonic(), *b.tester), file);
    }
  }
}

TEST_CASE("property: the conformal tensor is trace-free") {
  for (const char* file : {"ex1_fiber.mf", "ex1_warped.mf", "ex2.mf", "curved3.mf", "curved_flat.mf", "product.mf"}) {
    CurvatureBundle b = compute_curvature(ref::chart_of(ref::manifest(file)));
    const TensorField& cw = b.conformal();
    const int n = b.dim();
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr tr;
        for (int i = 0; i < n; ++i) {
          for (int l = 0; l < n; ++l) tr += b.ginv(i, l) * cw(i, j, k, l);
        }
        CHECK_MESSAGE(b.tester->is_zero(tr), file);
      }
    }
  }
}

TEST_CASE("ex1 warped scalar curvature is 20a") {
  const Manifest m = ref::manifest("ex1_warped.mf");
  for (const char* a : {"0", "1", "-2", "3/7"}) {
    const ChartPtr c = ref::chart_of(m, {{"a", a}});
    CurvatureBundle b = compute_curvature(c);
    CHECK(b.tester->is_zero(b.scalar - parse("20*a", c->symbols())));
  }
}

TEST_CASE("projective tensor coefficient and symmetries") {
  CurvatureBundle b = compute_curvature(build_chart(ref::manifest("ex2.mf")));
  ZeroTester& zt = *b.tester;
  CHECK(ref::mismatched(b.projective(ProjectiveCoefficient::n_minus_1), ref::ex2_projective, zt).empty());
  CHECK_FALSE(ref::mismatched(b.projective(ProjectiveCoefficient::n_minus_2), ref::ex2_projective, zt).empty());
  CHECK_FALSE(is_generalized_curvature(b.projective(), zt));
  CHECK_THROWS_AS(compute_curvature(build_chart(ref::manifest("sphere.mf"))).projective(), std::invalid_argument);
}

TEST_CASE("derived tensors vanish where expected") {
  CurvatureBundle ex2 = compute_curvature(build_chart(ref::manifest("ex2.mf")));
  CHECK(is_zero(ex2.conformal(), *ex2.tester));
  CurvatureBundle flat = compute_curvature(build_chart(ref::manifest("flat.mf")));
  CHECK(is_zero(flat.riemann, *flat.tester));
  CHECK(is_zero(flat.concircular(), *flat.tester));
  CurvatureBundle sphere = compute_curvature(build_chart(ref::manifest("sphere.mf")));
  CHECK(is_zero(sphere.concircular(), *sphere.tester));
}

TEST_CASE("covariant hessian of a coordinate function") {
  const ChartPtr c = build_chart(ref::manifest("flat.mf"));
  CurvatureBundle b = compute_curvature(c);
  // On the polar plane x1 = r; Hess(r^2/2) = g.
  const Expr phi = parse("x1^2/2", c->symbols());
  const TensorField h = covariant_hessian(c, b.gamma, phi);
  CHECK(is_zero(h - b.g, *b.tester));
}

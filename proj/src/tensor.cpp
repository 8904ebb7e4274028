#include "warpcurv/tensor.hpp"

#include <cstdint>
#include <unordered_map>

namespace warpcurv {

Symbols Chart::symbols() const {
  Symbols s;
  s.coordinates.insert(coordinates.begin(), coordinates.end());
  for (const auto& [name, _] : parameters) s.parameters.insert(name);
  return s;
}

SampleBox Chart::sample_box() const {
  SampleBox b;
  for (const std::string& x : coordinates) {
    auto it = box.find(x);
    b.coordinates[x] = it == box.end() ? SampleBox::default_interval() : it->second;
  }
  b.parameters = parameters;
  return b;
}

ChartPtr make_chart(std::string name, std::vector<std::string> coordinates,
                    std::vector<std::vector<Expr>> metric,
                    std::map<std::string, Interval> parameters,
                    std::map<std::string, Interval> box) {
  const std::size_t n = coordinates.size();
  if (n == 0) throw std::invalid_argument("chart needs at least one coordinate");
  if (metric.size() != n) throw std::invalid_argument("metric has the wrong number of rows");
  for (const auto& row : metric) {
    if (row.size() != n) throw std::invalid_argument("metric has the wrong number of columns");
  }
  auto c = std::make_shared<Chart>();
  c->name = std::move(name);
  c->coordinates = std::move(coordinates);
  c->metric = std::move(metric);
  c->parameters = std::move(parameters);
  c->box = std::move(box);
  return c;
}

ChartPtr make_chart(std::string name, std::vector<std::string> coordinates,
                    const std::vector<std::vector<std::string>>& metric,
                    std::map<std::string, Interval> parameters,
                    std::map<std::string, Interval> box) {
  const std::size_t n = coordinates.size();
  Symbols symbols;
  symbols.coordinates.insert(coordinates.begin(), coordinates.end());
  for (const auto& [p, _] : parameters) symbols.parameters.insert(p);
  if (metric.size() != n) throw std::invalid_argument("metric has the wrong number of rows");
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (metric[i].size() != n) throw std::invalid_argument("metric has the wrong number of columns");
    for (std::size_t j = i; j < n; ++j) {
      g[i][j] = parse(metric[i][j], symbols);
      if (i != j) {
        g[j][i] = metric[j][i].empty() ? g[i][j] : parse(metric[j][i], symbols);
      }
    }
  }
  return make_chart(std::move(name), std::move(coordinates), std::move(g), std::move(parameters),
                    std::move(box));
}

void validate_chart(const Chart& c, ZeroTester& zt) {
  const int n = c.dim();
  const Symbols symbols = c.symbols();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (const std::string& s : free_symbols(c.g(i, j))) {
        if (!symbols.coordinates.count(s) && !symbols.parameters.count(s)) {
          throw std::invalid_argument("metric entry g" + index_label({i, j}) + " uses undeclared symbol '" + s + "'");
        }
      }
      if (j > i && !zt.is_zero(c.g(i, j) - c.g(j, i))) {
        throw std::invalid_argument("metric is not symmetric at g" + index_label({i, j}));
      }
    }
  }
  const Expr det = metric_determinant(c);
  for (const Point& p : zt.points()) {
    Evaluator ev(p);
    Valued v = ev.evaluate(det);
    if (negligible(v)) throw SingularMetric("metric is degenerate at " + to_string(p));
  }
}

TensorField::TensorField(ChartPtr chart, int rank, int upper, Symmetry symmetry)
    : chart_(std::move(chart)), rank_(rank), upper_(upper), symmetry_(symmetry) {
  n_ = chart_->dim();
  std::size_t count = 1;
  for (int i = 0; i < rank; ++i) count *= static_cast<std::size_t>(n_);
  data_.assign(count, Expr());
}

std::size_t TensorField::index(std::initializer_list<int> idx) const { return index(idx.begin()); }

std::size_t TensorField::index(const int* idx) const {
  std::size_t flat = 0;
  for (int i = 0; i < rank_; ++i) flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[i]);
  return flat;
}

std::vector<int> TensorField::unflatten(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(rank_));
  for (int i = rank_ - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

void require_same_chart(const TensorField& a, const TensorField& b, const char* what) {
  if (a.chart() != b.chart()) throw TensorMismatch(std::string(what) + ": tensors live on different charts");
}

namespace {

void require_same_shape(const TensorField& a, const TensorField& b, const char* what) {
  require_same_chart(a, b, what);
  if (a.rank() != b.rank() || a.upper() != b.upper()) {
    throw TensorMismatch(std::string(what) + ": valence mismatch");
  }
}

void require_sym2(const TensorField& t, const char* what) {
  if (t.rank() != 2 || t.upper() != 0) throw TensorMismatch(std::string(what) + ": expected a (0,2) tensor");
}

}  // namespace

TensorField operator+(const TensorField& a, const TensorField& b) {
  require_same_shape(a, b, "tensor sum");
  TensorField r(a.chart(), a.rank(), a.upper(), a.symmetry() == b.symmetry() ? a.symmetry() : Symmetry::none);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
  require_same_shape(a, b, "tensor difference");
  TensorField r(a.chart(), a.rank(), a.upper(), a.symmetry() == b.symmetry() ? a.symmetry() : Symmetry::none);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

TensorField operator*(const Expr& s, const TensorField& t) {
  TensorField r(t.chart(), t.rank(), t.upper(), t.symmetry());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = s * t[i];
  return r;
}

TensorField metric_tensor(const ChartPtr& c) {
  TensorField g(c, 2, 0, Symmetry::sym2);
  for (int i = 0; i < c->dim(); ++i) {
    for (int j = 0; j < c->dim(); ++j) g(i, j) = c->g(i, j);
  }
  return g;
}

namespace {

// Laplace expansion over row/column subsets with memoized minors.
class MinorTable {
 public:
  explicit MinorTable(const Chart& c) : c_(c), n_(c.dim()) {}

  Expr det(std::uint32_t rows, std::uint32_t cols) {
    if (rows == 0) return Expr(1);
    const std::uint64_t key = (static_cast<std::uint64_t>(rows) << 32) | cols;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int r = 0;
    while (!(rows & (1u << r))) ++r;
    std::vector<Expr> terms;
    int position = 0;
    for (int col = 0; col < n_; ++col) {
      if (!(cols & (1u << col))) continue;
      const Expr& entry = c_.g(r, col);
      if (!entry.is_zero_literal()) {
        Expr minor = det(rows & ~(1u << r), cols & ~(1u << col));
        if (!minor.is_zero_literal()) {
          Expr t = entry * minor;
          terms.push_back(position % 2 ? -t : t);
        }
      }
      ++position;
    }
    Expr d = sum(terms);
    memo_.emplace(key, d);
    return d;
  }

  std::uint32_t all() const { return (1u << n_) - 1; }

 private:
  const Chart& c_;
  int n_;
  std::unordered_map<std::uint64_t, Expr> memo_;
};

void check_nonsingular(const Expr& det, ZeroTester& zt) {
  for (const Point& p : zt.points()) {
    Evaluator ev(p);
    if (negligible(ev.evaluate(det))) throw SingularMetric("metric is degenerate at " + to_string(p));
  }
}

TensorField inverse_cofactor(const ChartPtr& c, ZeroTester& zt) {
  const int n = c->dim();
  MinorTable minors(*c);
  const std::uint32_t all = minors.all();
  const Expr det = minors.det(all, all);
  if (det.is_zero_literal()) throw SingularMetric("metric determinant is identically zero");
  check_nonsingular(det, zt);
  const Expr inv_det = pow(det, -1);
  TensorField r(c, 2, 2, Symmetry::sym2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Expr cof = minors.det(all & ~(1u << j), all & ~(1u << i));
      if ((i + j) % 2) cof = -cof;
      r(i, j) = cof * inv_det;
      r(j, i) = r(i, j);
    }
  }
  return r;
}

TensorField inverse_lu(const ChartPtr& c, ZeroTester& zt) {
  const int n = c->dim();
  std::vector<std::vector<Expr>> a = c->metric;
  std::vector<std::vector<Expr>> inv(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr(1);
  auto at = [](auto& m, int i, int j) -> Expr& { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (!at(a, row, col).is_zero_literal() && !zt.is_zero(at(a, row, col))) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw SingularMetric("metric is singular: no usable pivot in column " + std::to_string(col + 1));
    std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(col)]);
    std::swap(inv[static_cast<std::size_t>(pivot)], inv[static_cast<std::size_t>(col)]);
    for (const Point& p : zt.points()) {
      Evaluator ev(p);
      if (negligible(ev.evaluate(at(a, col, col)))) {
        throw SingularMetric("LU pivot vanishes at " + to_string(p));
      }
    }
    const Expr scale = pow(at(a, col, col), -1);
    for (int j = 0; j < n; ++j) {
      at(a, col, j) = at(a, col, j) * scale;
      at(inv, col, j) = at(inv, col, j) * scale;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || at(a, row, col).is_zero_literal()) continue;
      const Expr factor = at(a, row, col);
      for (int j = 0; j < n; ++j) {
        at(a, row, j) = at(a, row, j) - factor * at(a, col, j);
        at(inv, row, j) = at(inv, row, j) - factor * at(inv, col, j);
      }
    }
  }
  TensorField r(c, 2, 2, Symmetry::sym2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r(i, j) = at(inv, i, j);
  }
  return r;
}

}  // namespace

Expr metric_determinant(const Chart& c) {
  MinorTable minors(c);
  return minors.det(minors.all(), minors.all());
}

TensorField metric_inverse(const ChartPtr& c, ZeroTester& zt, InverseMethod method) {
  if (method == InverseMethod::automatic) {
    method = c->dim() <= 5 ? InverseMethod::cofactor : InverseMethod::lu;
  }
  return method == InverseMethod::cofactor ? inverse_cofactor(c, zt) : inverse_lu(c, zt);
}

TensorField metric_inverse(const ChartPtr& c, InverseMethod method) {
  ZeroTester zt(c->sample_box());
  return metric_inverse(c, zt, method);
}

TensorField kulkarni_nomizu(const TensorField& a, const TensorField& e) {
  require_same_chart(a, e, "kulkarni_nomizu");
  require_sym2(a, "kulkarni_nomizu");
  require_sym2(e, "kulkarni_nomizu");
  const int n = a.dim();
  TensorField r(a.chart(), 4, 0, Symmetry::curvature);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const Expr terms[] = {a(i, l) * e(j, k), a(j, k) * e(i, l), -(a(i, k) * e(j, l)),
                                -(a(j, l) * e(i, k))};
          r(i, j, k, l) = sum(terms);
        }
      }
    }
  }
  return r;
}

TensorField gaussian(const ChartPtr& c) {
  const int n = c->dim();
  TensorField r(c, 4, 0, Symmetry::curvature);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) r(i, j, k, l) = c->g(i, l) * c->g(j, k) - c->g(i, k) * c->g(j, l);
      }
    }
  }
  return r;
}

TensorField raise_first(const TensorField& d, const TensorField& ginv) {
  require_same_chart(d, ginv, "raise_first");
  if (d.rank() != 4 || d.upper() != 0) throw TensorMismatch("raise_first: expected a (0,4) tensor");
  if (ginv.rank() != 2 || ginv.upper() != 2) throw TensorMismatch("raise_first: expected the inverse metric");
  const int n = d.dim();
  TensorField r(d.chart(), 4, 1, Symmetry::none);
  std::vector<Expr> terms;
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          terms.clear();
          for (int m = 0; m < n; ++m) {
            const Expr& g = ginv(l, m);
            const Expr& v = d(i, j, k, m);
            if (!g.is_zero_literal() && !v.is_zero_literal()) terms.push_back(g * v);
          }
          r(l, i, j, k) = sum(terms);
        }
      }
    }
  }
  return r;
}

TensorField lower(const TensorField& up, const TensorField& g) {
  require_same_chart(up, g, "lower");
  if (up.rank() != 4 || up.upper() != 1) throw TensorMismatch("lower: expected a (1,3) tensor");
  require_sym2(g, "lower");
  const int n = up.dim();
  TensorField r(up.chart(), 4, 0, Symmetry::none);
  std::vector<Expr> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
          terms.clear();
          for (int l = 0; l < n; ++l) {
            const Expr& a = g(m, l);
            const Expr& v = up(l, i, j, k);
            if (!a.is_zero_literal() && !v.is_zero_literal()) terms.push_back(a * v);
          }
          r(i, j, k, m) = sum(terms);
        }
      }
    }
  }
  return r;
}

std::optional<CurvatureSymmetryDefect> curvature_symmetry_defect(const TensorField& d, ZeroTester& zt) {
  if (d.rank() != 4 || d.upper() != 0) throw TensorMismatch("curvature test: expected a (0,4) tensor");
  const int n = d.dim();
  auto fails = [&](const Expr& e) { return !e.is_zero_literal() && !zt.is_zero(e); };
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          if (fails(d(i, j, k, l) + d(j, i, k, l))) return CurvatureSymmetryDefect{"antisymmetry", {i, j, k, l}};
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          if (i * n + j >= k * n + l) continue;
          if (fails(d(i, j, k, l) - d(k, l, i, j))) return CurvatureSymmetryDefect{"pair", {i, j, k, l}};
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const Expr terms[] = {d(i, j, k, l), d(j, k, i, l), d(k, i, j, l)};
          if (fails(sum(terms))) return CurvatureSymmetryDefect{"bianchi", {i, j, k, l}};
        }
      }
    }
  }
  return std::nullopt;
}

bool is_generalized_curvature(const TensorField& d, ZeroTester& zt) {
  return !curvature_symmetry_defect(d, zt).has_value();
}

bool is_generalized_curvature(const TensorField& d) {
  ZeroTester zt(d.chart()->sample_box());
  return is_generalized_curvature(d, zt);
}

Dependence linear_dependence_check(const TensorField& a, const TensorField& e, const Point& at) {
  require_same_chart(a, e, "linear_dependence_check");
  require_sym2(a, "linear_dependence_check");
  require_sym2(e, "linear_dependence_check");
  Evaluator ev(at);
  Real aa = 0;
  Real ee = 0;
  Real ae = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Valued va = ev.evaluate(a[i]);
    Valued ve = ev.evaluate(e[i]);
    const Real x = negligible(va) ? Real(0) : va.value;
    const Real y = negligible(ve) ? Real(0) : ve.value;
    aa += x * x;
    ee += y * y;
    ae += x * y;
  }
  Dependence out;
  if (aa == 0 || ee == 0) {
    out.dependent = true;
    return out;
  }
  const Real trace = aa + ee;
  const Real det = aa * ee - ae * ae;
  Real gap = trace * trace - 4 * det;
  if (gap < 0) gap = 0;
  const Real disc = sqrt(gap);
  const Real largest = (trace + disc) / 2;
  out.dependent = det <= rank_tolerance() * rank_tolerance() * largest * largest;
  if (out.dependent) out.ratio = ae / ee;
  return out;
}

std::optional<std::size_t> first_nonzero(const TensorField& t, ZeroTester& zt) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i].is_zero_literal() && !zt.is_zero(t[i])) return i;
  }
  return std::nullopt;
}

bool is_zero(const TensorField& t, ZeroTester& zt) { return !first_nonzero(t, zt).has_value(); }

std::string index_label(const std::vector<int>& idx) {
  std::string s;
  for (int i : idx) s += std::to_string(i + 1);
  return s;
}

}  // namespace warpcurv

#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpcurv/eval.hpp"
#include "warpcurv/expr.hpp"
#include "warpcurv/parse.hpp"

namespace warpcurv {

class SingularMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TensorMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coordinate patch with its metric. Parameters carry either a fixed
/// test value (lo == hi) or an admissible range to sample from.
struct Chart {
  std::string name;
  std::vector<std::string> coordinates;
  std::vector<std::vector<Expr>> metric;
  std::map<std::string, Interval> parameters;
  /// Per-coordinate sampling intervals; missing entries use [1/3, 2].
  std::map<std::string, Interval> box;

  int dim() const { return static_cast<int>(coordinates.size()); }
  const Expr& g(int i, int j) const { return metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  Symbols symbols() const;
  SampleBox sample_box() const;
  Expr coordinate(int i) const { return Expr::variable(coordinates[static_cast<std::size_t>(i)]); }
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Builds a chart from metric component strings (full n x n, or the upper
/// triangle with lower entries left empty).
ChartPtr make_chart(std::string name, std::vector<std::string> coordinates,
                    const std::vector<std::vector<std::string>>& metric,
                    std::map<std::string, Interval> parameters = {},
                    std::map<std::string, Interval> box = {});
ChartPtr make_chart(std::string name, std::vector<std::string> coordinates,
                    std::vector<std::vector<Expr>> metric,
                    std::map<std::string, Interval> parameters = {},
                    std::map<std::string, Interval> box = {});

/// Checks symmetry, symbol usage and non-degeneracy on the sampling box.
void validate_chart(const Chart& c, ZeroTester& zt);

enum class Symmetry { none, sym2, curvature };

/// Dense component array. `upper` leading indices are contravariant: 0 for
/// (0,k), 1 for the (1,3) operator form, 2 for the inverse metric.
class TensorField {
 public:
  TensorField() = default;
  TensorField(ChartPtr chart, int rank, int upper = 0, Symmetry symmetry = Symmetry::none);

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return n_; }
  int rank() const { return rank_; }
  int upper() const { return upper_; }
  Symmetry symmetry() const { return symmetry_; }
  void set_symmetry(Symmetry s) { symmetry_ = s; }
  std::size_t size() const { return data_.size(); }

  Expr& operator[](std::size_t flat) { return data_[flat]; }
  const Expr& operator[](std::size_t flat) const { return data_[flat]; }

  template <class... I>
  Expr& operator()(I... idx) {
    return data_[index({static_cast<int>(idx)...})];
  }
  template <class... I>
  const Expr& operator()(I... idx) const {
    return data_[index({static_cast<int>(idx)...})];
  }

  std::size_t index(std::initializer_list<int> idx) const;
  std::size_t index(const int* idx) const;
  /// Multi-index of a flat position.
  std::vector<int> unflatten(std::size_t flat) const;

  const std::vector<Expr>& data() const { return data_; }

 private:
  ChartPtr chart_;
  int n_ = 0;
  int rank_ = 0;
  int upper_ = 0;
  Symmetry symmetry_ = Symmetry::none;
  std::vector<Expr> data_;
};

void require_same_chart(const TensorField& a, const TensorField& b, const char* what);

TensorField operator+(const TensorField& a, const TensorField& b);
TensorField operator-(const TensorField& a, const TensorField& b);
TensorField operator*(const Expr& s, const TensorField& t);

/// g_ij as a sym2 tensor.
TensorField metric_tensor(const ChartPtr& c);

enum class InverseMethod { automatic, cofactor, lu };

Expr metric_determinant(const Chart& c);
/// g^ij (valence (2,0)). Throws SingularMetric when det g (or an LU pivot)
/// vanishes at a sample point.
TensorField metric_inverse(const ChartPtr& c, ZeroTester& zt,
                           InverseMethod method = InverseMethod::automatic);
TensorField metric_inverse(const ChartPtr& c, InverseMethod method = InverseMethod::automatic);

/// (A∧E)_ijkl = A_il E_jk + A_jk E_il - A_ik E_jl - A_jl E_ik.
TensorField kulkarni_nomizu(const TensorField& a, const TensorField& e);
/// G_ijkl = g_il g_jk - g_ik g_jl, i.e. half of g∧g.
TensorField gaussian(const ChartPtr& c);

/// D^l_ijk = g^lm D_ijkm, stored with index order [l][i][j][k].
TensorField raise_first(const TensorField& d, const TensorField& ginv);
/// Inverse of raise_first: D_ijkm = g_ml D^l_ijk.
TensorField lower(const TensorField& up, const TensorField& g);

struct CurvatureSymmetryDefect {
  std::string rule;  // "antisymmetry", "pair", "bianchi"
  std::array<int, 4> index;
};

/// First-pair antisymmetry, pair exchange and first Bianchi under the zero
/// test; returns the first violated rule, if any.
std::optional<CurvatureSymmetryDefect> curvature_symmetry_defect(const TensorField& d,
                                                                 ZeroTester& zt);
bool is_generalized_curvature(const TensorField& d, ZeroTester& zt);
bool is_generalized_curvature(const TensorField& d);

struct Dependence {
  bool dependent = false;
  std::optional<Real> ratio;  // A = ratio * E, when both are nonzero
};

/// Rank test of the 2 x n^2 matrix of flattened components at one point.
Dependence linear_dependence_check(const TensorField& a, const TensorField& e, const Point& at);

inline const Real& rank_tolerance() {
  static const Real t("1e-20");
  return t;
}

/// Index of the first component that is not identically zero.
std::optional<std::size_t> first_nonzero(const TensorField& t, ZeroTester& zt);
bool is_zero(const TensorField& t, ZeroTester& zt);

/// Renders a multi-index as 1-based digits, e.g. {0,1,1,0} -> "1221".
std::string index_label(const std::vector<int>& idx);

}  // namespace warpcurv

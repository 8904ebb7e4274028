#pragma once

// Pseudosymmetric-type curvature conditions: a catalog of named identities
// D·H = Σ L_i Q(A_i,H), checked against closed-form candidate scalars, and a
// pointwise least-squares fit of R·R = L1 Q(g,R) + L2 Q(S,R).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warpcurv/actions.hpp"
#include "warpcurv/curvature.hpp"

namespace warpcurv {

class UnknownCondition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingScalar : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CatalogEntry {
  std::string name;       // e.g. "R.R=L1 Q(g,R)"
  std::string structure;  // e.g. "pseudosymmetric"
  std::vector<std::string> scalars;
  /// Points where this tensor vanishes are outside the defining set.
  std::string qualifier;  // "", "Q(g,R)", "C", "S-k/n g", "Q(g,P)", "R-k/(n(n-1)) G"
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);

using Scalars = std::map<std::string, Expr>;

struct IdentityVerdict {
  std::string name;
  std::string structure;
  bool holds = false;
  /// The identity has scalar parameters and holds with the supplied closed forms.
  bool candidates_confirmed = false;
  int checked_points = 0;
  int excluded_points = 0;
  /// First failing component as a 1-based index label.
  std::string failure;
};

struct CheckOptions {
  int points = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  ProjectiveCoefficient projective = ProjectiveCoefficient::n_minus_2;
};

/// Builds both sides with the action operators and tests the difference at
/// sample points of the chart box. Points outside the defining set are
/// skipped and counted.
IdentityVerdict check_identity(const std::string& name, const CurvatureBundle& b, const Scalars& candidates,
                               const CheckOptions& opt = {});

/// Defect tensor lhs - rhs of a catalog identity (no defining-set filter).
TensorField identity_defect(const std::string& name, const CurvatureBundle& b, const Scalars& candidates,
                            ProjectiveCoefficient pc = ProjectiveCoefficient::n_minus_2);

/// S - (κ/n) g ≡ 0.
bool einstein_check(const CurvatureBundle& b);

struct PointFit {
  Point point;
  Real l1 = 0;
  Real l2 = 0;
  Real residual = 0;
  int rank = 0;
  /// Basis of {(L1,L2) : L1 Q(g,R) + L2 Q(S,R) = 0} at the point.
  std::vector<std::pair<Real, Real>> nullspace;
  /// R·R, Q(g,R) and Q(S,R) all vanish here.
  bool trivial = false;
  /// Residual negligible relative to the data.
  bool consistent = true;
};

struct ConditionReport {
  std::vector<PointFit> fits;
  int skipped_points = 0;  // domain violations
  std::map<std::string, IdentityVerdict> verdicts;
  bool all_trivial() const;
  bool consistent() const;  // every residual negligible
};

/// Sample points of the chart box that are in every component's domain.
std::vector<Point> fit_points(const CurvatureBundle& b, int count = kDefaultTrials, std::uint64_t seed = kDefaultSeed);

/// Needs at least 5 points.
ConditionReport fit_pseudosymmetry(const CurvatureBundle& b, const std::vector<Point>& points);
ConditionReport fit_pseudosymmetry(const CurvatureBundle& b, const PseudosymmetryTensors& t,
                                   const std::vector<Point>& points);

struct ConstantType {
  bool constant = false;
  /// No point had a nonzero design matrix.
  bool degenerate = false;
  Real l1 = 0;
  Real l2 = 0;
};
/// Constant type when the minimal-norm (L1, L2) agrees at every non-trivial
/// point within 1e-20 relative.
ConstantType constant_type_check(const ConditionReport& r);

}  // namespace warpcurv

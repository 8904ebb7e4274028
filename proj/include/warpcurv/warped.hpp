#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warpcurv/actions.hpp"
#include "warpcurv/curvature.hpp"

namespace warpcurv {

/// Base chart (dimension p), fiber chart (dimension n-p) and warping
/// function f over base coordinates and parameters.
struct WarpedSpec {
  std::string name;
  ChartPtr base;
  ChartPtr fiber;
  Expr warping;
};

class WarpedSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fiber chart with its coordinates renamed x{p+1}..x{n}. Returns the
/// renaming (old -> new) through `renaming` when given.
ChartPtr relabel_fiber(const WarpedSpec& spec, std::map<std::string, std::string>* renaming = nullptr);

/// Block metric g_ab = ḡ_ab, g_αβ = f g̃_αβ, mixed entries 0, on the
/// relabeled coordinates. Checks name collisions and f > 0 on the box.
ChartPtr assemble_product(const WarpedSpec& spec);

/// Base quantities built from the Hessian of f.
struct WarpedAux {
  std::vector<Expr> grad;  // f_a
  TensorField hessian;     // f_{a,b}
  TensorField t;           // T_ab = (f_{a,b} - f_a f_b / (2f)) / (2f)
  Expr trace_t;            // ḡ^ab T_ab
  Expr delta;              // ḡ^ab f_a f_b / (4 f^2)
  Expr omega;              // -f((n-p-1)Δ + tr T)
  TensorField t_squared;   // T^t_a T_ts
  TensorField t_raised;    // T^t_s = ḡ^tb T_bs, stored [t][s]
};

WarpedAux auxiliaries(const CurvatureBundle& base, const Expr& f, int n);

/// Index pattern classes of the six-index tensors after canonicalization by
/// the curvature symmetries of the first four slots and antisymmetry of the
/// last pair ('b' base, 'f' fiber).
enum class BlockPattern { zero, bbbb_bb, bfbf_bb, bbbf_bf, bfff_bf, bfbf_ff, ffff_ff };
const char* to_string(BlockPattern p);

enum class ActionKind { rr, qgr, qsr };
const char* to_string(ActionKind k);

/// How the all-base Q(S,R) block is formed. `verbatim` keeps the printed
/// Q(S̄,R̄) - (n-p)Q(S̄,R̄); `repaired` uses Q(S̄,R̄) - (n-p)Q(T,R̄).
enum class QsrBaseBlock { repaired, verbatim };

struct Canonical6 {
  BlockPattern pattern = BlockPattern::zero;
  std::array<int, 6> index{};
  int sign = 0;
};
Canonical6 canonicalize6(const int* idx, int p);

/// A warped product with its base, fiber and product data. All block
/// formulas are evaluated internally with the geometric orientation and
/// returned in the orientation of the bundles.
class WarpedModel {
 public:
  WarpedModel(WarpedSpec spec, Orientation o = kDefaultOrientation, int trials = kDefaultTrials,
              std::uint64_t seed = kDefaultSeed);

  const WarpedSpec& spec() const { return spec_; }
  const ChartPtr& product() const { return product_; }
  const CurvatureBundle& base() const { return base_; }
  const CurvatureBundle& fiber() const { return fiber_; }
  const WarpedAux& aux() const { return aux_; }
  const Expr& f() const { return f_; }
  int p() const { return p_; }
  int n() const { return n_; }
  Orientation orientation() const { return orientation_; }
  ZeroTester& tester() const { return *tester_; }
  ZeroTester& base_tester() const { return *base_.tester; }
  ZeroTester& fiber_tester() const { return *fiber_.tester; }
  const std::map<std::string, std::string>& fiber_renaming() const { return renaming_; }

  Expr riemann_block(const int* idx) const;
  Expr ricci_block(int i, int j) const;
  Expr scalar_block() const;
  Expr action_block(ActionKind k, const int* idx, QsrBaseBlock variant = QsrBaseBlock::repaired) const;

  TensorField assemble_riemann() const;
  TensorField assemble_ricci() const;
  TensorField assemble_action(ActionKind k, QsrBaseBlock variant = QsrBaseBlock::repaired) const;

  /// Geometric-orientation ingredients (ε·R̄, ε·S̄, ...), exposed for tests.
  struct Geometric {
    TensorField rb, sb, rf, sf, gf_gauss;
    Expr kb, kf;
    TensorField rr_b, qgr_b, qsr_b, qtr_b, rt_b, qgt_b, qst_b;
    TensorField rr_f, qgr_f, qsr_f, qsg_f, qgs_f;
  };
  const Geometric& geometric() const { return geo_; }

 private:
  Expr geometric_action(ActionKind k, const Canonical6& c, QsrBaseBlock variant) const;
  Expr geometric_riemann(const int* idx) const;

  WarpedSpec spec_;
  Orientation orientation_;
  ChartPtr product_;
  CurvatureBundle base_;
  CurvatureBundle fiber_;
  WarpedAux aux_;
  Expr f_;
  int p_ = 0;
  int n_ = 0;
  std::map<std::string, std::string> renaming_;
  std::shared_ptr<ZeroTester> tester_;
  Geometric geo_;
};

struct TensorComparison {
  std::string tensor;
  bool equal = true;
  std::size_t checked = 0;
  /// Mismatching components as 1-based labels with their block pattern.
  std::vector<std::pair<std::string, std::string>> mismatches;
};

struct OracleReport {
  std::vector<TensorComparison> tensors;
  bool scalar_equal = true;
  bool all_equal() const;
};

/// Compares every block formula with the direct computation on the
/// assembled chart, componentwise.
OracleReport oracle_equivalence(const WarpedModel& m, QsrBaseBlock variant = QsrBaseBlock::repaired);

struct ConditionVerdict {
  std::string name;
  std::string statement;
  bool holds = false;
  std::string detail;
};

struct CriterionVerdict {
  std::vector<ConditionVerdict> conditions;  // I..V then the corollary
  bool all_hold() const;
  const ConditionVerdict& operator[](const std::string& name) const;
};

/// Conditions (I)-(V) for R·R = L1 Q(g,R) + L2 Q(S,R), with L1, L2 over base
/// coordinates and parameters, plus R̄·T = L1 Q(ḡ,T) + L2 Q(S̄,T).
CriterionVerdict verify_criterion_conditions(const WarpedModel& m, const Expr& l1, const Expr& l2);

/// Direct check of R·R = L1 Q(g,R) + L2 Q(S,R) on the assembled chart.
bool direct_pseudosymmetry_check(const WarpedModel& m, const Expr& l1, const Expr& l2,
                                 std::string* first_failure = nullptr);

struct TrichotomyPoint {
  Point point;
  std::vector<std::string> labels;  // subset of {"base-flat", "T = L1 g", "fiber-Einstein"}, or {"none"}
};
std::vector<TrichotomyPoint> trichotomy_report(const WarpedModel& m, const Expr& l1);

inline constexpr const char* kLabelBaseFlat = "base-flat";
inline constexpr const char* kLabelTProportional = "T = L1 g";
inline constexpr const char* kLabelFiberEinstein = "fiber-Einstein";

struct DichotomyResult {
  bool base_flat = false;
  bool fiber_einstein = false;
  std::optional<bool> conditions_hold;
  bool consistency_violation = false;
};

/// Requires L2 nonzero at every sample point (throws std::domain_error
/// otherwise). When L1 is given, also runs the criterion conditions and flags a
/// consistency violation if they hold while neither branch does.
DichotomyResult dichotomy_check(const WarpedModel& m, const Expr& l2, const std::optional<Expr>& l1 = std::nullopt);

/// Factor-wise test of a product of a base factor and a fiber factor:
/// zero iff either factor vanishes identically on its own chart.
struct FactorTest {
  bool base_factor_zero = false;
  bool fiber_factor_zero = false;
  bool product_zero() const { return base_factor_zero || fiber_factor_zero; }
};
FactorTest factor_test(const WarpedModel& m, std::span<const Expr> base_factor, std::span<const Expr> fiber_factor);

}  // namespace warpcurv

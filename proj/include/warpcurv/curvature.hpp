#pragma once

#include <memory>
#include <optional>

#include "warpcurv/tensor.hpp"

namespace warpcurv {

/// Lowering sign of the Riemann tensor relative to
/// R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z and R_ijkl = g(R(∂i,∂j)∂k, ∂l).
/// `reversed` is the convention of the reference examples (on the round
/// sphere R_1212 > 0 and κ < 0) and is the default everywhere.
enum class Orientation { geometric = 1, reversed = -1 };
inline constexpr Orientation kDefaultOrientation = Orientation::reversed;

inline int sign(Orientation o) { return static_cast<int>(o); }
const char* to_string(Orientation o);

/// Coefficient c in P_ijkl = R_ijkl - c(S_jk g_il - S_ik g_jl).
enum class ProjectiveCoefficient { n_minus_2, n_minus_1 };
const char* to_string(ProjectiveCoefficient c);

struct CurvatureBundle {
  ChartPtr chart;
  Orientation orientation = kDefaultOrientation;
  TensorField g;
  TensorField ginv;
  /// Γ^k_ij stored as [k][i][j].
  TensorField gamma;
  TensorField riemann;
  TensorField ricci;
  Expr scalar;
  std::shared_ptr<ZeroTester> tester;

  int dim() const { return chart->dim(); }

  const TensorField& gaussian() const;
  const TensorField& conformal() const;
  const TensorField& concircular() const;
  const TensorField& conharmonic() const;
  const TensorField& projective(ProjectiveCoefficient c = ProjectiveCoefficient::n_minus_2) const;

 private:
  mutable std::optional<TensorField> gaussian_, conformal_, concircular_, conharmonic_;
  mutable std::optional<TensorField> projective_[2];
};

TensorField christoffel(const ChartPtr& c, const TensorField& ginv);
/// Riemann (0,4) from Christoffel symbols, lowered with the given orientation.
TensorField riemann(const ChartPtr& c, const TensorField& gamma, Orientation o = kDefaultOrientation);
/// S_jk = g^il R_ijkl.
TensorField ricci(const TensorField& r, const TensorField& ginv);
/// κ = g^jk S_jk.
Expr scalar_curvature(const TensorField& s, const TensorField& ginv);

/// Full pipeline: validates the chart, then computes g^-1, Γ, R, S and κ.
CurvatureBundle compute_curvature(const ChartPtr& c, Orientation o = kDefaultOrientation,
                                  int trials = kDefaultTrials, std::uint64_t seed = kDefaultSeed);

struct DerivedTensors {
  TensorField conformal;
  TensorField concircular;
  TensorField conharmonic;
  TensorField projective;
};
DerivedTensors derived_tensors(const CurvatureBundle& b,
                               ProjectiveCoefficient c = ProjectiveCoefficient::n_minus_2);

/// φ_{a,b} = ∂a∂b φ - Γ^c_ab ∂c φ.
TensorField covariant_hessian(const ChartPtr& c, const TensorField& gamma, const Expr& phi);

}  // namespace warpcurv

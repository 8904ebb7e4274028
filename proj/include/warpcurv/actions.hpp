#pragma once

#include <optional>
#include <vector>

#include "warpcurv/curvature.hpp"
#include "warpcurv/tensor.hpp"

namespace warpcurv {

/// (D·H)_{i1..ik u v} = -Σ_m D^t_{u v i_m} H_{i1..t..ik}, with D^t_{uvi} =
/// g^ts D_{uvis}. H must be (0,2) or (0,4). D needs no symmetries; when it
/// is antisymmetric in its first pair only u < v is computed.
TensorField derivation_action(const TensorField& d, const TensorField& h, const TensorField& ginv);
/// Same, with D already raised by raise_first.
TensorField derivation_action_raised(const TensorField& d_up, const TensorField& h);

/// Q(A,H)_{i1..ik u v} = Σ_m [A_{u i_m} H_{..v..} - A_{v i_m} H_{..u..}].
TensorField tachibana(const TensorField& a, const TensorField& h);

/// R·R, Q(g,R) and Q(S,R) of a bundle.
struct PseudosymmetryTensors {
  TensorField rr;
  TensorField qgr;
  TensorField qsr;
};
PseudosymmetryTensors pseudosymmetry_tensors(const CurvatureBundle& b);

using Vector = std::vector<Real>;
struct Plane {
  Vector first;
  Vector second;
};

/// (R·R)(v,w,v,w,x,y) / Q(g,R)(v,w,v,w,x,y) at a point for π1 = span(v,w)
/// and π2 = span(x,y). Empty when the denominator vanishes.
std::optional<Real> deszcz_ratio(const TensorField& rr, const TensorField& qgr, const Point& at,
                                 const Plane& p1, const Plane& p2);
std::optional<Real> deszcz_ratio(const CurvatureBundle& b, const Point& at, const Plane& p1,
                                 const Plane& p2);

}  // namespace warpcurv

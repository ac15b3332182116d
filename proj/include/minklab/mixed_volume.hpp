#pragma once

#include <cmath>
#include <stdexcept>

#include "minklab/curvature.hpp"
#include "minklab/p_mean.hpp"
#include "minklab/wulff.hpp"

namespace minklab {

// V(K) = (1/3) \int u det(r) dx for a smooth convex body given by its support
// field.
inline double volume_from_support(const ScalarField& u) {
  auto c = curvatures_from_support(u);
  double v = 0.0;
  const auto& g = *u.grid;
  for (std::size_t k = 0; k < g.size(); ++k)
    v += g.weights[k] * u.values[k] * c.det_r(k);
  return v / 3.0;
}

// L_p mixed volume V_p(K,L) = (1/3) \int u_L^p u_K^{1-p} det(r_K) dx.
inline double mixed_volume_p(const ScalarField& uK, const ScalarField& uL, double p) {
  if (uK.grid != uL.grid)
    throw std::invalid_argument("mixed_volume_p: fields must share a grid");
  auto c = curvatures_from_support(uK);
  double v = 0.0;
  const auto& g = *uK.grid;
  for (std::size_t k = 0; k < g.size(); ++k)
    v += g.weights[k] * std::pow(uL.values[k], p) * std::pow(uK.values[k], 1.0 - p) * c.det_r(k);
  return v / 3.0;
}

// Pointwise p-mean combination of two bounds on the same direction set.
inline DirectionalBound firey_bound(const DirectionalBound& uK, const DirectionalBound& uL,
                                    double lambda, double p) {
  if (uK.directions.size() != uL.directions.size())
    throw std::invalid_argument("firey_bound: direction sets differ");
  DirectionalBound g;
  g.directions = uK.directions;
  g.bounds.resize(uK.bounds.size());
  for (std::size_t k = 0; k < g.bounds.size(); ++k)
    g.bounds[k] = p_mean(uK.bounds[k], uL.bounds[k], lambda, p);
  return g;
}

inline Polytope firey_combination(const DirectionalBound& uK, const DirectionalBound& uL,
                                  double lambda, double p) {
  return wulff_shape(firey_bound(uK, uL, lambda, p));
}

// One-sided quotient for V_p via the Firey scalar combination K +_p eps L,
// whose bound is (u_K^p + eps u_L^p)^{1/p}:
//   V_p(K,L) ~ (p/3) [V(K +_p eps L) - V(K)] / eps.
// Both volumes use the same direction set so discretisation bias cancels.
inline double mixed_volume_p_limit_oracle(const ScalarField& uK, const ScalarField& uL, double p,
                                          double eps) {
  if (p == 0.0) throw std::domain_error("mixed_volume_p_limit_oracle: p must be nonzero");
  if (uK.grid != uL.grid)
    throw std::invalid_argument("mixed_volume_p_limit_oracle: fields must share a grid");
  DirectionalBound base = directional_bound(uK);
  DirectionalBound comb = base;
  for (std::size_t k = 0; k < comb.bounds.size(); ++k)
    comb.bounds[k] =
        std::pow(std::pow(uK.values[k], p) + eps * std::pow(uL.values[k], p), 1.0 / p);
  const double v0 = polytope_volume(wulff_shape(base));
  const double v1 = polytope_volume(wulff_shape(comb));
  return (p / 3.0) * (v1 - v0) / eps;
}

// Generic Wulff-path gap V((1-lambda) K +_p lambda L) - V(K)^{1-lambda} V(L)^lambda.
inline double bmf_gap(const DirectionalBound& uK, const DirectionalBound& uL, double lambda,
                      double p) {
  const double vK = polytope_volume(wulff_shape(uK));
  const double vL = polytope_volume(wulff_shape(uL));
  const double vC = polytope_volume(firey_combination(uK, uL, lambda, p));
  return vC - std::pow(vK, 1.0 - lambda) * std::pow(vL, lambda);
}

}  // namespace minklab

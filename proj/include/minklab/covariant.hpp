#pragma once

#include "minklab/derivatives.hpp"

namespace minklab {

// Per-node symmetric 2x2 matrix field in the orthonormal frame
// (e_theta, e_phi/sin(theta)).
struct HessianField {
  GridPtr grid;
  std::vector<double> h11, h12, h22;

  explicit HessianField(GridPtr g)
      : grid(std::move(g)), h11(grid->size()), h12(grid->size()), h22(grid->size()) {}

  Sym2 at(std::size_t k) const { return {h11[k], h12[k], h22[k]}; }
};

// Covariant Hessian u_{;ij} of a scalar on S^2 in the orthonormal frame:
//   u_{;tt} = u_tt
//   u_{;tp} = (u_tp - cot(theta) u_p) / sin(theta)
//   u_{;pp} = u_pp / sin^2(theta) + cot(theta) u_t
inline HessianField covariant_hessian(const ScalarField& u) {
  const SphereGrid& g = *u.grid;
  HessianField out(u.grid);
  const ScalarField ut = d_theta(u, Parity::Even);
  const ScalarField up = d_phi(u);
  const ScalarField utt = d2_theta(u, Parity::Even);
  const ScalarField upp = d2_phi(u);
  const ScalarField utp = d_theta(up, Parity::Even);  // u_phi continues evenly across the poles
  for (int i = 0; i < g.n_theta; ++i) {
    const double st = g.sin_theta(i);
    const double ct = g.cot_theta(i);
    for (int j = 0; j < g.n_phi; ++j) {
      const std::size_t k = g.idx(i, j);
      out.h11[k] = utt.values[k];
      out.h12[k] = (utp.values[k] - ct * up.values[k]) / st;
      out.h22[k] = upp.values[k] / (st * st) + ct * ut.values[k];
    }
  }
  return out;
}

// Tangential gradient in the same frame; component 1 along e_theta,
// component 2 along e_phi/sin(theta).
struct FrameGradient {
  GridPtr grid;
  std::vector<double> g1, g2;
};

inline FrameGradient frame_gradient(const ScalarField& u) {
  const SphereGrid& g = *u.grid;
  FrameGradient out{u.grid, {}, {}};
  out.g1.resize(g.size());
  out.g2.resize(g.size());
  const ScalarField ut = d_theta(u, Parity::Even);
  const ScalarField up = d_phi(u);
  for (int i = 0; i < g.n_theta; ++i) {
    const double st = g.sin_theta(i);
    for (int j = 0; j < g.n_phi; ++j) {
      const std::size_t k = g.idx(i, j);
      out.g1[k] = ut.values[k];
      out.g2[k] = up.values[k] / st;
    }
  }
  return out;
}

}  // namespace minklab

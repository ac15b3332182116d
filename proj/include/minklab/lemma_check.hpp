#pragma once

#include <array>
#include <cmath>

#include "minklab/curvature.hpp"
#include "minklab/derivatives.hpp"

namespace minklab {

struct LemmaReport {
  double defect_220;  // max | grad_i u - h_il <grad_l X, X> |
  double defect_221;  // max | grad_j grad_i u - (<grad h_ij, X> + h_ij - u h_il h_jl) |
};

// Checks the support-function identities
//   (2.20)  grad_i u = h_il <grad_l X, X>
//   (2.21)  grad_j grad_i u = <grad h_ij, X> + h_ij - u h_il h_jl
// on the grid.  Surface covariant derivatives are pulled back through the
// Gauss map: the surface frame t_k coincides with the sphere frame e_k, a
// surface derivative of a scalar is grad_k s = h_km D_m s with D the sphere
// frame derivative, and the only connection terms are the sphere's
// <D_phihat e_theta, e_phihat> = cot(theta) pair.  The right-hand side of
// (2.20) uses a finite-difference Jacobian of the embedded positions, so the
// two sides are computed along genuinely different paths.
inline LemmaReport verify_lemma_2_4(const ScalarField& u) {
  const GridPtr grid = u.grid;
  const SphereGrid& g = *grid;
  auto c = curvatures_from_support(u);
  auto X = embed_surface(u);

  // sphere frame derivatives of a per-node scalar array
  auto D1 = [&](const ScalarField& f, Parity par) { return d_theta(f, par); };
  auto D2 = [&](const ScalarField& f) {
    ScalarField out = d_phi(f);
    for (int i = 0; i < g.n_theta; ++i) {
      const double inv = 1.0 / g.sin_theta(i);
      for (int j = 0; j < g.n_phi; ++j) out(i, j) *= inv;
    }
    return out;
  };

  // Cartesian components of X continue evenly across the poles
  std::array<ScalarField, 3> Xc{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    Xc[0].values[k] = X[k].x;
    Xc[1].values[k] = X[k].y;
    Xc[2].values[k] = X[k].z;
  }
  std::array<ScalarField, 3> dX1{D1(Xc[0], Parity::Even), D1(Xc[1], Parity::Even),
                                 D1(Xc[2], Parity::Even)};
  std::array<ScalarField, 3> dX2{D2(Xc[0]), D2(Xc[1]), D2(Xc[2])};

  ScalarField du1 = D1(u, Parity::Even), du2 = D2(u);

  // second fundamental form components h_ij = (r^{-1})_ij, all even
  ScalarField h11(grid), h12(grid), h22(grid);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Sym2 h = c.h(k);
    h11.values[k] = h.a11;
    h12.values[k] = h.a12;
    h22.values[k] = h.a22;
  }
  ScalarField dh11_1 = D1(h11, Parity::Even), dh11_2 = D2(h11);
  ScalarField dh12_1 = D1(h12, Parity::Even), dh12_2 = D2(h12);
  ScalarField dh22_1 = D1(h22, Parity::Even), dh22_2 = D2(h22);

  // surface gradient of u as a frame vector field (odd components)
  ScalarField su1(grid), su2(grid);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Sym2 h = c.h(k);
    su1.values[k] = h.a11 * du1.values[k] + h.a12 * du2.values[k];
    su2.values[k] = h.a12 * du1.values[k] + h.a22 * du2.values[k];
  }
  ScalarField dsu1_1 = D1(su1, Parity::Odd), dsu1_2 = D2(su1);
  ScalarField dsu2_1 = D1(su2, Parity::Odd), dsu2_2 = D2(su2);

  LemmaReport rep{0.0, 0.0};
  for (int i = 0; i < g.n_theta; ++i) {
    const double cot = g.cot_theta(i);
    for (int j = 0; j < g.n_phi; ++j) {
      const std::size_t k = g.idx(i, j);
      const Sym2 h = c.h(k);
      const double hm[2][2] = {{h.a11, h.a12}, {h.a12, h.a22}};
      const Vec3 Xk = X[k];

      // (2.20): FD tangent frame t_l = h_lm D_m X
      const Vec3 dx[2] = {{dX1[0].values[k], dX1[1].values[k], dX1[2].values[k]},
                          {dX2[0].values[k], dX2[1].values[k], dX2[2].values[k]}};
      double txX[2];  // <t_l, X>
      for (int l = 0; l < 2; ++l)
        txX[l] = dot(hm[l][0] * dx[0] + hm[l][1] * dx[1], Xk);
      const double du[2] = {du1.values[k], du2.values[k]};
      for (int a = 0; a < 2; ++a) {
        const double lhs = hm[a][0] * du[0] + hm[a][1] * du[1];
        const double rhs = hm[a][0] * txX[0] + hm[a][1] * txX[1];
        rep.defect_220 = std::max(rep.defect_220, std::fabs(lhs - rhs));
      }

      // connection: omega_12(t_k) = h_k2 cot(theta), omega_21 = -omega_12
      const double om12[2] = {hm[0][1] * cot, hm[1][1] * cot};

      // grad_j grad_i u = t_j(grad_i u) - omega_il(t_j) grad_l u
      const double dsu[2][2] = {{dsu1_1.values[k], dsu1_2.values[k]},
                                {dsu2_1.values[k], dsu2_2.values[k]}};
      const double su[2] = {su1.values[k], su2.values[k]};
      double hess_u[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double v = hm[b][0] * dsu[a][0] + hm[b][1] * dsu[a][1];  // t_b(grad_a u)
          if (a == 0) v -= om12[b] * su[1];
          else v += om12[b] * su[0];
          hess_u[a][b] = v;
        }

      // grad_k h_ij = t_k(h_ij) - omega_il(t_k) h_lj - omega_jl(t_k) h_il
      const double dh[2][2][2] = {  // dh[i][j][m] = D_m h_ij
          {{dh11_1.values[k], dh11_2.values[k]}, {dh12_1.values[k], dh12_2.values[k]}},
          {{dh12_1.values[k], dh12_2.values[k]}, {dh22_1.values[k], dh22_2.values[k]}}};
      auto grad_h = [&](int a, int b, int m) {
        double v = hm[m][0] * dh[a][b][0] + hm[m][1] * dh[a][b][1];
        // omega_al(t_m) h_lb: only omega_12/omega_21 nonzero
        v -= (a == 0 ? om12[m] * hm[1][b] : -om12[m] * hm[0][b]);
        v -= (b == 0 ? om12[m] * hm[a][1] : -om12[m] * hm[a][0]);
        return v;
      };

      const double uk = u.values[k];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double hh = hm[a][0] * hm[b][0] + hm[a][1] * hm[b][1];
          const double rhs = grad_h(a, b, 0) * txX[0] + grad_h(a, b, 1) * txX[1] +
                             hm[a][b] - uk * hh;
          rep.defect_221 = std::max(rep.defect_221, std::fabs(hess_u[a][b] - rhs));
        }
    }
  }
  return rep;
}

}  // namespace minklab

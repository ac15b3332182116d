#pragma once

#include <stdexcept>
#include <string>

#include "minklab/covariant.hpp"

namespace minklab {

struct NonConvexError : std::runtime_error {
  int i, j;
  NonConvexError(int i_, int j_)
      : std::runtime_error("radii matrix not positive definite at node (" + std::to_string(i_) +
                           "," + std::to_string(j_) + ")"),
        i(i_), j(j_) {}
};

// Curvature data of the convex body with support function u: the radii
// matrix r = u_{;ij} + u*delta_ij, principal curvatures lam1 >= lam2
// (reciprocals of the eigenvalues of r), H = lam1+lam2, K = lam1*lam2.
struct CurvatureField {
  GridPtr grid;
  std::vector<double> r11, r12, r22;  // radii matrix
  std::vector<double> lam1, lam2, H, K;

  explicit CurvatureField(GridPtr g)
      : grid(std::move(g)),
        r11(grid->size()), r12(grid->size()), r22(grid->size()),
        lam1(grid->size()), lam2(grid->size()), H(grid->size()), K(grid->size()) {}

  Sym2 r(std::size_t k) const { return {r11[k], r12[k], r22[k]}; }
  double det_r(std::size_t k) const { return r11[k] * r22[k] - r12[k] * r12[k]; }
  // inverse of r = second fundamental form components in the same frame
  Sym2 h(std::size_t k) const { return r(k).inverse(); }

  double min_pinching_ratio() const {
    double m = 1.0;
    for (std::size_t k = 0; k < lam1.size(); ++k) m = std::min(m, lam2[k] / lam1[k]);
    return m;
  }
};

inline CurvatureField curvatures_from_radii(GridPtr grid, const HessianField& hess,
                                            const ScalarField& u) {
  CurvatureField out(std::move(grid));
  const SphereGrid& g = *out.grid;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Sym2 r{hess.h11[k] + u.values[k], hess.h12[k], hess.h22[k] + u.values[k]};
    const auto [rho1, rho2] = r.eigenvalues();
    if (rho1 <= 0.0)
      throw NonConvexError(static_cast<int>(k) / g.n_phi, static_cast<int>(k) % g.n_phi);
    out.r11[k] = r.a11;
    out.r12[k] = r.a12;
    out.r22[k] = r.a22;
    out.lam1[k] = 1.0 / rho1;
    out.lam2[k] = 1.0 / rho2;
    out.H[k] = out.lam1[k] + out.lam2[k];
    out.K[k] = 1.0 / (rho1 * rho2);
  }
  return out;
}

inline CurvatureField curvatures_from_support(const ScalarField& u) {
  return curvatures_from_radii(u.grid, covariant_hessian(u), u);
}

// Position vectors of the boundary points with outer normal at each node:
// X = u*x + grad_{S^2} u.  By construction <X, x> = u exactly.
inline std::vector<Vec3> embed_surface(const ScalarField& u) {
  const SphereGrid& g = *u.grid;
  curvatures_from_support(u);  // convexity gate; throws NonConvexError otherwise
  const FrameGradient grad = frame_gradient(u);
  std::vector<Vec3> X(g.size());
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      const std::size_t k = g.idx(i, j);
      X[k] = u.values[k] * g.nodes[k] + grad.g1[k] * g.e_theta(i, j) + grad.g2[k] * g.e_phi(i, j);
    }
  return X;
}

}  // namespace minklab

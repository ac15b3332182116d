#pragma once

#include <cmath>
#include <stdexcept>

#include "minklab/curvature.hpp"
#include "minklab/scalar_field.hpp"

namespace minklab {

struct DegenerateT : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One evaluation point of the maximum-principle algebra: principal curvatures
// lam1 > lam2 > 0, the auxiliary exponent alpha, and q = 1-p.
struct IdentitySample {
  double lam1, lam2, alpha, q;
  // gradient slots (grad_1 h11, grad_2 h22, grad_m h12) for the det form
  double g111 = 0.0, g222 = 0.0, g12 = 0.0;

  double H() const { return lam1 + lam2; }
  double K() const { return lam1 * lam2; }
  // denominators of t: 2K -/+ alpha lam_i (lam1 - lam2)
  double den1() const { return 2.0 * K() - alpha * lam1 * (lam1 - lam2); }
  double den2() const { return 2.0 * K() + alpha * lam2 * (lam1 - lam2); }
};

// t = [2K - alpha lam1 (lam1-lam2)] / [2K + alpha lam2 (lam1-lam2)]
inline double t_ratio(const IdentitySample& s) {
  if (!(s.lam1 > s.lam2 && s.lam2 > 0.0))
    throw std::domain_error("t_ratio: need lam1 > lam2 > 0");
  const double d = s.den2();
  if (std::fabs(d) < 1e-14 * s.K()) throw DegenerateT("t_ratio: denominator vanishes");
  return s.den1() / d;
}

// well-definedness flag (2+alpha)K - alpha lam_i^2 > 0, i = 1, 2
inline bool t_well_defined(const IdentitySample& s) {
  return (2.0 + s.alpha) * s.K() - s.alpha * s.lam1 * s.lam1 > 0.0 &&
         (2.0 + s.alpha) * s.K() - s.alpha * s.lam2 * s.lam2 > 0.0;
}

namespace detail {
inline double rel_defect(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-12});
}
}  // namespace detail

// The six t-elimination identities: lhs from t itself, rhs in closed form.
//   1/t - 1/t^2 = -alpha (lam1-lam2) H den2 / den1^2
//   (lam2 + lam1/t)^2 = 4 K^2 H^2 / den1^2
//   (1 + 1/t)^2 = [4K - alpha (lam1-lam2)^2]^2 / den1^2
//   t - t^2 = alpha (lam1-lam2) H den1 / den2^2
//   (lam2 t + lam1)^2 = 4 K^2 H^2 / den2^2
//   (1 + t)^2 = [4K - alpha (lam1-lam2)^2]^2 / den2^2
inline double verify_t_identities(const IdentitySample& s) {
  const double t = t_ratio(s);
  if (std::fabs(t) < 1e-14) throw DegenerateT("verify_t_identities: t vanishes");
  const double H = s.H(), K = s.K(), a = s.alpha, d = s.lam1 - s.lam2;
  const double d1 = s.den1(), d2 = s.den2();
  const double m = 4.0 * K - a * d * d;
  double worst = 0.0;
  auto upd = [&](double lhs, double rhs) { worst = std::max(worst, detail::rel_defect(lhs, rhs)); };
  upd(1.0 / t - 1.0 / (t * t), -a * d * H * d2 / (d1 * d1));
  upd(std::pow(s.lam2 + s.lam1 / t, 2), 4.0 * K * K * H * H / (d1 * d1));
  upd(std::pow(1.0 + 1.0 / t, 2), m * m / (d1 * d1));
  upd(t - t * t, a * d * H * d1 / (d2 * d2));
  upd(std::pow(s.lam2 * t + s.lam1, 2), 4.0 * K * K * H * H / (d2 * d2));
  upd(std::pow(1.0 + t, 2), m * m / (d2 * d2));
  return worst;
}

// compact forms of B1, B2
inline double B1(const IdentitySample& s) {
  const double H = s.H(), K = s.K(), a = s.alpha, q = s.q;
  return 16.0 * (1.0 + a) * (1.0 + a) * K * K +
         H * H * (a * (a - 2.0 / q) * H * H + 4.0 * (1.0 + a - 1.0 / q) * s.lam1 * s.lam1 -
                  4.0 * (1.0 + 2.0 * a) * (1.0 + a - 1.0 / q) * K);
}
inline double B2(const IdentitySample& s) {
  IdentitySample sw = s;
  std::swap(sw.lam1, sw.lam2);
  return B1(sw);
}

// long pre-simplification form of B1 against the compact one
inline double verify_B_expansion(const IdentitySample& s) {
  const double H = s.H(), K = s.K(), a = s.alpha, q = s.q, l1 = s.lam1;
  const double longform =
      2.0 * a * H * H * (2.0 * l1 * l1 - 2.0 * K + a * H * H - 4.0 * a * K) +
      4.0 * H * H * H * (1.0 - 1.0 / q) * l1 - 8.0 * (1.0 - 1.0 / q) * K * H * H -
      2.0 * (a / q + a * a) * H * H * (H * H - 4.0 * K) +
      std::pow(4.0 * (1.0 + a) * K - a * H * H, 2);
  return detail::rel_defect(longform, B1(s));
}

// Second-derivative bilinear form of det on 2x2 symmetric matrices:
//   F^{ij,rs} grad h_ij grad h_rs = 2 (grad h11 grad h22 - |grad h12|^2),
// checked against a central finite difference of det(h + eps dh) in eps, and
// grad K = lam2 grad h11 + lam1 grad h22 for diagonal h = diag(lam1, lam2).
// det is exactly quadratic in eps, so the default step carries no truncation
// error; small steps would only amplify roundoff.
inline double verify_det_second_derivative(const Sym2& h, const Sym2& dh, double fd_eps = 1.0) {
  auto det_at = [&](double e) {
    const Sym2 m{h.a11 + e * dh.a11, h.a12 + e * dh.a12, h.a22 + e * dh.a22};
    return m.det();
  };
  const double second_fd =
      (det_at(fd_eps) - 2.0 * det_at(0.0) + det_at(-fd_eps)) / (fd_eps * fd_eps);
  const double closed = 2.0 * (dh.a11 * dh.a22 - dh.a12 * dh.a12);
  double worst = detail::rel_defect(second_fd, closed);

  // first derivative: for diagonal h = diag(lam1, lam2) this is
  // grad K = lam2 grad h11 + lam1 grad h22
  const double first_fd = (det_at(fd_eps) - det_at(-fd_eps)) / (2.0 * fd_eps);
  const double closed1 = h.a22 * dh.a11 + h.a11 * dh.a22 - 2.0 * h.a12 * dh.a12;
  worst = std::max(worst, detail::rel_defect(first_fd, closed1));
  return worst;
}

// auxiliary function Q = (lam1-lam2)^2 K^alpha = (H^2 - 4K) K^alpha
inline ScalarField aux_Q(const CurvatureField& c, double alpha) {
  ScalarField Q(c.grid);
  for (std::size_t k = 0; k < c.grid->size(); ++k) {
    const double d = c.lam1[k] - c.lam2[k];
    Q.values[k] = d * d * std::pow(c.K[k], alpha);
  }
  return Q;
}

// G = H/u - 2, constant on p = -1 solutions of the constant-curvature problem
struct GMonitor {
  ScalarField G;
  double oscillation;
};
inline GMonitor case2_G_monitor(const ScalarField& u) {
  auto c = curvatures_from_support(u);
  ScalarField G(u.grid);
  for (std::size_t k = 0; k < u.grid->size(); ++k)
    G.values[k] = c.H[k] / u.values[k] - 2.0;
  return {G, G.max() - G.min()};
}

}  // namespace minklab

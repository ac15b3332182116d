#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "minklab/derivatives.hpp"
#include "minklab/fields_init.hpp"
#include "minklab/identities.hpp"
#include "minklab/pinching.hpp"

namespace minklab {

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LinearSolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolverMode { fixed_point, flow, newton };

struct SolverConfig {
  double p = 0.0;
  ScalarField f;   // right-hand side density
  SolverMode mode = SolverMode::newton;
  double omega = 0.3;
  double dt = 0.0;       // 0: auto from grid spacing and q
  double tol = 1e-9;
  int max_iter = 50000;
  ScalarField u0;
  unsigned long seed = 0;

  SolverConfig(ScalarField u0_, ScalarField f_) : f(std::move(f_)), u0(std::move(u0_)) {}
  explicit SolverConfig(ScalarField u0_)
      : f(constant_field(u0_.grid, 1.0)), u0(std::move(u0_)) {}

  double q() const { return 1.0 - p; }
};

struct SolveResult {
  ScalarField u_final;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_trace;
  std::vector<double> q_trace;   // max of aux Q at the case exponent
  std::vector<double> g_trace;   // oscillation of G = H/u - 2
  double wall_time = 0.0;        // seconds
  std::string error;             // nonempty when a step failed
};

// Equation defect det(r) - f u^{p-1} per node.
inline ScalarField residual(const ScalarField& u, const ScalarField& f, double p) {
  auto c = curvatures_from_support(u);
  ScalarField r(u.grid);
  for (std::size_t k = 0; k < u.grid->size(); ++k)
    r.values[k] = c.det_r(k) - f.values[k] * std::pow(u.values[k], p - 1.0);
  return r;
}

// Curvature form of the same defect: the equation says K = u^q / f.
inline ScalarField curvature_defect(const ScalarField& u, const ScalarField& f, double p) {
  auto c = curvatures_from_support(u);
  ScalarField r(u.grid);
  const double q = 1.0 - p;
  for (std::size_t k = 0; k < u.grid->size(); ++k)
    r.values[k] = c.K[k] - std::pow(u.values[k], q) / f.values[k];
  return r;
}

namespace solver_detail {

// The case exponent used for the Q trace: Case I for p <= 0, Case III for
// p in (0,1), and the plain (lam1-lam2)^2 monitor otherwise.
inline double trace_alpha(double p) {
  const double q = 1.0 - p;
  if (p <= 0.0) return 2.0 / q - 2.0;
  if (p < 1.0) return 1.0 / q - 1.0;
  return 0.0;
}

// The equation is homogeneous: if det r = gamma f u^{p-1} with constant
// gamma, then s u solves exactly for s = gamma^{-1/(3-p)}.  The residual of
// the optimally rescaled iterate is the right convergence measure for the
// volume-normalized flow.
struct ScaledResidual {
  double res_inf;
  double scale;
};
inline ScaledResidual scaled_residual(const ScalarField& u, const CurvatureField& c,
                                      const ScalarField& f, double p) {
  const auto& g = *u.grid;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    num += g.weights[k] * c.det_r(k);
    den += g.weights[k] * f.values[k] * std::pow(u.values[k], p - 1.0);
  }
  const double gamma = num / den;
  const double s = std::pow(gamma, -1.0 / (3.0 - p));
  double res = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    res = std::max(res, std::fabs(s * s * c.det_r(k) -
                                  std::pow(s, p - 1.0) * f.values[k] *
                                      std::pow(u.values[k], p - 1.0)));
  return {res, s};
}

inline void reject_degenerate(const CurvatureField& c) {
  const auto e0 = c.r(0).eigenvalues();
  double lo = e0[0], hi = e0[1];
  for (std::size_t k = 1; k < c.grid->size(); ++k) {
    const auto [a, b] = c.r(k).eigenvalues();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  if (lo < 1e-6 * hi)
    throw StepFailure("initial field is degenerate: min radii eigenvalue < 1e-6 max");
}

}  // namespace solver_detail

// u_next = (1-omega) u + omega (f / det r)^{1/q}, halving omega on convexity
// loss.  Linearly unstable for curvature perturbations (modes l >= 2 amplify
// by (1-omega) + omega (l(l+1)-2)/q); retained as specified for radial and
// experimental use.
inline ScalarField fixed_point_step(const ScalarField& u, const SolverConfig& cfg) {
  if (cfg.q() == 0.0) throw std::domain_error("fixed_point_step: q = 0");
  auto c = curvatures_from_support(u);
  double omega = cfg.omega;
  for (int attempt = 0; attempt < 30; ++attempt) {
    ScalarField next(u.grid);
    for (std::size_t k = 0; k < u.grid->size(); ++k) {
      const double target = std::pow(cfg.f.values[k] / c.det_r(k), 1.0 / cfg.q());
      next.values[k] = (1.0 - omega) * u.values[k] + omega * target;
    }
    try {
      curvatures_from_support(next);
      return next;
    } catch (const NonConvexError&) {
      omega *= 0.5;
    }
  }
  throw StepFailure("fixed_point_step: 30 omega halvings could not restore convexity");
}

// Normalized Gauss curvature flow step u_next = u - dt (K^{1/q} f^{-1/q} - c u)
// with c fixing enclosed volume to first order.  The update is stabilized by
// an azimuthal polar filter (drops phi modes unresolvable near the poles,
// lifting the pole CFL penalty) and Steiner recentring (removes the neutrally
// stable translation mode).
inline ScalarField flow_step(const ScalarField& u, const SolverConfig& cfg) {
  if (!(cfg.q() > 0.0)) throw std::domain_error("flow_step: need q > 0 (p < 1)");
  auto c = curvatures_from_support(u);
  const auto& g = *u.grid;
  const double a = 1.0 / cfg.q();
  ScalarField speed(u.grid);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    speed.values[k] = std::pow(c.K[k], a) * std::pow(cfg.f.values[k], -a);
    num += g.weights[k] * speed.values[k] * c.det_r(k);
    den += g.weights[k] * u.values[k] * c.det_r(k);
  }
  const double vol_c = num / den;

  double dt = cfg.dt > 0.0 ? cfg.dt : 0.1 * g.dtheta() * g.dtheta() * std::min(1.0, cfg.q());
  for (int attempt = 0; attempt < 30; ++attempt) {
    ScalarField next(u.grid);
    for (std::size_t k = 0; k < g.size(); ++k)
      next.values[k] = u.values[k] - dt * (speed.values[k] - vol_c * u.values[k]);
    polar_filter(next);
    recenter_steiner(next);
    try {
      curvatures_from_support(next);
      return next;
    } catch (const NonConvexError&) {
      dt *= 0.5;
    }
  }
  throw StepFailure("flow_step: 30 dt halvings could not restore convexity");
}

namespace solver_detail {

// L[v] = tr(cof(r) (hess v + v I)) - (p-1) f u^{p-2} v
inline ScalarField newton_operator(const ScalarField& v, const ScalarField& u,
                                   const CurvatureField& c, const ScalarField& f, double p) {
  auto hv = covariant_hessian(v);
  ScalarField out(v.grid);
  for (std::size_t k = 0; k < v.grid->size(); ++k) {
    const double lv =
        c.r22[k] * (hv.h11[k] + v.values[k]) - 2.0 * c.r12[k] * hv.h12[k] +
        c.r11[k] * (hv.h22[k] + v.values[k]);
    out.values[k] = lv - (p - 1.0) * f.values[k] * std::pow(u.values[k], p - 2.0) * v.values[k];
  }
  return out;
}

inline double dot_field(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.grid->size(); ++k) s += a.values[k] * b.values[k];
  return s;
}

struct DenseLU {
  int n = 0;
  std::vector<double> a;  // row-major, factored in place
  std::vector<int> piv;

  void factor(std::vector<double> m, int n_) {
    n = n_;
    a = std::move(m);
    piv.resize(n);
    for (int col = 0; col < n; ++col) {
      int best = col;
      for (int r = col + 1; r < n; ++r)
        if (std::fabs(a[r * n + col]) > std::fabs(a[best * n + col])) best = r;
      piv[col] = best;
      if (best != col)
        for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[best * n + c]);
      const double d = a[col * n + col];
      for (int r = col + 1; r < n; ++r) {
        const double l = a[r * n + col] / d;
        a[r * n + col] = l;
        for (int c = col + 1; c < n; ++c) a[r * n + c] -= l * a[col * n + c];
      }
    }
  }
  void solve(double* b) const {
    for (int col = 0; col < n; ++col) {
      if (piv[col] != col) std::swap(b[col], b[piv[col]]);
      for (int r = col + 1; r < n; ++r) b[r] -= a[r * n + col] * b[col];
    }
    for (int r = n - 1; r >= 0; --r) {
      for (int c = r + 1; c < n; ++c) b[r] -= a[r * n + c] * b[c];
      b[r] /= a[r * n + r];
    }
  }
};

// Constant-coefficient surrogate of the Newton operator, inverted exactly:
//   L0[v] = c0 (Laplace_{S^2} v + 2 v) + z v
// with c0, z area means of the true coefficients.  Diagonal in the azimuthal
// Fourier index (the antipodal ghost rule only contributes a (-1)^m sign), so
// each mode reduces to a dense theta-line solve factored once per Newton step.
class SpectralPreconditioner {
 public:
  SpectralPreconditioner(const ScalarField& u, const CurvatureField& c, const ScalarField& f,
                         double p) : grid_(u.grid) {
    const auto& g = *grid_;
    const int N = g.n_theta, M = g.n_phi;
    double area = 0.0, rho = 0.0, w0 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      area += g.weights[k];
      rho += g.weights[k] * 0.5 * (c.r11[k] + c.r22[k]);
      w0 += g.weights[k] * (p - 1.0) * f.values[k] * std::pow(u.values[k], p - 2.0);
    }
    const double c0 = rho / area;
    const double z = 2.0 * c0 - w0 / area;

    const double dth = g.dtheta();
    static constexpr double d1c[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    static constexpr double d2c[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    lus_.resize(M);
    for (int m = 0; m < M; ++m) {
      const int meff = m <= M / 2 ? m : m - M;
      const double sgn = (meff % 2 == 0) ? 1.0 : -1.0;
      std::vector<double> A(static_cast<std::size_t>(N) * N, 0.0);
      for (int i = 0; i < N; ++i) {
        const double st = g.sin_theta(i), ct = g.cot_theta(i);
        for (int o = -2; o <= 2; ++o) {
          int ii = i + o;
          double s = 1.0;
          if (ii < 0) {
            ii = -1 - ii;
            s = sgn;
          } else if (ii >= N) {
            ii = 2 * N - 1 - ii;
            s = sgn;
          }
          const double coef = d2c[o + 2] / (12.0 * dth * dth) + ct * d1c[o + 2] / (12.0 * dth);
          A[static_cast<std::size_t>(i) * N + ii] += s * c0 * coef;
        }
        A[static_cast<std::size_t>(i) * N + i] +=
            -c0 * meff * meff / (st * st) + z;
      }
      lus_[m].factor(std::move(A), N);
    }
  }

  ScalarField apply(const ScalarField& y) const {
    const auto& g = *grid_;
    const int N = g.n_theta, M = g.n_phi;
    // naive DFT in phi (grids are modest; cost N M^2)
    std::vector<double> re(static_cast<std::size_t>(M) * N), im(re.size());
    for (int m = 0; m < M; ++m)
      for (int i = 0; i < N; ++i) {
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < M; ++j) {
          const double ang = -2.0 * std::numbers::pi * m * j / M;
          const double v = y.values[g.idx(i, j)];
          sr += v * std::cos(ang);
          si += v * std::sin(ang);
        }
        re[static_cast<std::size_t>(m) * N + i] = sr;
        im[static_cast<std::size_t>(m) * N + i] = si;
      }
    for (int m = 0; m < M; ++m) {
      lus_[m].solve(&re[static_cast<std::size_t>(m) * N]);
      lus_[m].solve(&im[static_cast<std::size_t>(m) * N]);
    }
    ScalarField out(grid_);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < M; ++j) {
        double s = 0.0;
        for (int m = 0; m < M; ++m) {
          const double ang = 2.0 * std::numbers::pi * m * j / M;
          s += re[static_cast<std::size_t>(m) * N + i] * std::cos(ang) -
               im[static_cast<std::size_t>(m) * N + i] * std::sin(ang);
        }
        out.values[g.idx(i, j)] = s / M;
      }
    return out;
  }

 private:
  GridPtr grid_;
  std::vector<DenseLU> lus_;
};

// Unpreconditioned BiCGStab on the matrix-free Newton operator.  The solve
// can stall at a roundoff floor when the right-hand side is already tiny, so
// the best iterate is kept and accepted if it achieved a useful reduction —
// an inexact Newton step still converges.
inline ScalarField bicgstab(const ScalarField& u, const CurvatureField& c, const ScalarField& f,
                            double p, const ScalarField& rhs, double rtol, int max_it) {
  const GridPtr grid = u.grid;
  const SpectralPreconditioner pre(u, c, f, p);
  auto apply_op = [&](const ScalarField& w) {
    return newton_operator(pre.apply(w), u, c, f, p);  // right-preconditioned
  };
  ScalarField x(grid);  // zero start
  ScalarField r = rhs;
  ScalarField rhat = r;
  ScalarField pvec(grid), v(grid);
  ScalarField xbest = x;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double bnorm = std::sqrt(dot_field(rhs, rhs));
  if (bnorm == 0.0) return x;
  double rbest = bnorm;
  for (int it = 0; it < max_it; ++it) {
    const double rho_new = dot_field(rhat, r);
    if (std::fabs(rho_new) < 1e-300) break;
    if (it == 0) {
      pvec = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      for (std::size_t k = 0; k < grid->size(); ++k)
        pvec.values[k] = r.values[k] + beta * (pvec.values[k] - omega * v.values[k]);
    }
    rho = rho_new;
    v = apply_op(pvec);
    alpha = rho / dot_field(rhat, v);
    ScalarField s(grid);
    for (std::size_t k = 0; k < grid->size(); ++k)
      s.values[k] = r.values[k] - alpha * v.values[k];
    ScalarField t = apply_op(s);
    const double tt = dot_field(t, t);
    omega = tt > 0.0 ? dot_field(t, s) / tt : 0.0;
    for (std::size_t k = 0; k < grid->size(); ++k) {
      x.values[k] += alpha * pvec.values[k] + omega * s.values[k];
      r.values[k] = s.values[k] - omega * t.values[k];
    }
    const double rnorm = std::sqrt(dot_field(r, r));
    if (rnorm < rbest) {
      rbest = rnorm;
      xbest = x;
    }
    if (rnorm < rtol * bnorm) return pre.apply(x);
    if (omega == 0.0) break;
  }
  if (rbest < 1e-4 * bnorm) return pre.apply(xbest);
  throw LinearSolveFailure("bicgstab: no convergence within iteration cap");
}

}  // namespace solver_detail

// One damped Newton step: solve L[v] = -residual, backtrack on s in (0,1]
// until u + s v is convex and the residual decreases.
inline ScalarField newton_step(const ScalarField& u, const SolverConfig& cfg) {
  auto c = curvatures_from_support(u);
  ScalarField res(u.grid);
  for (std::size_t k = 0; k < u.grid->size(); ++k)
    res.values[k] =
        c.det_r(k) - cfg.f.values[k] * std::pow(u.values[k], cfg.p - 1.0);
  const double res0 = res.max_abs();
  if (res0 == 0.0) return u;
  ScalarField rhs(u.grid);
  for (std::size_t k = 0; k < u.grid->size(); ++k) rhs.values[k] = -res.values[k];
  ScalarField v = solver_detail::bicgstab(u, c, cfg.f, cfg.p, rhs, 1e-8, 4000);

  double s = 1.0;
  for (int attempt = 0; attempt < 30; ++attempt) {
    ScalarField next(u.grid);
    for (std::size_t k = 0; k < u.grid->size(); ++k)
      next.values[k] = u.values[k] + s * v.values[k];
    try {
      if (residual(next, cfg.f, cfg.p).max_abs() < res0) return next;
    } catch (const NonConvexError&) {
      // fall through to damping
    }
    s *= 0.5;
  }
  throw StepFailure("newton_step: backtracking exhausted");
}

inline SolveResult solve(const SolverConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  SolveResult out{cfg.u0};
  const double alpha_q = solver_detail::trace_alpha(cfg.p);
  try {
    if (!cfg.u0.positive()) throw StepFailure("initial field is not positive");
    solver_detail::reject_degenerate(curvatures_from_support(cfg.u0));

    ScalarField u = cfg.u0;
    for (int it = 0; it < cfg.max_iter; ++it) {
      auto c = curvatures_from_support(u);
      const auto sr = solver_detail::scaled_residual(u, c, cfg.f, cfg.p);
      double res_inf;
      if (cfg.mode == SolverMode::flow) {
        res_inf = sr.res_inf;  // volume-normalized: measure up to the rescale
      } else {
        res_inf = 0.0;
        for (std::size_t k = 0; k < u.grid->size(); ++k)
          res_inf = std::max(res_inf, std::fabs(c.det_r(k) -
                                                cfg.f.values[k] *
                                                    std::pow(u.values[k], cfg.p - 1.0)));
      }
      out.residual_trace.push_back(res_inf);
      out.q_trace.push_back(aux_Q(c, alpha_q).max());
      double gmax = c.H[0] / u.values[0], gmin = gmax;
      for (std::size_t k = 1; k < u.grid->size(); ++k) {
        const double gv = c.H[k] / u.values[k];
        gmax = std::max(gmax, gv);
        gmin = std::min(gmin, gv);
      }
      out.g_trace.push_back(gmax - gmin);
      out.iterations = it;
      if (res_inf <= cfg.tol) {
        if (cfg.mode == SolverMode::flow) {
          // terminal algebraic rescale to the true solution
          for (auto& x : u.values) x *= sr.scale;
        }
        out.converged = true;
        break;
      }
      switch (cfg.mode) {
        case SolverMode::fixed_point: u = fixed_point_step(u, cfg); break;
        case SolverMode::flow: u = flow_step(u, cfg); break;
        case SolverMode::newton: u = newton_step(u, cfg); break;
      }
    }
    out.u_final = u;
  } catch (const std::exception& e) {
    out.error = e.what();
    out.converged = false;
  }
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace minklab

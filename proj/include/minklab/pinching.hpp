#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "minklab/identities.hpp"

namespace minklab {

// h(beta) = 16 beta^2 - tau^2 (1+beta)^4 with tau = sqrt(1-q^2); the pinching
// constant beta(q) is its relevant root in (0,1).
inline double pinching_h(double beta, double q) {
  const double tau2 = 1.0 - q * q;
  return 16.0 * beta * beta - tau2 * std::pow(1.0 + beta, 4);
}

inline double beta_threshold(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("beta_threshold: need q in (0,1)");
  return (1.0 - q) / (1.0 + q);
}

struct PinchingParams {
  double p;           // p in (0,1)
  double q;           // 1 - p
  double tau;         // sqrt(1 - q^2)
  double beta;        // pinching constant beta(q)
  double beta_t;      // well-definedness threshold (1-q)/(1+q)
  double alpha_flow;  // Gauss curvature flow exponent 1/q
  double chow;        // Chow-type constant beta/(1+beta)
};

// beta(q) = 2 (1 - sqrt(1 - tau)) / tau - 1
inline PinchingParams pinching_beta(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("pinching_beta: need p in (0,1)");
  PinchingParams r;
  r.p = p;
  r.q = 1.0 - p;
  r.tau = std::sqrt(1.0 - r.q * r.q);
  r.beta = 2.0 * (1.0 - std::sqrt(1.0 - r.tau)) / r.tau - 1.0;
  r.beta_t = beta_threshold(r.q);
  r.alpha_flow = 1.0 / r.q;
  r.chow = r.beta / (1.0 + r.beta);
  if (std::fabs(pinching_h(r.beta, r.q)) > 1e-12)
    throw std::logic_error("pinching_beta: closed form fails h(beta)=0");
  if (!(r.beta_t < r.beta && r.beta < 1.0))
    throw std::logic_error("pinching_beta: beta_t < beta < 1 violated");
  return r;
}

// Case I (p in (-1,0], q in [1,2), alpha = 2/q - 2) coefficient report
struct Case1Report {
  double alpha;
  double q1_defect;       // |2 - 2q - alpha q|
  double q2_value;        // 2q(1+alpha) = 2(2-q)
  double lam1_coeff;      // 4(1+alpha-1/q) + alpha(alpha-2/q), must vanish
  double lam1_factored;   // -(alpha+2)/q (2-2q-alpha q)
  double lam2_coeff;      // alpha(alpha-2/q) = -2 alpha >= 0
  double K_coeff;         // -2 alpha (2 alpha + 3) >= 0
  bool boundary;          // q = 2 (p = -1): Case II takes over
};

inline Case1Report case1_coefficients(double q) {
  if (!(q >= 1.0 && q <= 2.0)) throw std::domain_error("case1_coefficients: need q in [1,2]");
  Case1Report r;
  const double a = 2.0 / q - 2.0;
  r.alpha = a;
  r.q1_defect = std::fabs(2.0 - 2.0 * q - a * q);
  r.q2_value = 2.0 * q * (1.0 + a);
  r.lam1_coeff = 4.0 * (1.0 + a - 1.0 / q) + a * (a - 2.0 / q);
  r.lam1_factored = -(a + 2.0) / q * (2.0 - 2.0 * q - a * q);
  r.lam2_coeff = a * (a - 2.0 / q);
  const double bracketK = 2.0 * (a * a - 2.0 * a / q) - 4.0 * (1.0 - 1.0 / q) - 8.0 * a * a -
                          12.0 * a + 8.0 * a / q;
  r.K_coeff = bracketK;  // equals -2 alpha (2 alpha + 3) for this alpha
  r.boundary = (q == 2.0);
  return r;
}

// Case III (p in (0,1), alpha = 1/q - 1) reduction report
struct Case3Report {
  double alpha;
  double q1_value;        // 2 - 2q - alpha q = 1 - q
  double q2_value;        // 2q(1+alpha) = 2
  double reduction_defect;  // max rel defect of B1 = B2 = 16K^2/q^2 + (1-1/q^2)H^4
  double pinch_defect;      // max rel defect of B1 = h(beta) lam1^4 / q^2
};

inline Case3Report case3_reduction(double q, int n_samples = 1000, unsigned long seed = 1234) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("case3_reduction: need q in (0,1)");
  Case3Report r;
  const double a = 1.0 / q - 1.0;
  r.alpha = a;
  r.q1_value = 2.0 - 2.0 * q - a * q;
  r.q2_value = 2.0 * q * (1.0 + a);
  r.reduction_defect = 0.0;
  r.pinch_defect = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int n = 0; n < n_samples; ++n) {
    IdentitySample s;
    s.lam2 = std::pow(10.0, 2.0 * U(rng) - 1.0);
    s.lam1 = s.lam2 * std::pow(10.0, 2.0 * U(rng) * (1.0 - 1e-12) + 1e-12);
    s.alpha = a;
    s.q = q;
    const double H = s.H(), K = s.K();
    const double closed = 16.0 / (q * q) * K * K + (1.0 - 1.0 / (q * q)) * H * H * H * H;
    r.reduction_defect = std::max(r.reduction_defect, detail::rel_defect(B1(s), closed));
    r.reduction_defect = std::max(r.reduction_defect, detail::rel_defect(B2(s), closed));
    const double beta = s.lam2 / s.lam1;
    const double pinched = pinching_h(beta, q) * std::pow(s.lam1, 4) / (q * q);
    r.pinch_defect = std::max(r.pinch_defect, detail::rel_defect(B1(s), pinched));
  }
  return r;
}

// Gradient-free part of the stopover inequality:
//   (2 - 2q - alpha q) K H + 2 q (1+alpha) u^{q-1},
// with the per-node signs of B1, B2 alongside.
struct StopoverField {
  ScalarField value;
  ScalarField b1, b2;
  double min_value;
  double min_B;
};

inline StopoverField stopover_zeroth_order(const CurvatureField& c, const ScalarField& u,
                                           double p, double alpha) {
  const double q = 1.0 - p;
  StopoverField out{ScalarField(u.grid), ScalarField(u.grid), ScalarField(u.grid), 0.0, 0.0};
  bool first = true;
  for (std::size_t k = 0; k < u.grid->size(); ++k) {
    const double v = (2.0 - 2.0 * q - alpha * q) * c.K[k] * c.H[k] +
                     2.0 * q * (1.0 + alpha) * std::pow(u.values[k], q - 1.0);
    IdentitySample s;
    s.lam1 = c.lam1[k];
    s.lam2 = c.lam2[k];
    s.alpha = alpha;
    s.q = q;
    out.value.values[k] = v;
    out.b1.values[k] = B1(s);
    out.b2.values[k] = B2(s);
    const double bmin = std::min(out.b1.values[k], out.b2.values[k]);
    if (first || v < out.min_value) out.min_value = v;
    if (first || bmin < out.min_B) out.min_B = bmin;
    first = false;
  }
  return out;
}

}  // namespace minklab

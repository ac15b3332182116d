#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "minklab/p_mean.hpp"
#include "minklab/vec3.hpp"

namespace minklab {

// Axis-aligned box with the origin in its interior.  Support function
// u(x) = <center,x> + sum_k halfwidth_k |x_k|.
struct BoxBody {
  Vec3 center{0.0, 0.0, 0.0};
  std::array<double, 3> halfwidth{1.0, 1.0, 1.0};

  BoxBody(const Vec3& c, std::array<double, 3> hw) : center(c), halfwidth(hw) {
    for (int k = 0; k < 3; ++k)
      if (!(halfwidth[k] > 0.0)) throw std::domain_error("BoxBody: half-widths must be positive");
    if (std::fabs(center.x) >= halfwidth[0] || std::fabs(center.y) >= halfwidth[1] ||
        std::fabs(center.z) >= halfwidth[2])
      throw std::domain_error("BoxBody: origin must be interior");
  }

  double support(const Vec3& x) const {
    return dot(center, x) + halfwidth[0] * std::fabs(x.x) + halfwidth[1] * std::fabs(x.y) +
           halfwidth[2] * std::fabs(x.z);
  }
  // support in the +/- coordinate directions, axis k
  double hi(int k) const { return axis(k, center) + halfwidth[k]; }
  double lo(int k) const { return -axis(k, center) + halfwidth[k]; }
  double volume() const { return 8.0 * halfwidth[0] * halfwidth[1] * halfwidth[2]; }

  static double axis(int k, const Vec3& v) { return k == 0 ? v.x : (k == 1 ? v.y : v.z); }
};

// Example 2.2 bodies: the cube [-a,a]^3 and its shifted variant with
// -(a-eps) <= x1 <= a+eps.
inline BoxBody example_box(double a) { return BoxBody({0, 0, 0}, {a, a, a}); }
inline BoxBody example_box_shifted(double a, double eps) {
  if (!(eps > 0.0 && eps < a)) throw std::domain_error("example_box_shifted: need 0 < eps < a");
  return BoxBody({eps, 0, 0}, {a, a, a});
}

// Firey combination of two boxes stays a box for this family: the p-mean of
// the supports in the six axis directions bounds a product of intervals.
inline BoxBody box_firey_combination(const BoxBody& K, const BoxBody& L, double lambda, double p) {
  std::array<double, 3> hw;
  Vec3 c;
  for (int k = 0; k < 3; ++k) {
    const double hi = p_mean(K.hi(k), L.hi(k), lambda, p);
    const double lo = p_mean(K.lo(k), L.lo(k), lambda, p);
    hw[k] = 0.5 * (hi + lo);
    const double ck = 0.5 * (hi - lo);
    if (k == 0) c.x = ck;
    else if (k == 1) c.y = ck;
    else c.z = ck;
  }
  return BoxBody(c, hw);
}

// V((1-lambda) K +_p lambda L) - V(K)^{1-lambda} V(L)^lambda on the exact box
// path.  Negative values witness the failure of log-Brunn-Minkowski-type
// inequalities for p < 1.
inline double bmf_gap(const BoxBody& K, const BoxBody& L, double lambda, double p) {
  const BoxBody C = box_firey_combination(K, L, lambda, p);
  return C.volume() - std::pow(K.volume(), 1.0 - lambda) * std::pow(L.volume(), lambda);
}

struct BoxConvexityReport {
  double endpoint_defect = 0.0;   // max |h(0)-2a|, |h(1)-2a| (limits, exact)
  double min_second_diff = 0.0;   // over interior lambda nodes
  double max_second_diff = 0.0;
  std::vector<double> lambda;
  std::vector<double> h;
};

// Samples h(lambda) = M_p(a,a-eps,lambda) + M_p(a,a+eps,lambda) and reports
// the sign of its second differences: concave for p >= 1, convex for p < 1.
inline BoxConvexityReport box_h_convexity(double a, double eps, double p, int n_lambda = 101) {
  if (!(eps > 0.0 && eps < a)) throw std::domain_error("box_h_convexity: need 0 < eps < a");
  if (n_lambda < 3) throw std::domain_error("box_h_convexity: need at least 3 lambda nodes");
  BoxConvexityReport rep;
  rep.lambda.resize(n_lambda);
  rep.h.resize(n_lambda);
  for (int i = 0; i < n_lambda; ++i) {
    const double lam = static_cast<double>(i) / (n_lambda - 1);
    rep.lambda[i] = lam;
    if (i == 0 || i == n_lambda - 1) {
      rep.h[i] = 2.0 * a;  // h(0)=h(1)=2a
      continue;
    }
    rep.h[i] = p_mean(a, a - eps, lam, p) + p_mean(a, a + eps, lam, p);
  }
  rep.endpoint_defect = 0.0;
  bool first = true;
  for (int i = 1; i + 1 < n_lambda; ++i) {
    const double d2 = rep.h[i - 1] - 2.0 * rep.h[i] + rep.h[i + 1];
    if (first || d2 < rep.min_second_diff) rep.min_second_diff = d2;
    if (first || d2 > rep.max_second_diff) rep.max_second_diff = d2;
    first = false;
  }
  return rep;
}

}  // namespace minklab

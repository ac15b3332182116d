#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace minklab {

// p-th mean M_p(a,b;lambda) of two positive numbers.  p=0 is the geometric
// mean, p=+inf/-inf the max/min.
inline double p_mean(double a, double b, double lambda, double p) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("p_mean: arguments must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("p_mean: lambda must be in (0,1)");
  if (a == b) return a;  // equality case exactly, no pow roundoff
  if (p == std::numeric_limits<double>::infinity()) return std::max(a, b);
  if (p == -std::numeric_limits<double>::infinity()) return std::min(a, b);
  if (p == 0.0) return std::pow(a, 1.0 - lambda) * std::pow(b, lambda);
  return std::pow((1.0 - lambda) * std::pow(a, p) + lambda * std::pow(b, p), 1.0 / p);
}

}  // namespace minklab

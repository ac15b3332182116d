#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "minklab/vec3.hpp"

namespace minklab {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Cell-centred latitude-longitude discretisation of the unit sphere.
// Colatitude nodes theta_i = (i+1/2)*pi/n_theta stay strictly inside (0,pi),
// so no node ever sits on a pole; longitudes phi_j = 2*pi*j/n_phi.
// n_phi must be even: pole closure pairs phi with phi+pi.
class SphereGrid {
 public:
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> theta;    // size n_theta
  std::vector<double> phi;      // size n_phi
  std::vector<Vec3> nodes;      // row-major, size n_theta*n_phi
  std::vector<double> weights;  // midpoint-rule weights, sum ~ 4*pi

  static std::shared_ptr<const SphereGrid> build(int n_theta, int n_phi) {
    if (n_theta < 8 || n_phi < 16 || n_phi % 2 != 0)
      throw ConfigError("SphereGrid: require n_theta >= 8, n_phi >= 16, n_phi even");
    auto g = std::make_shared<SphereGrid>();
    g->n_theta = n_theta;
    g->n_phi = n_phi;
    const double dth = std::numbers::pi / n_theta;
    const double dph = 2.0 * std::numbers::pi / n_phi;
    g->theta.resize(n_theta);
    g->phi.resize(n_phi);
    for (int i = 0; i < n_theta; ++i) g->theta[i] = (i + 0.5) * dth;
    for (int j = 0; j < n_phi; ++j) g->phi[j] = j * dph;
    g->nodes.resize(static_cast<std::size_t>(n_theta) * n_phi);
    g->weights.resize(g->nodes.size());
    // Fejer-type colatitude weights: integrate the midpoint-sampled cosine
    // interpolant against sin(theta) exactly.  Equivalent to
    // sin(theta_i)*dtheta up to O(dtheta^2), but the rule is exact for
    // cosine polynomials of degree < n_theta, so the weight sum is 4*pi to
    // roundoff and smooth integrands converge spectrally.
    std::vector<double> wth(n_theta);
    for (int i = 0; i < n_theta; ++i) {
      double w = 1.0;
      for (int m = 2; m < n_theta; m += 2)
        w += 2.0 * std::cos(m * g->theta[i]) / (1.0 - static_cast<double>(m) * m);
      wth[i] = 2.0 * w / n_theta;
    }
    for (int i = 0; i < n_theta; ++i) {
      const double st = std::sin(g->theta[i]);
      const double ct = std::cos(g->theta[i]);
      for (int j = 0; j < n_phi; ++j) {
        const std::size_t k = g->idx(i, j);
        g->nodes[k] = {st * std::cos(g->phi[j]), st * std::sin(g->phi[j]), ct};
        g->weights[k] = wth[i] * dph;
      }
    }
    return g;
  }

  std::size_t size() const { return nodes.size(); }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_phi + j; }

  double dtheta() const { return std::numbers::pi / n_theta; }
  double dphi() const { return 2.0 * std::numbers::pi / n_phi; }

  double sin_theta(int i) const { return std::sin(theta[i]); }
  double cot_theta(int i) const { return std::cos(theta[i]) / std::sin(theta[i]); }

  // local orthonormal frame (e_theta, e_phihat) at node (i,j)
  Vec3 e_theta(int i, int j) const {
    const double ct = std::cos(theta[i]), st = std::sin(theta[i]);
    return {ct * std::cos(phi[j]), ct * std::sin(phi[j]), -st};
  }
  Vec3 e_phi(int i, int j) const { return {-std::sin(phi[j]), std::cos(phi[j]), 0.0}; }
};

using GridPtr = std::shared_ptr<const SphereGrid>;

inline double integrate(const SphereGrid& g, const std::vector<double>& values) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.weights[k] * values[k];
  return s;
}

}  // namespace minklab

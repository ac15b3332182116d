#pragma once

#include <cmath>
#include <random>

#include "minklab/scalar_field.hpp"

namespace minklab {

inline ScalarField sphere_support(GridPtr g, double radius = 1.0) {
  return constant_field(std::move(g), radius);
}

// support function of the ellipsoid with semi-axes (a,b,c) centred at origin
inline ScalarField ellipsoid_support(GridPtr g, double a, double b, double c) {
  return sample(std::move(g), [=](const Vec3& x) {
    return std::sqrt(a * a * x.x * x.x + b * b * x.y * x.y + c * c * x.z * x.z);
  });
}

// 1 + eps * (random combination of degree <= 2 real harmonics), scaled so the
// perturbation's sup-norm equals eps
inline ScalarField perturbed_sphere(GridPtr g, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
  const double c4 = coef(rng), c5 = coef(rng), c6 = coef(rng);
  const double c7 = coef(rng), c8 = coef(rng);
  ScalarField pert = sample(g, [=](const Vec3& v) {
    return c1 * v.x + c2 * v.y + c3 * v.z + c4 * v.x * v.y + c5 * v.x * v.z + c6 * v.y * v.z +
           c7 * (v.x * v.x - v.y * v.y) + c8 * (3.0 * v.z * v.z - 1.0);
  });
  const double m = pert.max_abs();
  ScalarField out(std::move(g));
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = 1.0 + eps * pert.values[k] / m;
  return out;
}

// Steiner point s = (3/4pi) * \int u(x) x dx
inline Vec3 steiner_point(const ScalarField& u) {
  const SphereGrid& g = *u.grid;
  Vec3 s{};
  for (std::size_t k = 0; k < g.size(); ++k)
    s += (g.weights[k] * u.values[k]) * g.nodes[k];
  return s * (3.0 / (4.0 * std::numbers::pi));
}

// translate the body so its Steiner point sits at the origin
inline void recenter_steiner(ScalarField& u) {
  const Vec3 s = steiner_point(u);
  for (std::size_t k = 0; k < u.values.size(); ++k)
    u.values[k] -= dot(s, u.grid->nodes[k]);
}

}  // namespace minklab

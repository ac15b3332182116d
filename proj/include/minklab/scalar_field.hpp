#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "minklab/sphere_grid.hpp"

namespace minklab {

// Real-valued function sampled at the grid nodes (support functions u,
// densities f, residuals, monitors).
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0)
      : grid(std::move(g)), values(grid->size(), fill) {}
  ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {}

  double& operator()(int i, int j) { return values[grid->idx(i, j)]; }
  double operator()(int i, int j) const { return values[grid->idx(i, j)]; }

  double max() const { return *std::max_element(values.begin(), values.end()); }
  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }
  double l2() const {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
      s += grid->weights[k] * values[k] * values[k];
    return std::sqrt(s);
  }
  bool positive() const { return min() > 0.0; }
};

inline ScalarField sample(GridPtr g, const std::function<double(const Vec3&)>& f) {
  ScalarField out(g);
  for (std::size_t k = 0; k < g->size(); ++k) out.values[k] = f(g->nodes[k]);
  return out;
}

inline ScalarField constant_field(GridPtr g, double c) { return ScalarField(std::move(g), c); }

inline double integrate(const ScalarField& f) { return integrate(*f.grid, f.values); }

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a.values[k] + b.values[k];
  return out;
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a.values[k] - b.values[k];
  return out;
}

inline ScalarField operator*(double s, const ScalarField& a) {
  ScalarField out(a.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = s * a.values[k];
  return out;
}

}  // namespace minklab

#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "minklab/polytope.hpp"
#include "minklab/scalar_field.hpp"

namespace minklab {

struct UnboundedBody : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampled support bound: the body is the intersection of the half-spaces
// <directions[k], y> <= bounds[k].
struct DirectionalBound {
  std::vector<Vec3> directions;  // unit vectors
  std::vector<double> bounds;    // strictly positive

  void push(const Vec3& d, double b) {
    if (!(b > 0.0)) throw std::domain_error("DirectionalBound: bounds must be positive");
    directions.push_back((1.0 / norm(d)) * d);
    bounds.push_back(b);
  }
};

inline DirectionalBound directional_bound(const ScalarField& u) {
  DirectionalBound g;
  g.directions = u.grid->nodes;
  g.bounds = u.values;
  for (double b : g.bounds)
    if (!(b > 0.0)) throw std::domain_error("directional_bound: support values must be positive");
  return g;
}

// Wulff shape (half-space intersection) via the polar dual: hull the points
// x_k/g_k, then read the body's vertices off the hull facets and its faces off
// the hull vertices.
inline Polytope wulff_shape(const DirectionalBound& g) {
  const std::size_t m = g.directions.size();
  if (m < 4) throw std::invalid_argument("wulff_shape: need at least 4 directions");
  std::vector<Vec3> dual(m);
  for (std::size_t k = 0; k < m; ++k) dual[k] = (1.0 / g.bounds[k]) * g.directions[k];

  Polytope H;
  try {
    H = convex_hull(dual);
  } catch (const std::invalid_argument&) {
    throw UnboundedBody("wulff_shape: directions do not span R^3");
  }
  // origin strictly inside the dual hull <=> directions positively span
  double scale = 0.0;
  for (const auto& q : H.vertices) scale = std::max(scale, norm(q));
  for (const auto& f : H.faces)
    if (f.offset < 1e-10 * scale)
      throw UnboundedBody("wulff_shape: directions do not positively span R^3");

  Polytope P;
  P.vertices.resize(H.faces.size());
  for (std::size_t f = 0; f < H.faces.size(); ++f)
    P.vertices[f] = (1.0 / H.faces[f].offset) * H.faces[f].normal;

  // cycles around each hull vertex: face (v,w,x) maps w -> (face, x) at v
  std::map<std::pair<int, int>, std::pair<int, int>> next;  // (v,w) -> (face, x)
  for (std::size_t f = 0; f < H.faces.size(); ++f) {
    const auto& r = H.faces[f].ring;
    for (int e = 0; e < 3; ++e)
      next[{r[e], r[(e + 1) % 3]}] = {static_cast<int>(f), r[(e + 2) % 3]};
  }
  std::vector<bool> done(H.vertices.size(), false);
  for (const auto& [key, val] : next) {
    const int v = key.first;
    if (done[v]) continue;
    done[v] = true;
    Polytope::Face face;
    const int w0 = key.second;
    int w = w0;
    do {
      const auto it = next.find({v, w});
      if (it == next.end()) throw std::runtime_error("wulff_shape: broken dual cycle");
      face.ring.push_back(it->second.first);
      w = it->second.second;
    } while (w != w0 && face.ring.size() <= H.faces.size());
    // drop near-duplicate consecutive corners from nearly coplanar hull facets
    std::vector<int> ring;
    for (int idx : face.ring) {
      if (!ring.empty() && norm(P.vertices[idx] - P.vertices[ring.back()]) < 1e-9 * scale)
        continue;
      ring.push_back(idx);
    }
    while (ring.size() > 1 &&
           norm(P.vertices[ring.front()] - P.vertices[ring.back()]) < 1e-9 * scale)
      ring.pop_back();
    if (ring.size() < 3) continue;
    face.ring = std::move(ring);
    const Vec3 q = H.vertices[v];
    const double qn = norm(q);
    face.normal = (1.0 / qn) * q;
    face.offset = 1.0 / qn;
    P.faces.push_back(std::move(face));
  }
  return P;
}

}  // namespace minklab

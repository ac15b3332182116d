#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "minklab/vec3.hpp"

namespace minklab {

// Convex polytope with the origin strictly inside.  Faces store their vertex
// ring (counter-clockwise seen from outside) plus the supporting plane
// <normal, y> = offset with unit outward normal.
struct Polytope {
  struct Face {
    std::vector<int> ring;
    Vec3 normal;
    double offset = 0.0;
  };
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
};

// Fan decomposition from the origin: each face contributes cone volume
// offset*area/3, with the face area from a triangle fan inside the ring.
inline double polytope_volume(const Polytope& P) {
  double vol = 0.0;
  for (const auto& f : P.faces) {
    const Vec3& v0 = P.vertices[f.ring[0]];
    for (std::size_t t = 1; t + 1 < f.ring.size(); ++t) {
      const Vec3& v1 = P.vertices[f.ring[t]];
      const Vec3& v2 = P.vertices[f.ring[t + 1]];
      vol += triple(v0, v1, v2);
    }
  }
  return vol / 6.0;
}

inline void save_off(const std::string& path, const Polytope& P) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("save_off: cannot open " + path);
  std::fprintf(fp, "OFF\n%zu %zu 0\n", P.vertices.size(), P.faces.size());
  for (const auto& v : P.vertices)
    std::fprintf(fp, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
  for (const auto& f : P.faces) {
    std::fprintf(fp, "%zu", f.ring.size());
    for (int i : f.ring) std::fprintf(fp, " %d", i);
    std::fprintf(fp, "\n");
  }
  std::fclose(fp);
}

namespace hull_detail {

struct QFace {
  int v[3];             // CCW seen from outside
  int nb[3];            // neighbour across edge (v[i], v[i+1])
  Vec3 n;               // unnormalised outward normal
  double d = 0.0;       // plane <n,y> = d
  std::vector<int> outside;
  bool dead = false;
};

inline void set_plane(QFace& f, const std::vector<Vec3>& pts, const Vec3& interior) {
  const Vec3 a = pts[f.v[0]], b = pts[f.v[1]], c = pts[f.v[2]];
  f.n = cross(b - a, c - a);
  f.d = dot(f.n, a);
  if (dot(f.n, interior) > f.d) {  // flip to outward
    std::swap(f.v[1], f.v[2]);
    std::swap(f.nb[0], f.nb[2]);
    f.n = -1.0 * f.n;
    f.d = -f.d;
  }
}

}  // namespace hull_detail

// 3D convex hull (quickhull).  Returns triangular faces; throws on degenerate
// (affinely <3-dimensional) input.
inline Polytope convex_hull(const std::vector<Vec3>& pts) {
  using hull_detail::QFace;
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw std::invalid_argument("convex_hull: need at least 4 points");
  double scale = 0.0;
  for (const auto& p : pts)
    scale = std::max({scale, std::fabs(p.x), std::fabs(p.y), std::fabs(p.z)});
  const double eps = 1e-10 * scale;

  // initial simplex: extremes along x, farthest from segment, then from plane
  int i0 = 0, i1 = 0;
  for (int i = 1; i < n; ++i) {
    if (pts[i].x < pts[i0].x) i0 = i;
    if (pts[i].x > pts[i1].x) i1 = i;
  }
  if (norm(pts[i1] - pts[i0]) < eps) {
    for (int i = 1; i < n; ++i)
      if (norm(pts[i] - pts[i0]) > norm(pts[i1] - pts[i0])) i1 = i;
  }
  if (norm(pts[i1] - pts[i0]) < eps)
    throw std::invalid_argument("convex_hull: degenerate input");
  int i2 = -1;
  double best = eps;
  const Vec3 dir01 = pts[i1] - pts[i0];
  for (int i = 0; i < n; ++i) {
    const double h = norm(cross(dir01, pts[i] - pts[i0])) / norm(dir01);
    if (h > best) {
      best = h;
      i2 = i;
    }
  }
  if (i2 < 0) throw std::invalid_argument("convex_hull: collinear input");
  int i3 = -1;
  best = eps;
  const Vec3 nrm = cross(dir01, pts[i2] - pts[i0]);
  for (int i = 0; i < n; ++i) {
    const double h = std::fabs(dot(nrm, pts[i] - pts[i0])) / norm(nrm);
    if (h > best) {
      best = h;
      i3 = i;
    }
  }
  if (i3 < 0) throw std::invalid_argument("convex_hull: coplanar input");

  const Vec3 interior =
      0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);

  std::vector<QFace> faces(4);
  const int tet[4][3] = {{i0, i1, i2}, {i0, i1, i3}, {i0, i2, i3}, {i1, i2, i3}};
  for (int f = 0; f < 4; ++f) {
    faces[f].v[0] = tet[f][0];
    faces[f].v[1] = tet[f][1];
    faces[f].v[2] = tet[f][2];
    hull_detail::set_plane(faces[f], pts, interior);
  }
  // wire tetrahedron adjacency by matching shared edges
  auto link = [&](int fa, int fb) {
    for (int e = 0; e < 3; ++e)
      for (int g = 0; g < 3; ++g)
        if (faces[fa].v[e] == faces[fb].v[(g + 1) % 3] &&
            faces[fa].v[(e + 1) % 3] == faces[fb].v[g]) {
          faces[fa].nb[e] = fb;
          faces[fb].nb[g] = fa;
        }
  };
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) link(a, b);

  // conflict assignment
  auto assign = [&](int pt, const std::vector<int>& cand) {
    int fbest = -1;
    double dbest = eps;
    for (int f : cand) {
      if (faces[f].dead) continue;
      const double h = dot(faces[f].n, pts[pt]) - faces[f].d;
      const double hn = h / norm(faces[f].n);
      if (hn > dbest) {
        dbest = hn;
        fbest = f;
      }
    }
    if (fbest >= 0) faces[fbest].outside.push_back(pt);
  };
  {
    std::vector<int> all{0, 1, 2, 3};
    for (int i = 0; i < n; ++i)
      if (i != i0 && i != i1 && i != i2 && i != i3) assign(i, all);
  }

  std::vector<int> pending{0, 1, 2, 3};
  while (!pending.empty()) {
    const int f = pending.back();
    pending.pop_back();
    if (f >= static_cast<int>(faces.size()) || faces[f].dead || faces[f].outside.empty())
      continue;
    // farthest outside point
    int p = faces[f].outside[0];
    double dmax = -1.0;
    for (int q : faces[f].outside) {
      const double h = dot(faces[f].n, pts[q]) - faces[f].d;
      if (h > dmax) {
        dmax = h;
        p = q;
      }
    }
    // visible region via DFS
    std::vector<int> visible, stack{f};
    faces[f].dead = true;
    struct Horizon {
      int a, b, nb;
    };
    std::vector<Horizon> horizon;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      visible.push_back(cur);
      for (int e = 0; e < 3; ++e) {
        const int nb = faces[cur].nb[e];
        if (faces[nb].dead) continue;
        const double h = dot(faces[nb].n, pts[p]) - faces[nb].d;
        if (h > eps * norm(faces[nb].n)) {
          faces[nb].dead = true;
          stack.push_back(nb);
        } else {
          horizon.push_back({faces[cur].v[e], faces[cur].v[(e + 1) % 3], nb});
        }
      }
    }
    // new fan around p
    std::vector<int> newfaces;
    std::vector<std::pair<int, int>> by_start;  // horizon-edge start vertex -> face
    for (const auto& hz : horizon) {
      QFace nf;
      nf.v[0] = hz.a;
      nf.v[1] = hz.b;
      nf.v[2] = p;
      nf.nb[0] = hz.nb;
      nf.nb[1] = nf.nb[2] = -1;
      hull_detail::set_plane(nf, pts, interior);
      const int idx = static_cast<int>(faces.size());
      faces.push_back(std::move(nf));
      // re-point the surviving neighbour at the new face
      QFace& keep = faces[hz.nb];
      for (int e = 0; e < 3; ++e)
        if (keep.v[e] == hz.b && keep.v[(e + 1) % 3] == hz.a) keep.nb[e] = idx;
      newfaces.push_back(idx);
      by_start.emplace_back(hz.a, idx);
    }
    auto start_face = [&](int v) {
      for (const auto& [sv, fi] : by_start)
        if (sv == v) return fi;
      throw std::runtime_error("convex_hull: broken horizon");
    };
    for (int fi : newfaces) {
      QFace& nf = faces[fi];
      nf.nb[1] = start_face(nf.v[1]);                  // edge (b, p)
      QFace& nxt = faces[nf.nb[1]];
      nxt.nb[2] = fi;                                  // its edge (p, a)
    }
    // reassign orphaned outside points
    for (int vf : visible)
      for (int q : faces[vf].outside)
        if (q != p) assign(q, newfaces);
    for (int vf : visible) faces[vf].outside.clear();
    for (int fi : newfaces) pending.push_back(fi);
  }

  Polytope P;
  std::vector<int> remap(n, -1);
  for (const auto& f : faces) {
    if (f.dead) continue;
    Polytope::Face out;
    for (int e = 0; e < 3; ++e) {
      const int v = f.v[e];
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(P.vertices.size());
        P.vertices.push_back(pts[v]);
      }
      out.ring.push_back(remap[v]);
    }
    const double nn = norm(f.n);
    out.normal = (1.0 / nn) * f.n;
    out.offset = f.d / nn;
    P.faces.push_back(std::move(out));
  }
  return P;
}

}  // namespace minklab

#pragma once

#include <array>
#include <cmath>

namespace minklab {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& r) const { return {x + r.x, y + r.y, z + r.z}; }
  constexpr Vec3 operator-(const Vec3& r) const { return {x - r.x, y - r.y, z - r.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& r) { x += r.x; y += r.y; z += r.z; return *this; }
  Vec3& operator-=(const Vec3& r) { x -= r.x; y -= r.y; z -= r.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

// signed volume of the tetrahedron (0, a, b, c) times 6
inline constexpr double triple(const Vec3& a, const Vec3& b, const Vec3& c) {
  return dot(a, cross(b, c));
}

// Symmetric 2x2 matrix stored as three components.
struct Sym2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  double trace() const { return a11 + a22; }

  // eigenvalues in ascending order
  std::array<double, 2> eigenvalues() const {
    const double m = 0.5 * (a11 + a22);
    const double d = std::hypot(0.5 * (a11 - a22), a12);
    return {m - d, m + d};
  }

  Sym2 cofactor() const { return {a22, -a12, a11}; }

  Sym2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, a11 / d};
  }

  Sym2 operator+(const Sym2& r) const { return {a11 + r.a11, a12 + r.a12, a22 + r.a22}; }
  Sym2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
};

// product of two symmetric 2x2 matrices, (a*b) need not be symmetric;
// returns row-major {m11, m12, m21, m22}
inline std::array<double, 4> mul(const Sym2& a, const Sym2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a12, a.a11 * b.a12 + a.a12 * b.a22,
          a.a12 * b.a11 + a.a22 * b.a12, a.a12 * b.a12 + a.a22 * b.a22};
}

}  // namespace minklab

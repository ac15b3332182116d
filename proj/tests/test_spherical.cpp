#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "minklab/curvature.hpp"
#include "minklab/fields_init.hpp"

using namespace minklab;

namespace {

constexpr double kPi = std::numbers::pi;

// High-accuracy reference for partial derivatives of an analytic function of
// (theta, phi), independent of the grid stencils: 4th-order differences at a
// step much smaller than the grid spacing.
struct PartialOracle {
  std::function<double(double, double)> f;
  double d = 1e-3;

  double eval(double t, double p) const { return f(t, p); }
  double dt(double t, double p) const {
    return (eval(t - 2 * d, p) - 8 * eval(t - d, p) + 8 * eval(t + d, p) - eval(t + 2 * d, p)) /
           (12 * d);
  }
  double dp(double t, double p) const {
    return (eval(t, p - 2 * d) - 8 * eval(t, p - d) + 8 * eval(t, p + d) - eval(t, p + 2 * d)) /
           (12 * d);
  }
  double dtt(double t, double p) const {
    return (-eval(t - 2 * d, p) + 16 * eval(t - d, p) - 30 * eval(t, p) + 16 * eval(t + d, p) -
            eval(t + 2 * d, p)) / (12 * d * d);
  }
  double dpp(double t, double p) const {
    return (-eval(t, p - 2 * d) + 16 * eval(t, p - d) - 30 * eval(t, p) + 16 * eval(t, p + d) -
            eval(t, p + 2 * d)) / (12 * d * d);
  }
  double dtp(double t, double p) const {
    auto g = [&](double tt) {
      return (eval(tt, p - 2 * d) - 8 * eval(tt, p - d) + 8 * eval(tt, p + d) -
              eval(tt, p + 2 * d)) / (12 * d);
    };
    return (g(t - 2 * d) - 8 * g(t - d) + 8 * g(t + d) - g(t + 2 * d)) / (12 * d);
  }

  // covariant Hessian components in the orthonormal frame
  Sym2 hessian(double t, double p) const {
    const double st = std::sin(t), ct = std::cos(t) / std::sin(t);
    return {dtt(t, p), (dtp(t, p) - ct * dp(t, p)) / st, dpp(t, p) / (st * st) + ct * dt(t, p)};
  }
};

Vec3 dir(double t, double p) {
  return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}

}  // namespace

TEST_CASE("grid construction and invariants") {
  auto g = SphereGrid::build(8, 16);
  REQUIRE(g->size() == 128);
  for (const auto& n : g->nodes) CHECK(std::fabs(norm(n) - 1.0) < 1e-14);
  double ws = 0.0;
  for (double w : g->weights) ws += w;
  CHECK(ws == Catch::Approx(4.0 * kPi).margin(1e-10));

  auto g2 = SphereGrid::build(64, 128);
  CHECK(g2->theta[0] == Catch::Approx(kPi / 128.0).margin(1e-15));

  CHECK_THROWS_AS(SphereGrid::build(4, 16), ConfigError);
  CHECK_THROWS_AS(SphereGrid::build(8, 8), ConfigError);
  CHECK_THROWS_AS(SphereGrid::build(8, 17), ConfigError);
}

TEST_CASE("quadrature of x3^2") {
  auto g = SphereGrid::build(64, 128);
  auto f = sample(g, [](const Vec3& x) { return x.z * x.z; });
  CHECK(integrate(f) == Catch::Approx(4.0 * kPi / 3.0).margin(1e-12));
}

TEST_CASE("covariant hessian of a constant is zero") {
  auto g = SphereGrid::build(16, 32);
  auto u = constant_field(g, 2.5);
  auto h = covariant_hessian(u);
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(h.h11[k] == 0.0);
    CHECK(h.h12[k] == 0.0);
    CHECK(h.h22[k] == 0.0);
  }
}

TEST_CASE("linear functions are the kernel of the radii operator") {
  auto g = SphereGrid::build(64, 128);
  const Vec3 v{0.3, -1.1, 0.7};
  auto u = sample(g, [&](const Vec3& x) { return dot(x, v); });
  auto h = covariant_hessian(u);
  double defect = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) {
    defect = std::max(defect, std::fabs(h.h11[k] + u.values[k]));
    defect = std::max(defect, std::fabs(h.h12[k]));
    defect = std::max(defect, std::fabs(h.h22[k] + u.values[k]));
  }
  CHECK(defect < 1e-5);  // O(h^4) at 64x128

  auto gf = SphereGrid::build(128, 256);
  auto uf = sample(gf, [&](const Vec3& x) { return dot(x, v); });
  auto hf = covariant_hessian(uf);
  double defect_f = 0.0;
  for (std::size_t k = 0; k < gf->size(); ++k)
    defect_f = std::max(defect_f, std::fabs(hf.h11[k] + uf.values[k]));
  CHECK(defect_f < defect);  // refinement shrinks the defect
}

TEST_CASE("covariant hessian matches the partial-derivative oracle") {
  auto body = [](const Vec3& x) {
    return std::sqrt(4.0 * x.x * x.x + x.y * x.y + 0.25 * x.z * x.z);
  };
  auto uf = [&](double t, double p) { return body(dir(t, p)); };
  PartialOracle oracle{uf};

  // defect over the whole grid and over an equatorial band; the pole rows see
  // much larger truncation constants (the 4:1 aspect ratio drives large high
  // theta-derivatives near the axis), so the global defect is judged by its
  // convergence rate instead of an absolute bound.
  auto run = [&](int n) {
    auto g = SphereGrid::build(n, 2 * n);
    auto u = sample(g, body);
    auto h = covariant_hessian(u);
    double all = 0.0, band = 0.0;
    for (int i = 0; i < g->n_theta; ++i)
      for (int j = 0; j < g->n_phi; ++j) {
        const Sym2 ref = oracle.hessian(g->theta[i], g->phi[j]);
        const std::size_t k = g->idx(i, j);
        double d = std::fabs(h.h11[k] - ref.a11);
        d = std::max(d, std::fabs(h.h12[k] - ref.a12));
        d = std::max(d, std::fabs(h.h22[k] - ref.a22));
        all = std::max(all, d);
        if (g->theta[i] > 0.5 && g->theta[i] < kPi - 0.5) band = std::max(band, d);
      }
    return std::pair<double, double>(all, band);
  };

  auto [all64, band64] = run(64);
  auto [all128, band128] = run(128);
  CHECK(band64 < 1e-3);
  CHECK(all64 < 0.05);
  CHECK(band128 * 8.0 < band64);  // order >= 3 in the band...
  CHECK(all128 * 8.0 < all64);    // ...and at the worst (pole-row) node
}

TEST_CASE("covariant hessian is linear") {
  auto g = SphereGrid::build(16, 32);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField u(g), v(g);
  for (auto& x : u.values) x = U(rng);
  for (auto& x : v.values) x = U(rng);
  const double a = 1.7, b = -0.4;
  ScalarField w(g);
  for (std::size_t k = 0; k < g->size(); ++k) w.values[k] = a * u.values[k] + b * v.values[k];
  auto hu = covariant_hessian(u), hv = covariant_hessian(v), hw = covariant_hessian(w);
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(hw.h11[k] == Catch::Approx(a * hu.h11[k] + b * hv.h11[k]).margin(1e-9));
    CHECK(hw.h12[k] == Catch::Approx(a * hu.h12[k] + b * hv.h12[k]).margin(1e-9));
    CHECK(hw.h22[k] == Catch::Approx(a * hu.h22[k] + b * hv.h22[k]).margin(1e-9));
  }
}

TEST_CASE("unit sphere curvatures") {
  auto g = SphereGrid::build(16, 32);
  auto c = curvatures_from_support(constant_field(g, 1.0));
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(c.lam1[k] == Catch::Approx(1.0).margin(1e-13));
    CHECK(c.lam2[k] == Catch::Approx(1.0).margin(1e-13));
    CHECK(c.H[k] == Catch::Approx(2.0).margin(1e-13));
    CHECK(c.K[k] == Catch::Approx(1.0).margin(1e-13));
  }
}

TEST_CASE("sphere of radius R") {
  auto g = SphereGrid::build(16, 32);
  const double R = 3.2;
  auto c = curvatures_from_support(constant_field(g, R));
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(c.lam1[k] == Catch::Approx(1.0 / R).margin(1e-13));
    CHECK(c.K[k] == Catch::Approx(1.0 / (R * R)).margin(1e-13));
  }
}

TEST_CASE("ellipsoid Gauss curvature, K = u^4/(abc)^2") {
  const double a = 2.0, b = 1.0, c = 0.5;
  const double abc2 = (a * b * c) * (a * b * c);

  auto g = SphereGrid::build(64, 128);
  auto u = ellipsoid_support(g, a, b, c);
  auto cf = curvatures_from_support(u);

  // node nearest e1
  std::size_t kbest = 0;
  double best = -2.0;
  for (std::size_t k = 0; k < g->size(); ++k)
    if (g->nodes[k].x > best) {
      best = g->nodes[k].x;
      kbest = k;
    }
  const double Kref = std::pow(u.values[kbest], 4) / abc2;
  CHECK(cf.K[kbest] == Catch::Approx(Kref).epsilon(1e-4));
  CHECK(cf.K[kbest] == Catch::Approx(16.0).epsilon(0.02));

  // field-wide classical formula, and the K*det(r)=1 invariant
  auto maxrel_on = [&](const SphereGrid& gr, const CurvatureField& f,
                       const ScalarField& uu) {
    double m = 0.0;
    for (std::size_t k = 0; k < gr.size(); ++k) {
      const double ref = std::pow(uu.values[k], 4) / abc2;
      m = std::max(m, std::fabs(f.K[k] - ref) / ref);
    }
    return m;
  };
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(std::fabs(cf.K[k] * cf.det_r(k) - 1.0) < 1e-10);
    CHECK(cf.lam1[k] >= cf.lam2[k]);
  }
  const double m64 = maxrel_on(*g, cf, u);
  CHECK(m64 < 0.05);

  // worst-node error is dominated by pole-row truncation; require order >= 3
  auto gf = SphereGrid::build(128, 256);
  auto uf = ellipsoid_support(gf, a, b, c);
  const double m128 = maxrel_on(*gf, curvatures_from_support(uf), uf);
  CHECK(m128 * 8.0 < m64);
}

TEST_CASE("non-convex support rejected") {
  auto g = SphereGrid::build(32, 64);
  // large degree-2 perturbation destroys positive definiteness of r
  auto u = sample(g, [](const Vec3& x) { return 1.0 + 0.5 * (3.0 * x.z * x.z - 1.0); });
  CHECK_THROWS_AS(curvatures_from_support(u), NonConvexError);
}

TEST_CASE("curvature scaling covariance") {
  auto g = SphereGrid::build(32, 64);
  auto u = ellipsoid_support(g, 1.2, 1.0, 0.9);
  const double c = 2.7;
  ScalarField cu(g);
  for (std::size_t k = 0; k < g->size(); ++k) cu.values[k] = c * u.values[k];
  auto f1 = curvatures_from_support(u);
  auto f2 = curvatures_from_support(cu);
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(f2.lam1[k] == Catch::Approx(f1.lam1[k] / c).epsilon(1e-10));
    CHECK(f2.K[k] == Catch::Approx(f1.K[k] / (c * c)).epsilon(1e-10));
  }
}

TEST_CASE("embedding") {
  auto g = SphereGrid::build(64, 128);

  SECTION("unit sphere embeds to the identity") {
    auto X = embed_surface(constant_field(g, 1.0));
    for (std::size_t k = 0; k < g->size(); ++k) CHECK(norm(X[k] - g->nodes[k]) < 1e-12);
  }

  SECTION("radius R sphere") {
    const double R = 2.0;
    auto X = embed_surface(constant_field(g, R));
    for (std::size_t k = 0; k < g->size(); ++k) CHECK(norm(X[k] - R * g->nodes[k]) < 1e-11);
  }

  SECTION("support identity <X,x> = u and ellipsoid apex") {
    auto u = ellipsoid_support(g, 2.0, 1.0, 0.5);
    auto X = embed_surface(u);
    for (std::size_t k = 0; k < g->size(); ++k)
      CHECK(dot(X[k], g->nodes[k]) == Catch::Approx(u.values[k]).margin(1e-12));
    std::size_t kbest = 0;
    double best = -2.0;
    for (std::size_t k = 0; k < g->size(); ++k)
      if (g->nodes[k].x > best) {
        best = g->nodes[k].x;
        kbest = k;
      }
    CHECK(norm(X[kbest]) == Catch::Approx(2.0).epsilon(2e-3));
  }
}

TEST_CASE("rotation equivariance of curvature extremes") {
  auto g = SphereGrid::build(64, 128);
  auto body = [](const Vec3& x) {
    return std::sqrt(1.44 * x.x * x.x + x.y * x.y + 0.81 * x.z * x.z);
  };
  // rotation by 0.7 rad about z then 0.4 about x
  auto rot = [](const Vec3& v) {
    const double c1 = std::cos(0.7), s1 = std::sin(0.7);
    Vec3 a{c1 * v.x - s1 * v.y, s1 * v.x + c1 * v.y, v.z};
    const double c2 = std::cos(0.4), s2 = std::sin(0.4);
    return Vec3{a.x, c2 * a.y - s2 * a.z, s2 * a.y + c2 * a.z};
  };
  auto u1 = sample(g, body);
  auto u2 = sample(g, [&](const Vec3& x) { return body(rot(x)); });
  auto c1 = curvatures_from_support(u1);
  auto c2 = curvatures_from_support(u2);
  auto minmax = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return std::pair<double, double>(*lo, *hi);
  };
  auto [lo1, hi1] = minmax(c1.K);
  auto [lo2, hi2] = minmax(c2.K);
  CHECK(std::fabs(lo1 - lo2) < 5e-3);
  CHECK(std::fabs(hi1 - hi2) < 5e-3);
}

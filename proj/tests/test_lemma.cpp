#include <catch2/catch_amalgamated.hpp>

#include "minklab/fields_init.hpp"
#include "minklab/lemma_check.hpp"

using namespace minklab;

TEST_CASE("support identities on the unit sphere") {
  auto g = SphereGrid::build(32, 64);
  auto rep = verify_lemma_2_4(constant_field(g, 1.0));
  CHECK(rep.defect_220 < 1e-10);
  CHECK(rep.defect_221 < 1e-10);
}

TEST_CASE("support identities on a sphere of radius R") {
  auto g = SphereGrid::build(32, 64);
  auto rep = verify_lemma_2_4(constant_field(g, 2.3));
  CHECK(rep.defect_220 < 1e-10);
  CHECK(rep.defect_221 < 1e-10);
}

TEST_CASE("ellipsoid defects converge under refinement") {
  auto rep64 = verify_lemma_2_4(ellipsoid_support(SphereGrid::build(64, 128), 1.2, 1.0, 0.9));
  auto rep128 = verify_lemma_2_4(ellipsoid_support(SphereGrid::build(128, 256), 1.2, 1.0, 0.9));
  CHECK(rep64.defect_220 < 0.1);
  CHECK(rep64.defect_221 < 0.1);
  // order >= 1.8: refinement by 2 shrinks defects by >= 2^1.8 ~ 3.48
  CHECK(rep64.defect_220 / rep128.defect_220 >= 3.4);
  CHECK(rep64.defect_221 / rep128.defect_221 >= 3.4);
}

TEST_CASE("off-center bodies satisfy the identities too") {
  auto g = SphereGrid::build(64, 128);
  auto u = sample(g, [](const Vec3& x) {
    return std::sqrt(1.2 * x.x * x.x + x.y * x.y + 0.9 * x.z * x.z) + 0.2 * x.x - 0.1 * x.z;
  });
  auto rep = verify_lemma_2_4(u);
  CHECK(rep.defect_220 < 0.05);
  CHECK(rep.defect_221 < 0.05);
}

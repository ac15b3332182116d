#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "minklab/field_io.hpp"
#include "minklab/fields_init.hpp"

using namespace minklab;

namespace {
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/minklab_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("field round-trip is lossless") {
  auto g = SphereGrid::build(16, 32);
  TempFile tf("roundtrip.txt");

  SECTION("constant field") {
    auto u = constant_field(g, 1.0);
    save_field(u, tf.path);
    auto v = load_field(tf.path);
    REQUIRE(v.grid->n_theta == 16);
    REQUIRE(v.grid->n_phi == 32);
    for (std::size_t k = 0; k < g->size(); ++k) CHECK(v.values[k] == u.values[k]);
  }
  SECTION("irrational values survive bit-exactly") {
    auto u = perturbed_sphere(g, 0.37, 123);
    save_field(u, tf.path);
    auto v = load_field(tf.path);
    for (std::size_t k = 0; k < g->size(); ++k) CHECK(v.values[k] == u.values[k]);
  }
  SECTION("double round-trip is idempotent") {
    auto u = ellipsoid_support(g, 1.7, 0.9, 1.1);
    save_field(u, tf.path);
    auto v = load_field(tf.path);
    TempFile tf2("roundtrip2.txt");
    save_field(v, tf2.path);
    std::ifstream a(tf.path), b(tf2.path);
    std::string la, lb;
    while (std::getline(a, la)) {
      REQUIRE(std::getline(b, lb));
      CHECK(la == lb);
    }
  }
}

TEST_CASE("load errors") {
  TempFile tf("bad.txt");

  SECTION("missing file") {
    CHECK_THROWS_AS(load_field("/tmp/minklab_no_such_file.txt"), std::runtime_error);
  }
  SECTION("malformed header names the expected grammar") {
    std::ofstream(tf.path) << "hello world\n";
    try {
      load_field(tf.path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("# sphere-grid ntheta=<N> nphi=<M>") != std::string::npos);
      CHECK(msg.find(":1:") != std::string::npos);
    }
  }
  SECTION("truncated body reports end of file") {
    std::ofstream(tf.path) << "# sphere-grid ntheta=8 nphi=16\n0 0 1.0\n";
    CHECK_THROWS_AS(load_field(tf.path), ParseError);
  }
  SECTION("index mismatch reports the line number") {
    std::ofstream out(tf.path);
    out << "# sphere-grid ntheta=8 nphi=16\n";
    out << "5 5 1.0\n";
    out.close();
    try {
      load_field(tf.path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SECTION("invalid grid size rejected") {
    std::ofstream(tf.path) << "# sphere-grid ntheta=4 nphi=7\n";
    CHECK_THROWS_AS(load_field(tf.path), std::invalid_argument);
  }
}

#include <doctest.h>

#include <sstream>

#include "beamkit/io.hpp"
#include "beamkit/mesh.hpp"

using namespace beamkit;

TEST_CASE("icosphere topology and geometry") {
  for (int s = 0; s <= 3; ++s) {
    const TriMesh m = make_icosphere(s, 0.5);
    CHECK(m.size() == 20u * (1u << (2 * s)));
    for (std::size_t t = 0; t < m.size(); ++t) {
      // Outward normals point away from the center.
      CHECK(m.normal(t).dot(m.centroid(t)) > 0.0);
      CHECK(std::abs(m.normal(t).norm() - 1.0) < 1e-12);
    }
  }
  const TriMesh fine = make_icosphere(3, 1.0);
  const double exact = 4.0 / 3.0 * kPi;
  CHECK(std::abs(fine.volume() - exact) / exact < 0.01);
  CHECK(fine.volume_centroid().norm() < 1e-12);
}

TEST_CASE("winding number separates inside and outside") {
  const TriMesh m = make_icosphere(2, 1.0, Point3(1, 2, 3));
  CHECK(m.contains(Point3(1, 2, 3)));
  CHECK(m.contains(Point3(1.5, 2, 3)));
  CHECK_FALSE(m.contains(Point3(3, 2, 3)));
  CHECK(std::abs(m.winding_number(Point3(1, 2, 3)) - 1.0) < 1e-9);
}

TEST_CASE("mesh validation") {
  const std::vector<Point3> v = {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)};
  const std::vector<Triangle> good = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  const TriMesh tet(v, good);
  CHECK(tet.volume() == doctest::Approx(1.0 / 6.0));

  // Inverted orientation gives a negative volume.
  std::vector<Triangle> flipped;
  for (const auto& t : good) flipped.push_back({t[0], t[2], t[1]});
  CHECK_THROWS_AS(TriMesh(v, flipped), MeshError);

  // Open surface.
  CHECK_THROWS_AS(TriMesh(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {1, 2, 3}}), MeshError);
  // Index out of range.
  CHECK_THROWS_AS(TriMesh(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 7}}), MeshError);
  // Degenerate triangle.
  std::vector<Point3> dv = v;
  dv.push_back(Point3(0.5, 0, 0));
  CHECK_THROWS_AS(TriMesh(dv, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}, {0, 4, 1}}), MeshError);
}

TEST_CASE("mesh text round trip") {
  const TriMesh m = make_icosphere(1, 0.3);
  std::stringstream ss;
  write_mesh(ss, m);
  const TriMesh back = read_mesh(ss);
  CHECK(back.size() == m.size());
  CHECK(back.vertices().size() == m.vertices().size());
  for (std::size_t i = 0; i < m.vertices().size(); ++i) CHECK((back.vertices()[i] - m.vertices()[i]).norm() == 0.0);

  std::istringstream bad("v 0 0 0\nv 1 0 0\nq 1 2 3\n");
  try {
    read_mesh(bad, "bad.mesh");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.mesh:3") != std::string::npos);
  }
  std::istringstream zero_index("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n");
  CHECK_THROWS_AS(read_mesh(zero_index), ConfigError);
}

TEST_CASE("capped cylinder is closed with the apex at the origin") {
  const TriMesh m = make_capped_cylinder(0.035, 0.130, 0.1515, 0.006);
  double top = -1e9;
  double bottom = 1e9;
  for (const Point3& p : m.vertices()) {
    top = std::max(top, p.z());
    bottom = std::min(bottom, p.z());
    CHECK(std::hypot(p.x(), p.y()) <= 0.035 + 1e-12);
  }
  CHECK(top == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bottom == doctest::Approx(-0.130));
  CHECK(m.contains(Point3(0, 0, -0.065)));
  CHECK(m.max_edge_length() < 0.012);
  // Volume lies between the flat cylinder and the one extended to the apex.
  const double cap_sag = 0.1515 - std::sqrt(0.1515 * 0.1515 - 0.035 * 0.035);
  const double base = kPi * 0.035 * 0.035;
  CHECK(m.volume() < base * 0.130);
  CHECK(m.volume() > base * (0.130 - cap_sag) * 0.98);
}

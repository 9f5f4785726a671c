#include <doctest.h>

#include <cmath>

#include "beamkit/freefield.hpp"
#include "beamkit/sphere_scatter.hpp"
#include "oracles.hpp"

using namespace beamkit;

TEST_CASE("surface pressure matches the direct j - (j'/h') h summation") {
  for (double ka : {0.1, 0.7, 2.0, 5.0, 12.0}) {
    const int n = auto_truncation_order(ka);
    for (double cg : {-1.0, -0.5, 0.0, 0.3, 0.9, 1.0}) {
      const Complex fast = rigid_sphere_surface_pressure(ka, cg);
      const Complex ref = oracle::sphere_surface_direct(ka, cg, n);
      CHECK(std::abs(fast - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("long-wavelength limit") {
  for (double cg : {-1.0, 0.0, 1.0}) {
    CHECK(std::abs(std::abs(rigid_sphere_surface_pressure(0.001, cg)) - 1.0) < 1e-3);
  }
}

TEST_CASE("short-wavelength limit: pressure doubling on the lit pole") {
  const double p = std::abs(rigid_sphere_surface_pressure(20.0, 1.0));
  CHECK(std::abs(p - 2.0) < 0.1);
  // The shadow pole is quieter than the lit pole.
  CHECK(std::abs(rigid_sphere_surface_pressure(20.0, -1.0)) < p);
}

TEST_CASE("AUTO truncation converges") {
  for (double ka : {0.01, 1.0, 10.0, 60.0}) {
    const int n = auto_truncation_order(ka);
    CHECK(n >= static_cast<int>(std::ceil(ka)) + 12);
    const Complex p_auto = rigid_sphere_surface_pressure(ka, 0.4);
    const Complex p_more = rigid_sphere_surface_pressure(ka, 0.4, SeriesConfig{n + 20});
    CHECK(std::abs(p_auto - p_more) < 1e-9 * std::abs(p_more));
  }
  CHECK_THROWS_AS(rigid_sphere_surface_pressure(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(rigid_sphere_surface_pressure(1.0, 1.5), DomainError);
}

TEST_CASE("phase convention agrees with the free field at low frequency") {
  // At ka -> 0 the sphere is acoustically transparent, so the steering vector
  // approaches the plane wave with the same origin.
  const RigidSphere s{0.05, Point3(0.01, -0.02, 0.03)};
  std::vector<Point3> mics;
  for (const auto& u : {Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1), Point3(-0.6, 0, 0.8)}) {
    mics.push_back(s.center + s.radius * u);
  }
  const MicArrayGeometry g(mics);
  const Direction d = Direction::from_degrees(50, 120);
  const double f = 5.0;  // ka ~ 0.005
  const auto tf = rigid_sphere_steering(g, s, f, d).values;
  const auto ff = plane_wave_steering(g, f, d).values;
  CHECK((tf - ff).cwiseAbs().maxCoeff() < 1e-2);

  // At higher ka the lit microphone sees more pressure than the shadowed one.
  const Direction from_x = Direction::from_degrees(90, 0);
  const auto hi = rigid_sphere_steering(g, s, 5000.0, from_x).values;
  CHECK(std::abs(hi[0]) > std::abs(hi[3]));
}

TEST_CASE("rigid sphere model rejects microphones off the surface") {
  const RigidSphere s{0.05, Point3::Zero()};
  const MicArrayGeometry g({Point3(0.05, 0, 0), Point3(0, 0.06, 0)});
  CHECK_THROWS_AS(RigidSphereModel(g, s), DomainError);
}

TEST_CASE("rigid sphere model: evaluate_all matches evaluate, scattered = total - incident") {
  const RigidSphere s{0.08, Point3(0, 0, -0.08)};
  const MicArrayGeometry g({Point3(0, 0, 0), Point3(0.08, 0, -0.08), Point3(0, -0.08, -0.08)});
  const RigidSphereModel model(g, s);
  const std::vector<Direction> dirs = {Direction::from_degrees(10, 0), Direction::from_degrees(100, 300)};
  const auto all = model.evaluate_all(2500.0, dirs);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    CHECK((all[i] - model.evaluate(2500.0, dirs[i])).norm() < 1e-13);
    const auto parts = scattered_field(model, 2500.0, dirs[i]);
    CHECK((parts.total - parts.incident - parts.scattered).norm() < 1e-13);
  }
}

TEST_CASE("scattered field vanishes in the static limit") {
  // ka = 0.01 on the illuminated pole and at the equator.
  for (double cg : {1.0, 0.0, -1.0}) {
    const Complex ps = rigid_sphere_surface_pressure(0.01, cg) - std::exp(Complex(0.0, 0.01 * cg));
    CHECK(20.0 * std::log10(std::abs(ps)) < -40.0);
  }
}

TEST_CASE("illuminated point carries a stronger scattered field than the equator at ka = 5") {
  auto ps = [](double cg) { return std::abs(rigid_sphere_surface_pressure(5.0, cg) - std::exp(Complex(0.0, 5.0 * cg))); };
  CHECK(ps(1.0) > ps(0.0));
}

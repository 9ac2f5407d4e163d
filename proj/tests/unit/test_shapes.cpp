#include <doctest.h>

#include <cmath>
#include <map>
#include <utility>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"
#include "ndof/geometry.hpp"
#include "ndof/shapes.hpp"

using namespace ndof;

namespace {

// Directed edge counts: a closed, consistently oriented surface has every
// directed edge once and its reverse once.
bool closed_and_oriented(const TriangleMesh& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles())
    for (int e = 0; e < 3; ++e) ++count[{t[e], t[(e + 1) % 3]}];
  for (const auto& [edge, n] : count) {
    if (n != 1) return false;
    const auto it = count.find({edge.second, edge.first});
    if (it == count.end() || it->second != 1) return false;
  }
  return true;
}

double signed_volume(const TriangleMesh& m) {
  double v = 0.0;
  const auto& p = m.vertices();
  for (const auto& t : m.triangles()) v += p[t[0]].dot(p[t[1]].cross(p[t[2]])) / 6;
  return v;
}

}  // namespace

TEST_CASE("every builtin shape has unit circumradius") {
  for (const auto& name : builtin_shape_names()) {
    CAPTURE(name);
    const auto m = builtin_shape(name, {0.1});
    if (name == "plate" || name == "two-plates") continue;
    CHECK(m.circumradius() == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(builtin_shape("teapot"), Error);
  CHECK(builtin_shape_names().size() >= 10);
}

TEST_CASE("closed shapes are watertight with outward normals") {
  for (const auto& name : {"sphere", "cylinder", "disc", "open-cylinder", "corrugated-cylinder",
                           "connected-discs", "hemisphere", "bowl", "spheroid"}) {
    CAPTURE(name);
    const auto m = builtin_shape(name, {0.1});
    CHECK(closed_and_oriented(m));
    CHECK(signed_volume(m) > 0.0);
    CHECK_FALSE(m.open_surface());
  }
}

TEST_CASE("volumes and areas of simple solids") {
  // Cylinder with h = r and unit circumradius: r^2 (1 + 1/4) = 1.
  const double r = 1 / std::sqrt(1.25);
  const auto c = cylinder(1.0, 0.02);
  CHECK(signed_volume(c) == doctest::Approx(kPi * r * r * r).epsilon(0.005));
  CHECK(surface_area(c) == doctest::Approx(4 * kPi * r * r).epsilon(0.005));

  const auto h = solid_hemisphere(0.02);
  CHECK(signed_volume(h) == doctest::Approx(2 * kPi / 3).epsilon(0.005));
  CHECK(surface_area(h) == doctest::Approx(3 * kPi).epsilon(0.005));

  const auto s = icosphere(2.0, 5);
  CHECK(signed_volume(s) == doctest::Approx(4 * kPi * 8 / 3).epsilon(0.005));
  CHECK(s.circumradius() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.triangles().size() == 20 * 1024);

  // Thin bowl: both faces, area close to 4 pi a^2.
  const auto b = bowl(0.01, 0.02);
  CHECK(surface_area(b) == doctest::Approx(4 * kPi).epsilon(0.02));

  const auto o = oblate_spheroid(0.5, 0.02);
  CHECK(signed_volume(o) == doctest::Approx(4 * kPi * 0.5 / 3).epsilon(0.005));
}

TEST_CASE("reference shape reconstructions: surface areas") {
  CHECK(surface_area(builtin_shape("open-cylinder")) == doctest::Approx(10.3).epsilon(0.01));
  CHECK(surface_area(builtin_shape("corrugated-cylinder")) == doctest::Approx(21.9).epsilon(0.01));
  CHECK(surface_area(builtin_shape("disc")) == doctest::Approx(6.59).epsilon(0.01));
}

TEST_CASE("plates") {
  const auto p = square_plate(2.0, 8);
  CHECK(p.open_surface());
  CHECK(p.triangles().size() == 2 * 64);
  CHECK(surface_area(p) == doctest::Approx(4.0));
  CHECK(p.circumradius() == doctest::Approx(std::sqrt(2.0)));
  const auto pp = two_plates(1.0, 3.0, 4);
  CHECK(surface_area(pp) == doctest::Approx(2.0));
  double zmin = INFINITY, zmax = -INFINITY;
  for (const auto& v : pp.vertices()) {
    zmin = std::min(zmin, v.z());
    zmax = std::max(zmax, v.z());
  }
  CHECK(zmin == doctest::Approx(-1.5));
  CHECK(zmax == doctest::Approx(1.5));
  CHECK_THROWS_AS(square_plate(1.0, 0), Error);
  CHECK_THROWS_AS(two_plates(1.0, 0.0, 4), Error);
}

TEST_CASE("revolve rejects bad profiles") {
  CHECK_THROWS_AS(revolve({{0.0, 0.0}}, false, 0.1), Error);
  CHECK_THROWS_AS(revolve({{1.0, 0.0}, {1.0, 1.0}}, false, 0.1), Error);  // open, off axis
  CHECK_THROWS_AS(revolve({{0.0, 0.0}, {1.0, 0.5}, {1.0, 1.0}}, true, 0.1), Error);
  CHECK_THROWS_AS(cylinder(-1.0), Error);
  CHECK_THROWS_AS(open_cylinder(1.0, 1.2), Error);
  CHECK_THROWS_AS(icosphere(1.0, 9), Error);
  // A cone from a straight profile.
  const auto cone = revolve({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, false, 0.02);
  CHECK(signed_volume(cone) == doctest::Approx(kPi / 3).epsilon(0.005));
}

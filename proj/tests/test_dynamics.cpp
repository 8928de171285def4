#include <doctest.h>

#include <cmath>

#include "capdyn/dynamics.hpp"
#include "capdyn/sysdef.hpp"

using namespace capdyn;

TEST_CASE("orbit segments are bit-identical to iterate") {
  const auto f = fixture("disk_twist");
  const Point x = Point::of(0.7, 1.3);
  const auto seg = orbit_segment(f.system, x, -40, 25);
  for (long n = -40; n <= 25; ++n) {
    const Point p = iterate(f.system, x, n);
    CHECK(seg[static_cast<std::size_t>(n + 40)] == p);
  }
  const auto tail = orbit_segment(f.system, x, 5, 9);
  CHECK(tail.front() == iterate(f.system, x, 5));
  CHECK_THROWS_AS(orbit_segment(f.system, x, 3, 2), std::invalid_argument);
}

TEST_CASE("fixtures invert within round-trip tolerance") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto f = fixture(name);
    const auto pts = f.sampler(200, 1);
    CHECK(round_trip_error(f.system, pts) <= 1e-12);
  }
}

TEST_CASE("golden rotation orbit closure is a bounded net") {
  const auto f = fixture("circle_rotation:golden");
  const ClosureParams p{0.1, 10000, 0};
  const auto c = orbit_closure_approx(f.system, Point::of(0.0), p);
  CHECK(c.stabilized);
  CHECK(c.escape_witnesses.empty());
  CHECK(c.net.points.size() <= static_cast<std::size_t>(std::ceil(kTwoPi / 0.1)) + 1);
  // The net covers the circle: every angle is within 2 eps of it.
  for (int k = 0; k < 1000; ++k) {
    const Point q = Point::of(kTwoPi * k / 1000.0);
    double best = INFINITY;
    for (const auto& z : c.net.points) best = std::fmin(best, f.system.space.distance(q, z));
    CHECK(best <= 0.2);
  }
  for (std::size_t i = 0; i < c.net.points.size(); ++i)
    CHECK(iterate(f.system, Point::of(0.0), c.representative_index[i]) == c.net.points[i]);
}

TEST_CASE("fixed point closes immediately") {
  const auto f = fixture("identity");
  const auto c = orbit_closure_approx(f.system, Point::of(3.0), ClosureParams{0.1, 100, 5});
  CHECK(c.stabilized);
  CHECK(c.net.points.size() == 1);
}

TEST_CASE("shrinking circles: the compactum closure escapes") {
  const auto f = fixture("shrinking_circles");
  REQUIRE(f.test_compactum);
  const auto c = compactum_orbit_closure(f.system, *f.test_compactum, ClosureParams{0.1, 10000, 0});
  REQUIRE(!c.escape_witnesses.empty());
  for (const auto& w : c.escape_witnesses) CHECK_FALSE(f.system.space.is_member(w));
  // Each single orbit stays on its circle.
  for (int n : {1, 2, 5, 20}) {
    const auto one = orbit_closure_approx(f.system, Point::of(1.0 / n, 0.0), ClosureParams{0.1, 10000, 0});
    CHECK(one.escape_witnesses.empty());
  }
}

TEST_CASE("dense orbit subset: the closure of one orbit escapes") {
  const auto f = fixture("dense_circle_subset");
  const auto c = orbit_closure_approx(f.system, Point::of(0.0), ClosureParams{0.1, 10000, 0});
  CHECK(!c.escape_witnesses.empty());
}

TEST_CASE("invariance of an invariant finite set") {
  const auto f = fixture("circle_rotation:3/8");
  std::vector<Point> orbit = orbit_segment(f.system, Point::of(0.2), 0, 7);
  CHECK(check_invariance(f.system, FiniteCompactum(f.system.space, orbit)) <= 1e-12);
}

TEST_CASE("bad closure parameters throw") {
  const auto f = fixture("identity");
  CHECK_THROWS_AS(orbit_closure_approx(f.system, Point::of(1.0), ClosureParams{0.0, 10, 0}), std::invalid_argument);
  CHECK_THROWS_AS(orbit_closure_approx(f.system, Point::of(1.0), ClosureParams{0.1, 0, 0}), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>

#include "capdyn/invariant_metric.hpp"
#include "capdyn/sysdef.hpp"

using namespace capdyn;

namespace {

// Oracle: the truncated sup by explicit iteration of both points.
double dstar_oracle(const System& sys, const Point& x, const Point& y, long n_max) {
  double best = 0;
  for (long n = -n_max; n <= n_max; ++n)
    best = std::fmax(best, sys.space.distance(iterate(sys, x, n), iterate(sys, y, n)));
  return best;
}

System doubling_plane() {
  return System{Space::plane(), [](const Point& p) { return Point::of(2 * p[0], 2 * p[1]); },
                [](const Point& p) { return Point::of(0.5 * p[0], 0.5 * p[1]); }, "doubling"};
}

}  // namespace

TEST_CASE("d_star equals the explicit sup") {
  const auto f = fixture("conjugated_rotation");
  const auto pts = f.sampler(12, 4);
  const TruncatedInvariantMetric d(f.system, 50);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    CHECK(d(pts[i], pts[i + 1]) == dstar_oracle(f.system, pts[i], pts[i + 1], 50));
}

TEST_CASE("d_star of an isometry is the metric itself") {
  const auto f = fixture("circle_rotation:golden");
  const TruncatedInvariantMetric d(f.system, 1000);
  const auto pts = f.sampler(40, 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    CHECK(std::abs(d(pts[i], pts[i + 1]) - f.system.space.distance(pts[i], pts[i + 1])) <= 1e-12);
}

TEST_CASE("d_star satisfies the metric axioms at several truncations") {
  for (const char* name : {"conjugated_rotation", "disk_twist", "annulus_rotation"}) {
    const auto f = fixture(name);
    const auto pts = f.sampler(48, 2);
    for (long n : {10L, 100L, 1000L}) {
      CAPTURE(name);
      CAPTURE(n);
      const TruncatedInvariantMetric d(f.system, n);
      const auto r = metric_axioms_check_random(d.as_metric(), pts, 10000, 9);
      CHECK(r.worst() <= kExactTolerance);
    }
  }
}

TEST_CASE("exhaustive axiom check agrees with a hand-made non-metric") {
  const std::vector<Point> pts{Point::of(0.0), Point::of(1.0), Point::of(2.0)};
  const Metric squared = [](const Point& p, const Point& q) { return (p[0] - q[0]) * (p[0] - q[0]); };
  const auto r = metric_axioms_check(squared, pts);
  CHECK(r.triangle == doctest::Approx(2.0));
  CHECK(r.symmetry == 0.0);
}

TEST_CASE("isometry residual of d_star on the conjugated rotation shrinks as N doubles") {
  const auto f = fixture("conjugated_rotation");
  const auto pts = f.sampler(64, 0);
  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) pairs.emplace_back(pts[i], pts[i + 1]);
  const double plain = isometry_residual(f.system, [&](const Point& a, const Point& b) {
    return f.system.space.distance(a, b);
  }, pairs);
  CHECK(plain > 0.01);
  double prev = INFINITY;
  for (long n = 10; n <= 10240; n *= 2) {
    const TruncatedInvariantMetric d(f.system, n);
    const double r = isometry_residual(f.system, d.as_metric(), pairs);
    CAPTURE(n);
    CHECK(r <= prev + kExactTolerance);
    prev = r;
  }
  CHECK(prev <= 1e-12);
}

TEST_CASE("guard trips on expanding orbits") {
  const TruncatedInvariantMetric d(doubling_plane(), 40);
  CHECK_THROWS_AS(d(Point::of(1.0, 0.0), Point::of(1.1, 0.0)), UnboundedOrbitError);
  try {
    d(Point::of(1.0, 0.0), Point::of(1.1, 0.0));
  } catch (const UnboundedOrbitError& e) {
    CHECK(e.index() == 20);
  }
}

TEST_CASE("topology probe separates twist from rotation") {
  const std::vector<double> radii{0.1, 0.05, 0.02, 0.01, 0.005};
  {
    const auto f = fixture("disk_twist");
    const auto pts = f.sampler(8, 0);
    const auto t = topology_equivalence_probe(f.system, 2000, pts, radii);
    CHECK(std::count(t.divergent.begin(), t.divergent.end(), true) >= 1);
  }
  {
    const auto f = fixture("annulus_rotation");
    const auto pts = f.sampler(8, 0);
    const auto t = topology_equivalence_probe(f.system, 2000, pts, radii);
    CHECK(std::count(t.divergent.begin(), t.divergent.end(), true) == 0);
    for (const auto& row : t.rows) CHECK(row.forward <= row.delta * 1.01);
  }
}

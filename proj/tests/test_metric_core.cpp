#include <doctest.h>

#include <cmath>
#include <random>

#include "capdyn/invariant_metric.hpp"
#include "capdyn/metric_core.hpp"

using namespace capdyn;

namespace {

// Oracle: Hausdorff distance by the textbook formula over explicit vectors.
double hausdorff_oracle(const Space& s, const std::vector<Point>& a, const std::vector<Point>& b) {
  auto directed = [&](const std::vector<Point>& p, const std::vector<Point>& q) {
    double sup = 0;
    for (const auto& x : p) {
      double inf = INFINITY;
      for (const auto& y : q) inf = std::fmin(inf, s.distance(x, y));
      sup = std::fmax(sup, inf);
    }
    return sup;
  };
  return std::fmax(directed(a, b), directed(b, a));
}

// Oracle: chordal distance as the Euclidean distance of stereographic images
// on the unit sphere.
std::array<double, 3> lift(const Point& p) {
  if (p.at_infinity) return {0, 0, 1};
  const double n2 = p[0] * p[0] + p[1] * p[1];
  return {2 * p[0] / (1 + n2), 2 * p[1] / (1 + n2), (n2 - 1) / (n2 + 1)};
}
double chordal_oracle(const Point& p, const Point& q) {
  const auto a = lift(p), b = lift(q);
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

std::vector<Space> all_spaces() {
  return {Space::circle(),
          Space::plane(),
          Space::disk(1.0),
          Space::sphere(),
          Space::discrete(),
          Space::product_circles(3),
          Space::disjoint_circles(3),
          Space::shrinking_circles(16, 0.0),
          Space::circle_subspace("all", [](const Point&) { return true; })};
}

}  // namespace

TEST_CASE("circle metric is arc length") {
  const Space c = Space::circle();
  CHECK(c.distance(Point::of(0.1), Point::of(kTwoPi - 0.1)) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(c.distance(Point::of(0.0), Point::of(std::numbers::pi)) == doctest::Approx(std::numbers::pi));
  CHECK(c.distance(Point::of(1.0), Point::of(1.0)) == 0.0);
}

TEST_CASE("sphere metric matches the stereographic oracle") {
  const Space s = Space::sphere();
  CHECK(s.distance(Point::of(0.0, 0.0), Point::infinity()) == doctest::Approx(2.0).epsilon(1e-15));
  // Images of 0 and 1 are the south pole and (1, 0, 0): distance sqrt(2).
  CHECK(std::abs(s.distance(Point::of(0.0, 0.0), Point::of(1.0, 0.0)) - 1.4142135623730951) <= 1e-15);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Point p = Point::of(g(rng), g(rng)), q = Point::of(g(rng), g(rng));
    CHECK(std::abs(s.distance(p, q) - chordal_oracle(p, q)) <= 1e-12);
    CHECK(std::abs(s.distance(p, Point::infinity()) - chordal_oracle(p, Point::infinity())) <= 1e-12);
  }
}

TEST_CASE("representation errors throw") {
  CHECK_THROWS_AS(Space::plane().distance(Point::of(1.0), Point::of(1.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(Space::plane().distance(Point::infinity(), Point::of(1.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(FiniteCompactum(Space::circle(), {}), std::invalid_argument);
  const FiniteCompactum a(Space::circle(), {Point::of(0.0)});
  const FiniteCompactum b(Space::disk(1.0), {Point::of(0.0, 0.0)});
  CHECK_THROWS_AS(hausdorff_distance(a, b), std::domain_error);
}

TEST_CASE("metric axioms hold on every space over random triples") {
  for (const auto& s : all_spaces()) {
    CAPTURE(s.label());
    const auto pts = s.sample(200, 11, Region{5.0});
    const Metric m = [s](const Point& p, const Point& q) { return s.distance(p, q); };
    const auto r = metric_axioms_check_random(m, pts, 10000, 5);
    CHECK(r.worst() <= kExactTolerance);
    CHECK(r.triples == 10000);
  }
}

TEST_CASE("hausdorff distance equals the brute-force oracle exactly") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 12);
  for (const auto& s : all_spaces()) {
    for (int trial = 0; trial < 120; ++trial) {
      const auto a = s.sample(static_cast<std::size_t>(size(rng)), rng(), Region{3.0});
      const auto b = s.sample(static_cast<std::size_t>(size(rng)), rng(), Region{3.0});
      if (a.empty() || b.empty()) continue;
      CHECK(hausdorff_distance(FiniteCompactum(s, a), FiniteCompactum(s, b)) == hausdorff_oracle(s, a, b));
    }
  }
}

TEST_CASE("epsilon net covers its input and is separated") {
  for (const auto& s : all_spaces()) {
    CAPTURE(s.label());
    const auto pts = s.sample(300, 2, Region{2.0});
    const double eps = 0.3;
    const auto net = epsilon_net(s, pts, eps);
    for (const auto& p : pts) {
      double best = INFINITY;
      for (const auto& q : net.points) best = std::fmin(best, s.distance(p, q));
      CHECK(best <= eps);
    }
    for (std::size_t i = 0; i < net.points.size(); ++i)
      for (std::size_t j = i + 1; j < net.points.size(); ++j) CHECK(s.distance(net.points[i], net.points[j]) > eps);
  }
}

TEST_CASE("NetIndex agrees with a linear scan") {
  for (const auto& s : all_spaces()) {
    CAPTURE(s.label());
    NetIndex index(s, 0.2);
    const auto stored = s.sample(400, 8, Region{2.0});
    for (const auto& p : stored) index.insert(p);
    const auto queries = s.sample(200, 9, Region{2.0});
    for (const auto& q : queries) {
      std::optional<std::size_t> best;
      double bd = INFINITY;
      std::vector<std::size_t> within;
      for (std::size_t i = 0; i < stored.size(); ++i) {
        const double d = s.distance(q, stored[i]);
        if (d <= 0.2) within.push_back(i);
        if (d <= 0.2 && d < bd) {
          bd = d;
          best = i;
        }
      }
      const auto hit = index.nearest_within(q, 0.2);
      REQUIRE(hit.has_value() == best.has_value());
      if (hit) CHECK(hit->index == *best);
      CHECK(index.all_within(q, 0.2) == within);
    }
  }
}

TEST_CASE("sup map distance over a shared sample") {
  const auto sample = std::make_shared<const std::vector<Point>>(std::vector<Point>{Point::of(0.0), Point::of(1.0)});
  const MapSnapshot f{sample, {Point::of(0.5), Point::of(1.0)}, 0};
  const MapSnapshot g{sample, {Point::of(0.0), Point::of(1.25)}, 1};
  CHECK(sup_map_distance(Space::circle(), f, g) == doctest::Approx(0.5));
  const auto other = std::make_shared<const std::vector<Point>>(std::vector<Point>{Point::of(2.0), Point::of(1.0)});
  const MapSnapshot h{other, {Point::of(0.0), Point::of(1.25)}, 1};
  CHECK_THROWS_AS(sup_map_distance(Space::circle(), f, h), std::domain_error);
}

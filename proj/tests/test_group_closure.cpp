#include <doctest.h>

#include <cmath>
#include <set>

#include "capdyn/group_closure.hpp"
#include "capdyn/sysdef.hpp"

using namespace capdyn;

namespace {

void check_net_invariants(const ClosureNet& net, const System& sys) {
  for (std::size_t i = 0; i < net.snapshots.size(); ++i)
    for (std::size_t j = i + 1; j < net.snapshots.size(); ++j)
      CHECK(sup_map_distance(net.space, net.snapshots[i], net.snapshots[j]) > net.epsilon);
  // Every scanned exponent is covered at radius epsilon.
  const long reach = (net.n_scanned - 1) / 2 + 1;
  for (long n = -reach + 1; n < reach; n += 7) {
    const auto s = take_snapshot(sys, net.sample, n);
    double best = INFINITY;
    for (const auto& m : net.snapshots) best = std::fmin(best, sup_map_distance(net.space, m, s));
    CHECK(best <= net.epsilon);
  }
}

}  // namespace

TEST_CASE("rotation by 3/8 gives exactly the cyclic group of order 8") {
  const auto f = fixture("circle_rotation:3/8");
  const auto sample = make_sample(f.sampler(32, 0));
  const auto net = enumerate_closure(f.system, sample, 1e-3, 10000, 100);
  CHECK(net.stabilized);
  REQUIRE(net.snapshots.size() == 8);
  std::set<long> residues;
  for (const auto& s : net.snapshots) residues.insert(((*s.index % 8) + 8) % 8);
  CHECK(residues.size() == 8);
  const auto laws = check_group_laws(net, f.system);
  CHECK(laws.closure <= 1e-12);
  CHECK(laws.inverse <= 1e-12);
  CHECK(laws.commutativity <= 1e-12);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < sample->size(); ++i) pairs.emplace_back(i, i + 1);
  const auto iso = check_limit_isometries(net, pairs);
  CHECK(iso.defect <= 1e-12);
  check_net_invariants(net, f.system);
}

TEST_CASE("golden rotation net is bounded by the angle net") {
  const auto f = fixture("circle_rotation:golden");
  const auto net = enumerate_closure(f.system, make_sample(f.sampler(16, 0)), 0.1, 10000, 1000);
  CHECK(net.stabilized);
  CHECK(net.snapshots.size() <= static_cast<std::size_t>(std::ceil(kTwoPi / 0.1)) + 1);
  const auto laws = check_group_laws(net, f.system);
  CHECK(laws.closure <= 0.2);
  CHECK(laws.inverse <= 0.2);
  CHECK(laws.commutativity <= 0.2);
  check_net_invariants(net, f.system);
}

TEST_CASE("disk twist closure does not stabilize") {
  const auto f = fixture("disk_twist");
  const auto net = enumerate_closure(f.system, make_sample(f.sampler(64, 0)), 0.1, 10000, 1000);
  CHECK_FALSE(net.stabilized);
  CHECK(net.snapshots.size() > static_cast<std::size_t>(std::ceil(kTwoPi / 0.1)) + 1);
  // Growth keeps going with the budget.
  const auto bigger = enumerate_closure(f.system, make_sample(f.sampler(64, 0)), 0.1, 20000, 1000);
  CHECK(bigger.snapshots.size() > net.snapshots.size());
}

TEST_CASE("composition adds indices") {
  const auto f = fixture("disk_twist");
  const auto sample = make_sample(f.sampler(16, 1));
  const auto a = take_snapshot(f.system, sample, 3), b = take_snapshot(f.system, sample, -11);
  const auto ab = compose_snapshots(f.system, a, b);
  CHECK(*ab.index == -8);
  CHECK(sup_map_distance(f.system.space, ab, take_snapshot(f.system, sample, -8)) <= 1e-9);
  const auto id = take_snapshot(f.system, sample, 0);
  CHECK(sup_map_distance(f.system.space, compose_snapshots(f.system, id, b), b) == 0.0);
}

TEST_CASE("isometry limits need not be isometries") {
  // f_n converges to the doubling map on {1..100}; the limit misses every odd
  // number.
  std::vector<Point> pts;
  for (int k = 1; k <= 100; ++k) pts.push_back(Point::of(static_cast<double>(k)));
  const auto sample = make_sample(pts);
  MapSnapshot doubling{sample, {}, std::nullopt};
  for (const auto& p : pts) doubling.values.push_back(Point::of(2 * p[0]));
  const Space d = Space::discrete();
  double prev = 2.0;
  for (long n : {10L, 50L, 99L, 100L, 150L, 400L}) {
    const auto s = take_snapshot(doubling_bijection(n), sample, 1);
    const double dist = sup_map_distance(d, s, doubling);
    CHECK(dist <= prev);
    prev = dist;
    if (n >= 100) CHECK(dist == 0.0);
    else CHECK(dist == 1.0);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) pairs.emplace_back(i, i + 1);
  const MapSnapshot members[] = {doubling};
  const auto report = check_limit_isometries([d](const Point& a, const Point& b) { return d.distance(a, b); },
                                             members, pairs);
  CHECK(report.defect == 0.0);
  CHECK(report.surjectivity_gap == 1.0);
}

TEST_CASE("bijections f_n are bijections") {
  for (long n : {1L, 3L, 8L}) {
    const auto sys = doubling_bijection(n);
    std::set<long> image;
    for (long k = 1; k <= 2 * n; ++k) {
      const long v = doubling_bijection_value(n, k);
      image.insert(v);
      CHECK(std::llround(sys.inverse(Point::of(static_cast<double>(v)))[0]) == k);
    }
    CHECK(image.size() == static_cast<std::size_t>(2 * n));
    CHECK(*image.rbegin() == 2 * n);
  }
}

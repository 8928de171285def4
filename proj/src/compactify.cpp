#include "capdyn/compactify.hpp"

#include <cmath>
#include <stdexcept>

namespace capdyn {

double chordal_distance(const Point& p, const Point& q) { return sphere_space().distance(p, q); }

Space sphere_space() {
  static const Space sphere = Space::sphere();
  return sphere;
}

System extend_map(const System& planar) {
  if (planar.space.kind() != SpaceKind::plane) throw std::invalid_argument("extend_map needs a planar system");
  auto lift = [](PointMap f) -> PointMap {
    return [f = std::move(f)](const Point& p) { return p.at_infinity ? Point::infinity() : f(p); };
  };
  return System{sphere_space(), lift(planar.forward), lift(planar.inverse), planar.name + "@sphere"};
}

std::vector<Point> euclidean_plane_sample(std::size_t count, std::uint64_t seed, double radius) {
  std::vector<Point> out;
  for (double r = 1.0; r <= radius && out.size() < count; r *= 10.0)
    out.push_back(Point::of(r * std::cos(0.5), r * std::sin(0.5)));
  if (out.size() < count) {
    const auto rest = Space::plane().sample(count - out.size(), seed, Region{radius});
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

std::vector<Point> chordal_sample(std::span<const Point> euclidean) {
  std::vector<Point> out{Point::infinity()};
  for (double r = 1e3; r <= 1e6; r *= 10.0) out.push_back(Point::of(r * std::cos(0.5), r * std::sin(0.5)));
  out.insert(out.end(), euclidean.begin(), euclidean.end());
  return out;
}

PairedVerdicts analyze_on_sphere(const System& planar, double epsilon, const SphereBudgets& budgets) {
  const auto flat = euclidean_plane_sample(budgets.sample_count, budgets.seed, budgets.euclidean_radius);
  const auto round = chordal_sample(flat);
  const System sphere = extend_map(planar);

  WindowSearch search = budgets.search;
  search.epsilon = epsilon;
  CapBudgets cap = budgets.cap;
  cap.closure.epsilon = epsilon;

  PairedVerdicts out;
  out.euclidean_ap = find_almost_period(planar, flat, search);
  out.euclidean_cap = classify_cap(planar, flat, epsilon, cap);
  out.chordal_ap = find_almost_period(sphere, round, search);
  out.chordal_cap = classify_cap(sphere, round, epsilon, cap);
  return out;
}

}  // namespace capdyn

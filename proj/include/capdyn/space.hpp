#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capdyn/point.hpp"

namespace capdyn {

enum class SpaceKind { circle, plane, disk, sphere, discrete, product, disjoint_union, subspace };

const char* to_string(SpaceKind kind);

/// Where a sampler draws from. Interpretation is per space: a planar radius
/// for the plane/disk/sphere, an upper integer bound for the discrete space.
struct Region {
  double radius = 1.0;
};

/// A metric space descriptor.
///
/// Spaces are cheap handles onto immutable shared state. Two spaces are the
/// same space when their labels agree.
class Space {
 public:
  struct Impl;

  /// Circle of circumference 2pi with the arc-length metric.
  static Space circle();
  /// Euclidean plane in Cartesian coordinates.
  static Space plane();
  /// Closed disk of the given radius in polar coordinates (r, theta) with the
  /// Euclidean metric. An infinite radius gives the plane in polar form.
  static Space disk(double radius = 1.0);
  /// Riemann sphere: the plane plus infinity with the chordal metric.
  static Space sphere();
  /// Positive integers with d(m, n) = 1 iff m != n.
  static Space discrete();
  /// Product of `count` circles with the max of arc-length metrics.
  static Space product_circles(int count);
  /// Disjoint union of `count` unit circles in R^2. Points are (index, angle);
  /// distance is the chord within a circle and 1 across circles.
  static Space disjoint_circles(int count);
  /// Unit circles at heights 1/n, n = 1..levels, plus the single point
  /// (0, base_angle), inside R x S^1 with the metric sqrt(dt^2 + chord^2).
  static Space shrinking_circles(int levels, double base_angle = 0.0);
  /// The circle restricted by a membership oracle.
  static Space circle_subspace(std::string label, std::function<bool(const Point&)> membership);

  SpaceKind kind() const;
  const std::string& label() const;
  std::uint8_t arity() const;

  /// Metric value. Throws std::invalid_argument on a point that is not
  /// representable in this space.
  double distance(const Point& p, const Point& q) const;

  std::vector<Point> sample(std::size_t count, std::uint64_t seed, Region region = {}) const;

  /// Up to `count` points at distance approximately `delta` from `x`, all
  /// inside the space. May be empty when `x` is isolated at that scale.
  std::vector<Point> ring(const Point& x, double delta, std::size_t count = 16) const;

  /// Whether the point lies in the represented space.
  bool contains(const Point& p) const;

  /// Limit-point oracle. Only some spaces carry one.
  bool has_membership() const;
  bool is_member(const Point& p) const;

  /// A representative point for a tight cluster.
  Point centroid(std::span<const Point> cluster) const;

  /// Dimension of a 1-Lipschitz embedding into Euclidean space, 0 when the
  /// space has none. Used for grid acceleration of nets.
  std::size_t embedding_dim() const;
  std::array<double, 4> embed(const Point& p) const;

  bool same_as(const Space& other) const { return label() == other.label(); }

  explicit Space(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Arc-length distance between two angles.
double arc_distance(double a, double b);
/// Chord length between two points of the unit circle given by angle.
double chord_distance(double a, double b);

}  // namespace capdyn

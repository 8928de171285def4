#pragma once

#include <cstdint>
#include <vector>

#include "capdyn/almost_period.hpp"

namespace capdyn {

/// Chordal metric on the Riemann sphere. Points flagged at_infinity stand for
/// the added point.
double chordal_distance(const Point& p, const Point& q);

/// The sphere Space that the extended maps act on.
Space sphere_space();

/// Extension of a planar homeomorphism to the sphere fixing infinity. Finite
/// points go through the original maps unchanged.
System extend_map(const System& planar);

struct SphereBudgets {
  WindowSearch search;
  CapBudgets cap;
  std::size_t sample_count = 64;
  std::uint64_t seed = 0;
  /// Largest radius of the Euclidean sample.
  double euclidean_radius = 100.0;
};

/// Euclidean sample: the ladder 1, 10, ... up to the radius, then uniform
/// points of the disk of that radius.
std::vector<Point> euclidean_plane_sample(std::size_t count, std::uint64_t seed, double radius);

/// The Euclidean sample with infinity and the radii 10^3 .. 10^6 added.
std::vector<Point> chordal_sample(std::span<const Point> euclidean);

struct PairedVerdicts {
  Verdict euclidean_ap;
  Verdict euclidean_cap;
  Verdict chordal_ap;
  Verdict chordal_cap;
};

/// Runs the almost-period search and the CAP classifier on the plane and on
/// its compactification over matched samples.
PairedVerdicts analyze_on_sphere(const System& planar, double epsilon, const SphereBudgets& budgets);

}  // namespace capdyn

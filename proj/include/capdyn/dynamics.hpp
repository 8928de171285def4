#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "capdyn/metric_core.hpp"

namespace capdyn {

using PointMap = std::function<Point(const Point&)>;

/// A homeomorphism of a space, given by its forward and inverse maps.
struct System {
  Space space;
  PointMap forward;
  PointMap inverse;
  std::string name;
};

/// h^n(x). Negative n applies the inverse. The value for a given (x, n) is
/// always computed along the same path (n single steps outward from 0), so
/// any detector that walks orbits incrementally reproduces it bit for bit.
Point iterate(const System& sys, const Point& x, long n);

/// [h^n(x) for n in n_min..n_max], each value bit-identical to iterate().
/// Throws std::invalid_argument when n_min > n_max.
std::vector<Point> orbit_segment(const System& sys, const Point& x, long n_min, long n_max);

/// Parameters shared by the orbit-closure approximations.
struct ClosureParams {
  double epsilon = 0.1;
  long budget = 10000;
  /// Quiet window for stabilization. 0 selects the adaptive window of ten
  /// times the current net size.
  long patience = 0;
};

/// An epsilon-net approximation of an orbit closure.
struct OrbitClosureApprox {
  FiniteCompactum net;
  std::vector<Point> base;
  /// Iterate exponent that produced each net point.
  std::vector<long> representative_index;
  /// Index into `base` of the orbit each net point came from.
  std::vector<std::size_t> representative_base;
  long iterates_used = 0;
  bool stabilized = false;
  /// Cluster representatives rejected by the membership oracle.
  std::vector<Point> escape_witnesses;
};

/// Epsilon-net of {h^n(x) : |n| <= m}, enumerated as n = 0, 1, -1, 2, -2, ...
/// stabilized = true once a full quiet window passes without a net insertion.
/// Enumeration stops there unless the space carries a membership oracle, in
/// which case the whole budget is used to fill the escape clusters.
OrbitClosureApprox orbit_closure_approx(const System& sys, const Point& x, const ClosureParams& params);

/// Same contract for the union of the orbits of every point of `b`.
OrbitClosureApprox compactum_orbit_closure(const System& sys, const FiniteCompactum& b, const ClosureParams& params);

/// Hausdorff distance between h(A) and A.
double check_invariance(const System& sys, const FiniteCompactum& a);

/// Max over `samples` of d(h^-1(h(x)), x).
double round_trip_error(const System& sys, std::span<const Point> samples);

}  // namespace capdyn

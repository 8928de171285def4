#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace capdyn {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGoldenRatio = std::numbers::phi;

/// Reduces an angle into [0, 2pi).
double mod2pi(double angle);

/// A point of one of the built-in spaces.
///
/// Coordinates are interpreted by the owning Space: an angle for the circle,
/// (x, y) for the plane, (r, theta) for the disk, an integer for the discrete
/// space, (height, angle) for the shrinking circles, (index, angle) for
/// disjoint unions of circles. The sphere uses (x, y) plus the
/// `at_infinity` flag.
struct Point {
  std::array<double, 4> c{};
  std::uint8_t dim = 0;
  bool at_infinity = false;

  static Point of(double a) { return Point{{a, 0, 0, 0}, 1, false}; }
  static Point of(double a, double b) { return Point{{a, b, 0, 0}, 2, false}; }
  static Point of(double a, double b, double c3) { return Point{{a, b, c3, 0}, 3, false}; }
  static Point infinity() { return Point{{0, 0, 0, 0}, 2, true}; }

  double operator[](std::size_t i) const { return c[i]; }
  double& operator[](std::size_t i) { return c[i]; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim != b.dim || a.at_infinity != b.at_infinity) return false;
    if (a.at_infinity) return true;
    for (std::size_t i = 0; i < a.dim; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
};

}  // namespace capdyn

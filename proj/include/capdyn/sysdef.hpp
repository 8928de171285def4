#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capdyn/dynamics.hpp"
#include "capdyn/expr.hpp"
#include "capdyn/verdict.hpp"

namespace capdyn {

/// Expectation keys used by fixtures.
namespace detector_key {
inline constexpr const char* almost_period = "find_almost_period";
inline constexpr const char* almost_period_chordal = "find_almost_period@chordal";
inline constexpr const char* cap = "classify_cap";
inline constexpr const char* cap_chordal = "classify_cap@chordal";
inline constexpr const char* equicontinuity = "equicontinuity";
}  // namespace detector_key

using Sampler = std::function<std::vector<Point>(std::size_t count, std::uint64_t seed)>;

struct FixtureDescriptor {
  std::string name;
  System system;
  /// Detector key to the status the example claims. Only Certified and
  /// Refuted appear.
  std::map<std::string, Status> expected;
  std::string notes;
  Sampler sampler;
  /// Compact set used by the CAP classifier in place of the sample.
  std::optional<FiniteCompactum> test_compactum;
};

/// Unknown fixture name. The message lists the registry.
class FixtureLookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Registered fixture names, in registry order. Parameterized families are
/// listed with one representative, e.g. "circle_rotation:3/8".
std::vector<std::string> fixture_names();

/// Looks up a fixture. "circle_rotation:P/Q" (or "circle_rotation P/Q")
/// builds the rotation by 2 pi P/Q; "circle_rotation:golden" and a decimal
/// "circle_rotation:A" build the rotation by 2 pi A. `shrinking_circles`
/// accepts ":THETA" for the base angle.
FixtureDescriptor fixture(std::string_view name);

/// f_n on the positive integers: k -> 2k for k <= n, n + j -> 2j - 1 for
/// 1 <= j <= n, and the identity above 2n.
long doubling_bijection_value(long n, long k);
System doubling_bijection(long n);

/// A system file that failed to load: syntax, unknown header, or a
/// round-trip failure.
class SystemParseError : public std::runtime_error {
 public:
  SystemParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParsedSystem {
  System system;
  std::string mode;
  /// Worst d(inverse(forward(p)), p) over the load-time check points.
  double round_trip = 0;
  Sampler sampler;
};

/// Parses a system file:
///
///   name: disk_twist
///   mode: polar            (cartesian | polar)
///   radius: 1              (polar only; the disk radius, default unbounded)
///   let: a = 2*pi/phi      (any number of named constants)
///   forward: r, mod2pi(theta + r)
///   inverse: r, mod2pi(theta - r)
///
/// Blank lines and lines starting with '#' are skipped. The maps are checked
/// for round trip on 1000 seeded points and rejected above 1e-6.
ParsedSystem parse_system(std::string_view text);

}  // namespace capdyn

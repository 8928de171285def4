#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capdyn/dynamics.hpp"

namespace capdyn {

/// Raised by decompose when an orbit closure leaves the space.
class NonCompactError : public std::runtime_error {
 public:
  NonCompactError(const std::string& what, std::size_t sample_index, std::vector<Point> witnesses)
      : std::runtime_error(what), sample_index_(sample_index), witnesses_(std::move(witnesses)) {}
  std::size_t sample_index() const { return sample_index_; }
  const std::vector<Point>& witnesses() const { return witnesses_; }

 private:
  std::size_t sample_index_;
  std::vector<Point> witnesses_;
};

/// Partition of a sample into orbit-closure classes.
struct Decomposition {
  Space space;
  std::vector<Point> sample;
  std::vector<OrbitClosureApprox> classes;
  /// Class id of every sample point.
  std::vector<std::size_t> assignment;
  double epsilon = 0;
};

/// Takes the first unassigned sample point, builds its orbit closure, and
/// assigns every unassigned sample point within epsilon of that net to the
/// new class. Repeats until the sample is exhausted.
Decomposition decompose(const System& sys, std::span<const Point> sample, const ClosureParams& params);

struct QuotientDistance {
  double hausdorff = 0;
  double min_pair = 0;
  /// hausdorff - min_pair; zero for isometric actions
  double difference = 0;
};

QuotientDistance quotient_distance(const OrbitClosureApprox& c1, const OrbitClosureApprox& c2);

/// max over index pairs of quotient distance between the classes of x and y
/// minus d(x, y).
double check_projection_nonexpansive(const Decomposition& dec,
                                     std::span<const std::pair<std::size_t, std::size_t>> pairs);

/// Multiplication table on the net of one orbit closure. Net point k stands
/// for h^(index[k])(x); the product of k and l is the net point nearest to
/// h^(index[k] + index[l])(x).
struct GroupTable {
  std::vector<long> index;
  std::vector<Point> elements;
  std::vector<std::vector<std::size_t>> product;
  std::size_t identity = 0;
  /// max distance from h^(a+b)(x) to its nearest net point
  double closure_residual = 0;
  /// max d(h^a(h^b x), h^b(h^a x))
  double commutativity_residual = 0;
  /// max distance from h^(-a)(x) to its nearest net point
  double inverse_residual = 0;
  /// d(x, identity element)
  double identity_residual = 0;
  std::size_t permutation_rows = 0;
};

/// Throws std::runtime_error when the orbit closure does not stabilize.
GroupTable orbit_group_table(const System& sys, const Point& x, const ClosureParams& params);

enum class ClassKind { fixed_point, periodic, infinite_minimal };

const char* to_string(ClassKind kind);

struct ClassShape {
  ClassKind kind = ClassKind::infinite_minimal;
  long period = 0;  ///< minimal period for periodic classes, 1 for fixed points
};

ClassShape classify_class(const OrbitClosureApprox& c, const System& sys);

}  // namespace capdyn

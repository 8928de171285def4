#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capdyn/dynamics.hpp"

namespace capdyn {

/// Raised when the truncated sup runs past its guard, i.e. the orbits of the
/// pair do not look bounded.
class UnboundedOrbitError : public std::runtime_error {
 public:
  UnboundedOrbitError(const std::string& what, long index, double value)
      : std::runtime_error(what), index_(index), value_(value) {}
  long index() const { return index_; }
  double value() const { return value_; }

 private:
  long index_;
  double value_;
};

/// d*(x, y) = max over |n| <= N of d(h^n x, h^n y).
class TruncatedInvariantMetric {
 public:
  struct Value {
    double value;
    long argmax;  ///< exponent attaining the max; smallest |n| wins ties, then n >= 0
  };

  TruncatedInvariantMetric(System sys, long truncation, double guard_factor = 1e6);

  /// Throws UnboundedOrbitError when a term exceeds guard_factor * d(x, y).
  Value evaluate(const Point& x, const Point& y) const;
  double operator()(const Point& x, const Point& y) const { return evaluate(x, y).value; }

  Metric as_metric() const;

  long truncation() const { return truncation_; }
  const System& system() const { return sys_; }

 private:
  System sys_;
  long truncation_;
  double guard_factor_;
};

/// max over pairs of |metric(h x, h y) - metric(x, y)|.
double isometry_residual(const System& sys, const Metric& metric, std::span<const std::pair<Point, Point>> pairs);

/// Worst violations of the metric axioms over every triple of the sample.
struct AxiomReport {
  double identity = 0;   ///< max |d(p, p)|
  double negativity = 0; ///< max(-d(p, q), 0)
  double symmetry = 0;   ///< max |d(p, q) - d(q, p)|
  double triangle = 0;   ///< max(d(p, r) - d(p, q) - d(q, r), 0)
  std::size_t triples = 0;

  double worst() const;
};

AxiomReport metric_axioms_check(const Metric& metric, std::span<const Point> sample);

/// Axiom check over `triples` random index triples drawn from the sample.
AxiomReport metric_axioms_check_random(const Metric& metric, std::span<const Point> sample, std::size_t triples,
                                       std::uint64_t seed);

struct ModulusRow {
  std::size_t point = 0;
  double delta = 0;
  /// sup of d*(x, y) over probes with d(x, y) ~ delta
  double forward = 0;
  /// sup of d(x, y) over probes with d*(x, y) <= delta; 0 when no probe qualifies
  double backward = 0;
};

struct ModulusTable {
  std::vector<ModulusRow> rows;
  /// One flag per sample point: the forward modulus does not shrink with delta.
  std::vector<bool> divergent;
};

/// Probes both directions of the identity between (X, d) and (X, d*).
/// `radii` must be strictly decreasing.
ModulusTable topology_equivalence_probe(const System& sys, long truncation, std::span<const Point> sample,
                                        std::span<const double> radii, std::size_t ring_count = 16);

}  // namespace capdyn

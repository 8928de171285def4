#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "capdyn/dynamics.hpp"

namespace capdyn {

using Sample = std::shared_ptr<const std::vector<Point>>;

Sample make_sample(std::vector<Point> points);

/// Snapshot of h^n on the sample, computed by walking outward from 0.
MapSnapshot take_snapshot(const System& sys, const Sample& sample, long n);

/// Finite epsilon-net of {h^n} restricted to a sample, in the sup distance.
struct ClosureNet {
  Space space;
  Sample sample;
  std::vector<MapSnapshot> snapshots;
  double epsilon = 0;
  long n_scanned = 0;
  bool stabilized = false;
  /// Net size after each scanned exponent, in scan order 0, 1, -1, 2, -2, ...
  std::vector<std::size_t> size_trajectory;
};

/// Scans n = 0, 1, -1, 2, -2, ... while |n| <= n_max, keeping a snapshot when
/// it is more than epsilon from every kept one. Stabilized once `patience`
/// consecutive exponents add nothing.
ClosureNet enumerate_closure(const System& sys, const Sample& sample, double epsilon, long n_max, long patience);

/// h^(f.index) applied to g's values. Requires f to be a pure iterate.
MapSnapshot compose_snapshots(const System& sys, const MapSnapshot& f, const MapSnapshot& g);

struct GroupLawReport {
  double closure = 0;        ///< max distance of a product to the nearest member
  double inverse = 0;        ///< max distance of an inverse to the nearest member
  double commutativity = 0;  ///< max sup distance between fg and gf
  std::size_t pairs = 0;
};

GroupLawReport check_group_laws(const ClosureNet& net, const System& sys);

struct IsometryDefectReport {
  /// max over members and pairs of |d(f x, f y) - d(x, y)|
  double defect = 0;
  /// max over members of the Hausdorff distance between f(sample) and sample
  double surjectivity_gap = 0;
};

/// Isometry defect of each snapshot on index pairs into the shared sample,
/// measured with `metric`.
IsometryDefectReport check_limit_isometries(const Metric& metric, std::span<const MapSnapshot> members,
                                            std::span<const std::pair<std::size_t, std::size_t>> pairs);

IsometryDefectReport check_limit_isometries(const ClosureNet& net,
                                            std::span<const std::pair<std::size_t, std::size_t>> pairs);

}  // namespace capdyn

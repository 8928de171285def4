#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "capdyn/point.hpp"
#include "capdyn/space.hpp"

namespace capdyn {

using Metric = std::function<double(const Point&, const Point&)>;

/// Absolute tolerance used for every exact-zero assertion.
inline constexpr double kExactTolerance = 1e-12;

/// A finite point cloud standing in for a compact set, together with the
/// resolution at which it approximates that set.
struct FiniteCompactum {
  Space space;
  std::vector<Point> points;
  double resolution = 0.0;

  /// Throws std::invalid_argument when `points` is empty.
  FiniteCompactum(Space s, std::vector<Point> pts, double res = 0.0);
};

/// Hausdorff distance between two finite sets by the direct double loop.
/// Throws std::domain_error when the sets live in different spaces.
double hausdorff_distance(const FiniteCompactum& a, const FiniteCompactum& b);

/// Greedy net in input order: a point is kept when it is farther than
/// `epsilon` from every point kept so far. Every input point ends up within
/// `epsilon` of the output, and output points are pairwise > `epsilon` apart.
FiniteCompactum epsilon_net(const Space& space, std::span<const Point> points, double epsilon);

/// Incrementally built point set with radius queries.
///
/// When the space has a 1-Lipschitz Euclidean embedding, candidates come from
/// a uniform grid over the embedding with cell size `cell`; otherwise every
/// stored point is scanned. Either way the final comparison uses the space's
/// own metric.
class NetIndex {
 public:
  NetIndex(Space space, double cell);

  struct Hit {
    std::size_t index;
    double distance;
  };

  /// Nearest stored point within `radius`. Ties go to the earlier insertion.
  std::optional<Hit> nearest_within(const Point& p, double radius) const;

  /// Indices of every stored point within `radius`, ascending.
  std::vector<std::size_t> all_within(const Point& p, double radius) const;

  /// Inserts unconditionally and returns the new index.
  std::size_t insert(const Point& p);

  /// Inserts `p` only when it is farther than `radius` from all stored points.
  bool insert_if_far(const Point& p, double radius);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Space& space() const { return space_; }

 private:
  template <typename Visit>
  void for_candidates(const Point& p, double radius, Visit&& visit) const;
  std::array<std::int64_t, 4> cell_of(const Point& p) const;
  static std::uint64_t hash_cell(const std::array<std::int64_t, 4>& c);

  Space space_;
  double cell_;
  std::size_t dims_;
  std::vector<Point> points_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

/// The restriction of a map to a fixed finite sample.
struct MapSnapshot {
  std::shared_ptr<const std::vector<Point>> sample;
  std::vector<Point> values;
  /// Iterate exponent when the snapshot is h^n; empty for other maps.
  std::optional<long> index;
};

/// max over the shared sample of d(f(x), g(x)). Throws std::domain_error when
/// the snapshots are taken on different samples.
double sup_map_distance(const Space& space, const MapSnapshot& f, const MapSnapshot& g);

/// Same as sup_map_distance but stops as soon as the running max exceeds
/// `bound`; the return value is then only known to be > bound.
double sup_map_distance_bounded(const Space& space, const MapSnapshot& f, const MapSnapshot& g, double bound);

}  // namespace capdyn

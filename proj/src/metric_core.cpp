#include "capdyn/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capdyn {

FiniteCompactum::FiniteCompactum(Space s, std::vector<Point> pts, double res)
    : space(std::move(s)), points(std::move(pts)), resolution(res) {
  if (points.empty()) throw std::invalid_argument("a finite compactum needs at least one point");
}

namespace {

double directed_hausdorff(const Space& space, std::span<const Point> from, std::span<const Point> to) {
  double worst = 0.0;
  for (const auto& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : to) {
      best = std::min(best, space.distance(a, b));
      if (best <= worst) break;  // cannot raise the max any more
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const FiniteCompactum& a, const FiniteCompactum& b) {
  if (!a.space.same_as(b.space))
    throw std::domain_error("hausdorff_distance across spaces " + a.space.label() + " and " + b.space.label());
  return std::max(directed_hausdorff(a.space, a.points, b.points), directed_hausdorff(a.space, b.points, a.points));
}

FiniteCompactum epsilon_net(const Space& space, std::span<const Point> points, double epsilon) {
  if (points.empty()) throw std::invalid_argument("epsilon_net of an empty point list");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon_net needs a positive epsilon");
  NetIndex index(space, epsilon);
  for (const auto& p : points) index.insert_if_far(p, epsilon);
  return FiniteCompactum(space, index.points(), epsilon);
}

NetIndex::NetIndex(Space space, double cell) : space_(std::move(space)), cell_(cell), dims_(space_.embedding_dim()) {
  if (!(cell_ > 0.0)) dims_ = 0;
}

std::array<std::int64_t, 4> NetIndex::cell_of(const Point& p) const {
  const auto e = space_.embed(p);
  std::array<std::int64_t, 4> c{};
  for (std::size_t i = 0; i < dims_; ++i) c[i] = static_cast<std::int64_t>(std::floor(e[i] / cell_));
  return c;
}

std::uint64_t NetIndex::hash_cell(const std::array<std::int64_t, 4>& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : c) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename Visit>
void NetIndex::for_candidates(const Point& p, double radius, Visit&& visit) const {
  if (dims_ == 0 || radius > cell_) {
    for (std::size_t i = 0; i < points_.size(); ++i) visit(i);
    return;
  }
  const auto base = cell_of(p);
  std::array<std::int64_t, 4> probe{};
  const std::size_t total = dims_ == 1 ? 3 : dims_ == 2 ? 9 : dims_ == 3 ? 27 : 81;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < dims_; ++i) {
      probe[i] = base[i] + static_cast<std::int64_t>(rest % 3) - 1;
      rest /= 3;
    }
    auto it = grid_.find(hash_cell(probe));
    if (it == grid_.end()) continue;
    for (auto i : it->second) visit(i);
  }
}

std::optional<NetIndex::Hit> NetIndex::nearest_within(const Point& p, double radius) const {
  std::optional<Hit> best;
  for_candidates(p, radius, [&](std::size_t i) {
    const double d = space_.distance(p, points_[i]);
    if (d > radius) return;
    if (!best || d < best->distance || (d == best->distance && i < best->index)) best = Hit{i, d};
  });
  return best;
}

std::vector<std::size_t> NetIndex::all_within(const Point& p, double radius) const {
  std::vector<std::size_t> out;
  for_candidates(p, radius, [&](std::size_t i) {
    if (space_.distance(p, points_[i]) <= radius) out.push_back(i);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t NetIndex::insert(const Point& p) {
  points_.push_back(p);
  if (dims_ > 0) grid_[hash_cell(cell_of(p))].push_back(points_.size() - 1);
  return points_.size() - 1;
}

bool NetIndex::insert_if_far(const Point& p, double radius) {
  if (nearest_within(p, radius)) return false;
  insert(p);
  return true;
}

namespace {

void require_same_sample(const MapSnapshot& f, const MapSnapshot& g) {
  if (!f.sample || !g.sample) throw std::domain_error("snapshot without a sample");
  if (f.values.size() != f.sample->size() || g.values.size() != g.sample->size())
    throw std::domain_error("snapshot values do not match its sample");
  if (f.sample == g.sample) return;
  if (*f.sample != *g.sample) throw std::domain_error("snapshots taken on different samples");
}

}  // namespace

double sup_map_distance(const Space& space, const MapSnapshot& f, const MapSnapshot& g) {
  return sup_map_distance_bounded(space, f, g, std::numeric_limits<double>::infinity());
}

double sup_map_distance_bounded(const Space& space, const MapSnapshot& f, const MapSnapshot& g, double bound) {
  require_same_sample(f, g);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    worst = std::max(worst, space.distance(f.values[k], g.values[k]));
    if (worst > bound) break;
  }
  return worst;
}

}  // namespace capdyn

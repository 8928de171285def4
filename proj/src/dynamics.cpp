#include "capdyn/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace capdyn {

Point iterate(const System& sys, const Point& x, long n) {
  Point p = x;
  if (n >= 0) {
    for (long i = 0; i < n; ++i) p = sys.forward(p);
  } else {
    for (long i = 0; i < -n; ++i) p = sys.inverse(p);
  }
  return p;
}

std::vector<Point> orbit_segment(const System& sys, const Point& x, long n_min, long n_max) {
  if (n_min > n_max) throw std::invalid_argument("orbit_segment needs n_min <= n_max");
  std::vector<Point> out(static_cast<std::size_t>(n_max - n_min + 1));
  auto at = [&](long n) -> Point& { return out[static_cast<std::size_t>(n - n_min)]; };
  // Walk outward from 0 so every entry matches iterate() exactly.
  if (n_max >= 0) {
    Point p = x;
    for (long n = 0; n <= n_max; ++n) {
      if (n > 0) p = sys.forward(p);
      if (n >= n_min) at(n) = p;
    }
  }
  if (n_min < 0) {
    Point p = x;
    for (long n = 0; n >= n_min; --n) {
      if (n < 0) p = sys.inverse(p);
      if (n <= n_max) at(n) = p;
    }
  }
  return out;
}

namespace {

constexpr std::size_t kClusterKeep = 64;
constexpr std::size_t kMaxEscapeWitnesses = 8;

class ClosureBuilder {
 public:
  ClosureBuilder(const System& sys, const ClosureParams& params)
      : sys_(sys), params_(params), index_(sys.space, params.epsilon) {
    if (!(params.epsilon > 0.0)) throw std::invalid_argument("orbit closure needs a positive epsilon");
    if (params.budget < 1) throw std::invalid_argument("orbit closure needs a positive budget");
    if (params.patience < 0 || params.patience > params.budget)
      throw std::invalid_argument("orbit closure needs budget >= patience >= 0");
  }

  OrbitClosureApprox run(std::span<const Point> base) {
    std::vector<Point> fwd(base.begin(), base.end());
    std::vector<Point> bwd(base.begin(), base.end());
    for (std::size_t k = 0; k < base.size(); ++k) visit(fwd[k], 0, k);

    long quiet = 0;
    long used = 0;
    bool stabilized = false;
    for (long m = 1; m <= params_.budget; ++m) {
      bool inserted = false;
      for (std::size_t k = 0; k < base.size(); ++k) {
        fwd[k] = sys_.forward(fwd[k]);
        inserted |= visit(fwd[k], m, k);
        bwd[k] = sys_.inverse(bwd[k]);
        inserted |= visit(bwd[k], -m, k);
      }
      used = m;
      quiet = inserted ? 0 : quiet + 1;
      stabilized = quiet >= window();
      // Escape clusters only fill up with the whole budget, so spaces with a
      // membership oracle keep going.
      if (stabilized && !sys_.space.has_membership()) break;
    }

    OrbitClosureApprox out{FiniteCompactum(sys_.space, index_.points(), params_.epsilon),
                           std::vector<Point>(base.begin(), base.end()),
                           rep_index_,
                           rep_base_,
                           used,
                           stabilized,
                           {}};
    if (sys_.space.has_membership()) out.escape_witnesses = escapes();
    return out;
  }

 private:
  long window() const {
    if (params_.patience > 0) return params_.patience;
    return std::max<long>(1, 10 * static_cast<long>(index_.size()));
  }

  std::size_t cluster_threshold() const {
    return static_cast<std::size_t>(params_.patience > 0 ? params_.patience : 10);
  }

  bool visit(const Point& p, long n, std::size_t base_id) {
    const double eps = params_.epsilon;
    auto hit = index_.nearest_within(p, eps);
    if (!hit) {
      index_.insert(p);
      rep_index_.push_back(n);
      rep_base_.push_back(base_id);
      clusters_.emplace_back();
      counts_.push_back(0);
      hit = NetIndex::Hit{index_.size() - 1, 0.0};
      record(hit->index, p);
      return true;
    }
    // Members of one cluster lie within eps/8 of its net point, hence within
    // eps/4 of each other.
    if (hit->distance <= eps / 8.0) record(hit->index, p);
    return false;
  }

  void record(std::size_t cluster, const Point& p) {
    ++counts_[cluster];
    if (clusters_[cluster].size() < kClusterKeep) clusters_[cluster].push_back(p);
  }

  std::vector<Point> escapes() const {
    std::vector<Point> out;
    for (std::size_t i = 0; i < clusters_.size() && out.size() < kMaxEscapeWitnesses; ++i) {
      if (counts_[i] < cluster_threshold()) continue;
      const Point rep = sys_.space.centroid(clusters_[i]);
      if (!sys_.space.is_member(rep)) out.push_back(rep);
    }
    return out;
  }

  const System& sys_;
  ClosureParams params_;
  NetIndex index_;
  std::vector<long> rep_index_;
  std::vector<std::size_t> rep_base_;
  std::vector<std::vector<Point>> clusters_;
  std::vector<std::size_t> counts_;
};

}  // namespace

OrbitClosureApprox orbit_closure_approx(const System& sys, const Point& x, const ClosureParams& params) {
  ClosureBuilder builder(sys, params);
  const Point base[] = {x};
  return builder.run(base);
}

OrbitClosureApprox compactum_orbit_closure(const System& sys, const FiniteCompactum& b, const ClosureParams& params) {
  ClosureBuilder builder(sys, params);
  return builder.run(b.points);
}

double check_invariance(const System& sys, const FiniteCompactum& a) {
  std::vector<Point> image;
  image.reserve(a.points.size());
  for (const auto& p : a.points) image.push_back(sys.forward(p));
  return hausdorff_distance(FiniteCompactum(a.space, std::move(image), a.resolution), a);
}

double round_trip_error(const System& sys, std::span<const Point> samples) {
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, sys.space.distance(sys.inverse(sys.forward(x)), x));
  return worst;
}

}  // namespace capdyn

#include "capdyn/group_closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capdyn {

Sample make_sample(std::vector<Point> points) {
  return std::make_shared<const std::vector<Point>>(std::move(points));
}

MapSnapshot take_snapshot(const System& sys, const Sample& sample, long n) {
  MapSnapshot s{sample, {}, n};
  s.values.reserve(sample->size());
  for (const auto& x : *sample) s.values.push_back(iterate(sys, x, n));
  return s;
}

namespace {

// Nets of snapshots, prefiltered on the image of one pivot sample point: a
// member within epsilon in sup distance is within epsilon there too.
class SnapshotNet {
 public:
  SnapshotNet(Space space, double epsilon, std::size_t pivot)
      : space_(space), epsilon_(epsilon), pivot_(pivot), first_(std::move(space), epsilon) {}

  bool insert_if_far(MapSnapshot s) {
    for (auto i : first_.all_within(s.values[pivot_], epsilon_))
      if (sup_map_distance_bounded(space_, members_[i], s, epsilon_) <= epsilon_) return false;
    first_.insert(s.values[pivot_]);
    members_.push_back(std::move(s));
    return true;
  }

  std::vector<MapSnapshot> take() { return std::move(members_); }

 private:
  Space space_;
  double epsilon_;
  std::size_t pivot_;
  NetIndex first_;
  std::vector<MapSnapshot> members_;
};

double nearest_member(const Space& space, std::span<const MapSnapshot> members, const MapSnapshot& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : members) best = std::min(best, sup_map_distance_bounded(space, m, s, best));
  return best;
}

}  // namespace

ClosureNet enumerate_closure(const System& sys, const Sample& sample, double epsilon, long n_max, long patience) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("enumerate_closure needs a positive epsilon");
  if (!sample || sample->empty()) throw std::invalid_argument("enumerate_closure needs a nonempty sample");
  if (patience < 1) throw std::invalid_argument("enumerate_closure needs patience >= 1");

  // Pivot on the point that moves most in one step; a fixed pivot would put
  // every snapshot in the same bucket.
  std::size_t pivot = 0;
  double moved = -1.0;
  for (std::size_t k = 0; k < sample->size(); ++k) {
    const double d = sys.space.distance(sys.forward((*sample)[k]), (*sample)[k]);
    if (d > moved) {
      moved = d;
      pivot = k;
    }
  }
  SnapshotNet net(sys.space, epsilon, pivot);
  ClosureNet out{sys.space, sample, {}, epsilon, 0, false, {}};

  std::vector<Point> fwd(*sample), bwd(*sample);
  long quiet = 0;
  std::size_t count = 0;
  auto scan = [&](const std::vector<Point>& values, long n) {
    const bool added = net.insert_if_far(MapSnapshot{sample, values, n});
    if (added) ++count;
    ++out.n_scanned;
    out.size_trajectory.push_back(count);
    quiet = added ? 0 : quiet + 1;
    return quiet >= patience;
  };

  bool done = scan(fwd, 0);
  for (long m = 1; m <= n_max && !done; ++m) {
    for (auto& p : fwd) p = sys.forward(p);
    done = scan(fwd, m);
    if (done) break;
    for (auto& p : bwd) p = sys.inverse(p);
    done = scan(bwd, -m);
  }
  out.stabilized = done;
  out.snapshots = net.take();
  return out;
}

MapSnapshot compose_snapshots(const System& sys, const MapSnapshot& f, const MapSnapshot& g) {
  if (!f.index) throw std::invalid_argument("compose_snapshots needs f to be a pure iterate");
  if (f.sample != g.sample && (!f.sample || !g.sample || *f.sample != *g.sample))
    throw std::domain_error("snapshots taken on different samples");
  MapSnapshot out{g.sample, {}, std::nullopt};
  out.values.reserve(g.values.size());
  for (const auto& v : g.values) out.values.push_back(iterate(sys, v, *f.index));
  if (g.index) out.index = *f.index + *g.index;
  return out;
}

GroupLawReport check_group_laws(const ClosureNet& net, const System& sys) {
  GroupLawReport r;
  const auto& members = net.snapshots;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& f = members[i];
    const auto inverse = take_snapshot(sys, net.sample, -*f.index);
    r.inverse = std::max(r.inverse, nearest_member(net.space, members, inverse));
    for (std::size_t j = i; j < members.size(); ++j) {
      const auto& g = members[j];
      const auto fg = compose_snapshots(sys, f, g);
      const auto gf = compose_snapshots(sys, g, f);
      r.closure = std::max({r.closure, nearest_member(net.space, members, fg), nearest_member(net.space, members, gf)});
      r.commutativity = std::max(r.commutativity, sup_map_distance(net.space, fg, gf));
      ++r.pairs;
    }
  }
  return r;
}

IsometryDefectReport check_limit_isometries(const Metric& metric, std::span<const MapSnapshot> members,
                                            std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  IsometryDefectReport r;
  for (const auto& f : members) {
    const auto& xs = *f.sample;
    for (const auto& [i, j] : pairs)
      r.defect = std::max(r.defect, std::abs(metric(f.values[i], f.values[j]) - metric(xs[i], xs[j])));

    auto directed = [&](const std::vector<Point>& from, const std::vector<Point>& to) {
      double worst = 0.0;
      for (const auto& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : to) best = std::min(best, metric(a, b));
        worst = std::max(worst, best);
      }
      return worst;
    };
    r.surjectivity_gap = std::max({r.surjectivity_gap, directed(f.values, xs), directed(xs, f.values)});
  }
  return r;
}

IsometryDefectReport check_limit_isometries(const ClosureNet& net,
                                            std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  const Space space = net.space;
  return check_limit_isometries([space](const Point& a, const Point& b) { return space.distance(a, b); },
                                net.snapshots, pairs);
}

}  // namespace capdyn

#include "capdyn/decomposition.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace capdyn {

Decomposition decompose(const System& sys, std::span<const Point> sample, const ClosureParams& params) {
  constexpr auto unassigned = std::numeric_limits<std::size_t>::max();
  Decomposition dec{sys.space, std::vector<Point>(sample.begin(), sample.end()), {}, {}, params.epsilon};
  dec.assignment.assign(sample.size(), unassigned);

  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (dec.assignment[i] != unassigned) continue;
    auto closure = orbit_closure_approx(sys, sample[i], params);
    if (!closure.escape_witnesses.empty())
      throw NonCompactError("orbit closure of sample point " + std::to_string(i) + " escapes the space", i,
                            closure.escape_witnesses);
    const std::size_t id = dec.classes.size();
    NetIndex index(sys.space, params.epsilon);
    for (const auto& p : closure.net.points) index.insert(p);
    dec.assignment[i] = id;
    for (std::size_t j = i + 1; j < sample.size(); ++j)
      if (dec.assignment[j] == unassigned && index.nearest_within(sample[j], params.epsilon)) dec.assignment[j] = id;
    dec.classes.push_back(std::move(closure));
  }
  return dec;
}

QuotientDistance quotient_distance(const OrbitClosureApprox& c1, const OrbitClosureApprox& c2) {
  QuotientDistance q;
  q.hausdorff = hausdorff_distance(c1.net, c2.net);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : c1.net.points)
    for (const auto& w : c2.net.points) best = std::min(best, c1.net.space.distance(z, w));
  q.min_pair = best;
  q.difference = q.hausdorff - q.min_pair;
  return q;
}

double check_projection_nonexpansive(const Decomposition& dec,
                                     std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  const std::size_t k = dec.classes.size();
  std::vector<double> cache(k * k, -1.0);
  auto quotient = [&](std::size_t a, std::size_t b) {
    if (a == b) return 0.0;
    double& slot = cache[a * k + b];
    if (slot < 0) slot = cache[b * k + a] = hausdorff_distance(dec.classes[a].net, dec.classes[b].net);
    return slot;
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : pairs) {
    const double v = quotient(dec.assignment[i], dec.assignment[j]) - dec.space.distance(dec.sample[i], dec.sample[j]);
    worst = std::max(worst, v);
  }
  return worst;
}

GroupTable orbit_group_table(const System& sys, const Point& x, const ClosureParams& params) {
  const auto closure = orbit_closure_approx(sys, x, params);
  if (!closure.stabilized) throw std::runtime_error("orbit closure did not stabilize; no group table");

  GroupTable t;
  t.index = closure.representative_index;
  t.elements = closure.net.points;
  const std::size_t n = t.elements.size();

  NetIndex net(sys.space, params.epsilon);
  for (const auto& p : t.elements) net.insert(p);
  // Nearest net point; the grid only answers within epsilon, so fall back to
  // a full scan beyond that.
  auto nearest = [&](const Point& p) {
    if (auto hit = net.nearest_within(p, params.epsilon)) return *hit;
    NetIndex::Hit best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < n; ++k) {
      const double d = sys.space.distance(p, t.elements[k]);
      if (d < best.distance) best = {k, d};
    }
    return best;
  };

  const auto id = nearest(x);
  t.identity = id.index;
  t.identity_residual = id.distance;

  t.product.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    const Point inv = iterate(sys, x, -t.index[a]);
    t.inverse_residual = std::max(t.inverse_residual, nearest(inv).distance);
    for (std::size_t b = 0; b < n; ++b) {
      const Point ab = iterate(sys, x, t.index[a] + t.index[b]);
      const auto hit = nearest(ab);
      t.product[a][b] = hit.index;
      t.closure_residual = std::max(t.closure_residual, hit.distance);
      if (b > a) {
        const Point lhs = iterate(sys, t.elements[b], t.index[a]);
        const Point rhs = iterate(sys, t.elements[a], t.index[b]);
        t.commutativity_residual = std::max(t.commutativity_residual, sys.space.distance(lhs, rhs));
      }
    }
    const std::set<std::size_t> row(t.product[a].begin(), t.product[a].end());
    if (row.size() == n) ++t.permutation_rows;
  }
  return t;
}

const char* to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::fixed_point: return "fixed_point";
    case ClassKind::periodic: return "periodic";
    case ClassKind::infinite_minimal: return "infinite_minimal";
  }
  return "infinite_minimal";
}

ClassShape classify_class(const OrbitClosureApprox& c, const System& sys) {
  const Point& base = c.base.front();
  const std::size_t size = c.net.points.size();
  if (size == 1 && sys.space.distance(sys.forward(base), base) <= kExactTolerance) return {ClassKind::fixed_point, 1};
  Point p = base;
  for (long k = 1; k <= static_cast<long>(size); ++k) {
    p = sys.forward(p);
    if (sys.space.distance(p, base) <= 1e-9) return {k == 1 ? ClassKind::fixed_point : ClassKind::periodic, k};
  }
  return {ClassKind::infinite_minimal, 0};
}

}  // namespace capdyn

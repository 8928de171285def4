#include "capdyn/invariant_metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace capdyn {

TruncatedInvariantMetric::TruncatedInvariantMetric(System sys, long truncation, double guard_factor)
    : sys_(std::move(sys)), truncation_(truncation), guard_factor_(guard_factor) {
  if (truncation_ < 0) throw std::invalid_argument("truncation must be nonnegative");
}

TruncatedInvariantMetric::Value TruncatedInvariantMetric::evaluate(const Point& x, const Point& y) const {
  const Space& space = sys_.space;
  const double base = space.distance(x, y);
  Value best{base, 0};
  if (base == 0.0 && x == y) return best;
  const double guard = guard_factor_ * base;
  auto check = [&](double d, long n) {
    if (d > guard)
      throw UnboundedOrbitError("invariant metric exceeded its guard; orbits look unbounded", n, d);
    if (d > best.value) best = {d, n};
  };
  Point fx = x, fy = y, bx = x, by = y;
  for (long n = 1; n <= truncation_; ++n) {
    fx = sys_.forward(fx);
    fy = sys_.forward(fy);
    bx = sys_.inverse(bx);
    by = sys_.inverse(by);
    check(space.distance(fx, fy), n);
    check(space.distance(bx, by), -n);
  }
  return best;
}

Metric TruncatedInvariantMetric::as_metric() const {
  return [self = *this](const Point& x, const Point& y) { return self(x, y); };
}

double isometry_residual(const System& sys, const Metric& metric, std::span<const std::pair<Point, Point>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("isometry_residual needs at least one pair");
  double worst = 0.0;
  for (const auto& [x, y] : pairs)
    worst = std::max(worst, std::abs(metric(sys.forward(x), sys.forward(y)) - metric(x, y)));
  return worst;
}

double AxiomReport::worst() const { return std::max({identity, negativity, symmetry, triangle}); }

namespace {

std::vector<double> distance_matrix(const Metric& metric, std::span<const Point> sample) {
  const std::size_t n = sample.size();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = metric(sample[i], sample[j]);
  return m;
}

void accumulate_pairs(AxiomReport& r, const std::vector<double>& m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    r.identity = std::max(r.identity, std::abs(m[i * n + i]));
    for (std::size_t j = 0; j < n; ++j) {
      r.negativity = std::max(r.negativity, -m[i * n + j]);
      r.symmetry = std::max(r.symmetry, std::abs(m[i * n + j] - m[j * n + i]));
    }
  }
}

}  // namespace

AxiomReport metric_axioms_check(const Metric& metric, std::span<const Point> sample) {
  AxiomReport r;
  const std::size_t n = sample.size();
  const auto m = distance_matrix(metric, sample);
  accumulate_pairs(r, m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        r.triangle = std::max(r.triangle, m[i * n + k] - m[i * n + j] - m[j * n + k]);
  r.triples = n * n * n;
  return r;
}

AxiomReport metric_axioms_check_random(const Metric& metric, std::span<const Point> sample, std::size_t triples,
                                       std::uint64_t seed) {
  AxiomReport r;
  const std::size_t n = sample.size();
  if (n == 0) return r;
  const auto m = distance_matrix(metric, sample);
  accumulate_pairs(r, m, n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < triples; ++t) {
    const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    r.triangle = std::max(r.triangle, m[i * n + k] - m[i * n + j] - m[j * n + k]);
  }
  r.triples = triples;
  return r;
}

ModulusTable topology_equivalence_probe(const System& sys, long truncation, std::span<const Point> sample,
                                        std::span<const double> radii, std::size_t ring_count) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1])) throw std::invalid_argument("probe radii must be strictly decreasing");
  const TruncatedInvariantMetric dstar(sys, truncation);
  ModulusTable table;
  for (std::size_t p = 0; p < sample.size(); ++p) {
    const Point& x = sample[p];
    struct Probe {
      double ring_delta, d, dstar;
    };
    std::vector<Probe> probes;
    for (double delta : radii)
      for (const auto& y : sys.space.ring(x, delta, ring_count))
        probes.push_back({delta, sys.space.distance(x, y), dstar(x, y)});

    double first_forward = -1.0, last_forward = 0.0, last_delta = 0.0;
    for (double delta : radii) {
      ModulusRow row{p, delta, 0.0, 0.0};
      bool any = false;
      for (const auto& pr : probes) {
        if (pr.ring_delta == delta) {
          row.forward = std::max(row.forward, pr.dstar);
          any = true;
        }
        if (pr.dstar <= delta) row.backward = std::max(row.backward, pr.d);
      }
      if (!any) continue;
      if (first_forward < 0) first_forward = row.forward;
      last_forward = row.forward;
      last_delta = delta;
      table.rows.push_back(row);
    }
    const bool divergent = first_forward > 0 && last_forward >= 0.5 * first_forward && last_forward > 2.0 * last_delta;
    table.divergent.push_back(divergent);
  }
  return table;
}

}  // namespace capdyn

#include "capdyn/almost_period.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace capdyn {

const char* to_string(Status status) {
  switch (status) {
    case Status::certified: return "Certified";
    case Status::refuted: return "Refuted";
    case Status::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Status status_from_string(const std::string& name) {
  if (name == "Certified") return Status::certified;
  if (name == "Refuted") return Status::refuted;
  if (name == "Inconclusive") return Status::inconclusive;
  throw std::invalid_argument("unknown verdict status: " + name);
}

double displacement(const System& sys, std::span<const Point> sample, long n) {
  if (sample.empty()) throw std::invalid_argument("displacement needs a nonempty sample");
  double worst = 0.0;
  for (const auto& x : sample) worst = std::max(worst, sys.space.distance(iterate(sys, x, n), x));
  return worst;
}

std::vector<double> displacement_series(const System& sys, std::span<const Point> sample, long span) {
  if (sample.empty()) throw std::invalid_argument("displacement needs a nonempty sample");
  if (span < 0) throw std::invalid_argument("negative span");
  std::vector<double> series(static_cast<std::size_t>(2 * span + 1), 0.0);
  for (const auto& x : sample) {
    Point f = x, b = x;
    for (long i = 1; i <= span; ++i) {
      f = sys.forward(f);
      b = sys.inverse(b);
      auto& up = series[static_cast<std::size_t>(span + i)];
      auto& down = series[static_cast<std::size_t>(span - i)];
      up = std::max(up, sys.space.distance(f, x));
      down = std::max(down, sys.space.distance(b, x));
    }
  }
  return series;
}

Verdict find_almost_period(const System& sys, std::span<const Point> sample, const WindowSearch& search) {
  if (!(search.epsilon > 0.0)) throw std::invalid_argument("find_almost_period needs a positive epsilon");
  if (search.window_max < 1 || search.span < search.window_max)
    throw std::invalid_argument("find_almost_period needs span >= window_max >= 1");

  const auto series = displacement_series(sys, sample, search.span);
  const long total = static_cast<long>(series.size());
  const double eps = search.epsilon;

  Verdict v;
  v.detector = "find_almost_period";
  v.budget = {2 * search.span, static_cast<long>(sample.size())};

  // A full block with no index below epsilon refutes window_max.
  long run = 0;
  for (long k = 0; k < total; ++k) {
    run = series[static_cast<std::size_t>(k)] < eps ? 0 : run + 1;
    if (run == search.window_max) {
      const long first = k - search.window_max + 1;
      double lowest = std::numeric_limits<double>::infinity();
      for (long j = first; j <= k; ++j) lowest = std::min(lowest, series[static_cast<std::size_t>(j)]);
      v.status = Status::refuted;
      v.witness = WindowWitness{first - search.span, search.window_max, eps, lowest};
      return v;
    }
  }

  long members = 0, previous = -1, max_gap = 0;
  for (long k = 0; k < total; ++k) {
    if (series[static_cast<std::size_t>(k)] >= eps) continue;
    if (previous >= 0) max_gap = std::max(max_gap, k - previous);
    previous = k;
    ++members;
  }

  // Sliding-window minimum over blocks of window_max.
  const long w = std::min(search.window_max, total);
  std::deque<long> window;
  double worst_best = 0.0;
  for (long k = 0; k < total; ++k) {
    while (!window.empty() && series[static_cast<std::size_t>(window.back())] >= series[static_cast<std::size_t>(k)])
      window.pop_back();
    window.push_back(k);
    if (window.front() <= k - w) window.pop_front();
    if (k >= w - 1) worst_best = std::max(worst_best, series[static_cast<std::size_t>(window.front())]);
  }
  const double margin = eps - worst_best;

  v.certificate = {{"N", static_cast<double>(max_gap)},
                   {"margin", margin},
                   {"members", static_cast<double>(members)},
                   {"window_max", static_cast<double>(search.window_max)},
                   {"span", static_cast<double>(search.span)},
                   {"epsilon", eps}};
  v.status = (members >= 2 && margin >= search.margin_floor) ? Status::certified : Status::inconclusive;
  return v;
}

std::vector<double> default_probe_schedule() { return {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}; }

namespace {

struct ProbeResult {
  bool passed = true;
  double max_separation = 0.0;
  long argmax = 0;
  std::optional<PairWitness> witness;
};

// Follows x and every probe for |n| <= budget, stopping at the first
// separation >= epsilon.
ProbeResult probe_radius(const System& sys, const Point& x, std::span<const Point> probes, double delta,
                         double epsilon, long budget) {
  ProbeResult r;
  for (const auto& y : probes) {
    const double d0 = sys.space.distance(x, y);
    if (d0 >= epsilon) {
      r.passed = false;
      r.witness = PairWitness{x, y, 0, delta, d0, epsilon};
      return r;
    }
    if (d0 > r.max_separation) {
      r.max_separation = d0;
      r.argmax = 0;
    }
    Point fx = x, fy = y, bx = x, by = y;
    for (long n = 1; n <= budget; ++n) {
      fx = sys.forward(fx);
      fy = sys.forward(fy);
      bx = sys.inverse(bx);
      by = sys.inverse(by);
      const double df = sys.space.distance(fx, fy);
      const double db = sys.space.distance(bx, by);
      if (df >= epsilon) {
        r.passed = false;
        r.witness = PairWitness{x, y, n, delta, df, epsilon};
        return r;
      }
      if (db >= epsilon) {
        r.passed = false;
        r.witness = PairWitness{x, y, -n, delta, db, epsilon};
        return r;
      }
      if (df > r.max_separation) {
        r.max_separation = df;
        r.argmax = n;
      }
      if (db > r.max_separation) {
        r.max_separation = db;
        r.argmax = -n;
      }
    }
  }
  return r;
}

}  // namespace

Verdict equicontinuity_modulus(const System& sys, const Point& x, double epsilon, long iter_budget,
                               std::span<const double> probe_schedule, std::size_t ring_count) {
  if (probe_schedule.empty()) throw std::invalid_argument("equicontinuity_modulus needs a probe schedule");
  for (std::size_t i = 1; i < probe_schedule.size(); ++i)
    if (!(probe_schedule[i] < probe_schedule[i - 1]))
      throw std::invalid_argument("probe schedule must be strictly decreasing");

  Verdict v;
  v.detector = "equicontinuity_modulus";
  v.budget = {iter_budget, 0};

  std::vector<std::vector<Point>> rings;
  rings.reserve(probe_schedule.size());
  for (double delta : probe_schedule) rings.push_back(sys.space.ring(x, delta, ring_count));

  std::optional<std::size_t> smallest;
  for (std::size_t i = probe_schedule.size(); i-- > 0;) {
    if (!rings[i].empty()) {
      smallest = i;
      break;
    }
  }
  if (!smallest) {
    // x is isolated at every probed scale.
    v.status = Status::certified;
    v.certificate = {{"delta", probe_schedule.front()}, {"isolated", 1.0}, {"max_separation", 0.0}};
    return v;
  }

  auto probed = [&](std::size_t i) {
    v.budget.samples += static_cast<long>(rings[i].size());
    return probe_radius(sys, x, rings[i], probe_schedule[i], epsilon, iter_budget);
  };

  const ProbeResult tight = probed(*smallest);
  if (!tight.passed) {
    v.status = Status::refuted;
    v.witness = *tight.witness;
    return v;
  }
  // Separation still climbing at the end of the budget: not decided.
  if (std::abs(tight.argmax) > iter_budget - iter_budget / 10 && tight.max_separation > 0.5 * epsilon) {
    v.status = Status::inconclusive;
    v.certificate = {{"max_separation", tight.max_separation}, {"argmax", static_cast<double>(tight.argmax)}};
    return v;
  }
  for (std::size_t i = 0; i <= *smallest; ++i) {
    if (rings[i].empty()) continue;
    const ProbeResult r = i == *smallest ? tight : probed(i);
    if (r.passed) {
      v.status = Status::certified;
      v.certificate = {{"delta", probe_schedule[i]}, {"max_separation", r.max_separation}, {"isolated", 0.0}};
      return v;
    }
  }
  return v;  // unreachable: the smallest radius passed
}

Verdict classify_cap(const System& sys, std::span<const Point> sample, double epsilon, const CapBudgets& budgets,
                     const std::optional<FiniteCompactum>& test_compactum) {
  if (sample.empty()) throw std::invalid_argument("classify_cap needs a nonempty sample");
  ClosureParams params = budgets.closure;
  params.epsilon = epsilon;

  Verdict v;
  v.detector = "classify_cap";
  v.budget.samples = static_cast<long>(sample.size());
  bool all_stabilized = true;
  std::size_t largest_net = 0;

  for (const auto& x : sample) {
    const auto closure = orbit_closure_approx(sys, x, params);
    v.budget.iterates += closure.iterates_used;
    largest_net = std::max(largest_net, closure.net.points.size());
    all_stabilized &= closure.stabilized;
    if (!closure.escape_witnesses.empty()) {
      v.status = Status::refuted;
      v.cause = "orbit_closure";
      v.witness = EscapeWitness{closure.escape_witnesses.front(), closure.net.points.size()};
      return v;
    }
  }

  const FiniteCompactum compactum =
      test_compactum ? *test_compactum : FiniteCompactum(sys.space, std::vector<Point>(sample.begin(), sample.end()));
  const auto joint = compactum_orbit_closure(sys, compactum, params);
  v.budget.iterates += joint.iterates_used;
  all_stabilized &= joint.stabilized;
  if (!joint.escape_witnesses.empty()) {
    v.status = Status::refuted;
    v.cause = "compactum_closure";
    v.witness = EscapeWitness{joint.escape_witnesses.front(), joint.net.points.size()};
    return v;
  }

  double min_delta = std::numeric_limits<double>::infinity();
  bool all_equicontinuous = true;
  for (const auto& x : sample) {
    const auto eq = equicontinuity_modulus(sys, x, epsilon, budgets.equicontinuity_budget, budgets.probe_schedule,
                                           budgets.ring_count);
    v.budget.iterates += eq.budget.iterates;
    if (eq.refuted()) {
      v.status = Status::refuted;
      v.cause = "equicontinuity";
      v.witness = eq.witness;
      return v;
    }
    if (!eq.certified()) {
      all_equicontinuous = false;
      continue;
    }
    min_delta = std::min(min_delta, eq.certificate.at("delta"));
  }

  v.certificate = {{"largest_net", static_cast<double>(largest_net)},
                   {"compactum_net", static_cast<double>(joint.net.points.size())},
                   {"all_stabilized", all_stabilized ? 1.0 : 0.0}};
  if (all_equicontinuous) v.certificate["min_delta"] = min_delta;
  v.status = (all_stabilized && all_equicontinuous) ? Status::certified : Status::inconclusive;
  return v;
}

double replay_witness(const System& sys, std::span<const Point> sample, const Witness& witness) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (const auto* w = std::get_if<WindowWitness>(&witness)) {
    if (sample.empty() || w->length < 1) return inf;
    const long last = w->start + w->length - 1;
    std::vector<double> block(static_cast<std::size_t>(w->length), 0.0);
    for (const auto& x : sample) {
      const auto seg = orbit_segment(sys, x, w->start, last);
      for (std::size_t j = 0; j < seg.size(); ++j) block[j] = std::max(block[j], sys.space.distance(seg[j], x));
    }
    const double lowest = *std::min_element(block.begin(), block.end());
    if (lowest < w->epsilon) return inf;
    return std::abs(lowest - w->min_displacement);
  }
  if (const auto* p = std::get_if<PairWitness>(&witness)) {
    const double d = sys.space.distance(iterate(sys, p->x, p->n), iterate(sys, p->y, p->n));
    if (d < p->epsilon) return inf;
    return std::abs(d - p->distance);
  }
  const auto& e = std::get<EscapeWitness>(witness);
  return sys.space.is_member(e.representative) ? inf : 0.0;
}

}  // namespace capdyn

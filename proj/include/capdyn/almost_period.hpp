#pragma once

#include <optional>
#include <span>
#include <vector>

#include "capdyn/dynamics.hpp"
#include "capdyn/verdict.hpp"

namespace capdyn {

/// max over the sample of d(h^n(x), x).
double displacement(const System& sys, std::span<const Point> sample, long n);

/// displacement(sys, sample, i) for i = -span..span, stored at i + span.
/// Orbits are walked incrementally and agree bit for bit with displacement().
std::vector<double> displacement_series(const System& sys, std::span<const Point> sample, long span);

struct WindowSearch {
  double epsilon = 0.1;
  long window_max = 1000;
  long span = 10000;
  /// Certifications whose margin falls below this floor become Inconclusive.
  double margin_floor = 0.0;
};

/// Almost-period search over [-span, span].
///
/// R is the set of indices with displacement < epsilon. Refuted when some
/// block of window_max consecutive indices misses R. Otherwise Certified with
///   N      = largest gap between consecutive members of R,
///   margin = epsilon - (worst over blocks of window_max of the best
///            displacement inside the block).
Verdict find_almost_period(const System& sys, std::span<const Point> sample, const WindowSearch& search);

/// Default probe radii, strictly decreasing.
std::vector<double> default_probe_schedule();

/// Equicontinuity probe at x. For each radius the space's ring of probes is
/// followed for |n| <= iter_budget.
///   Refuted: the smallest radius that has probes still separates some probe
///            from x by >= epsilon (witness y, n).
///   Certified: the largest radius whose probes all stay < epsilon, or
///            "isolated" = 1 when no radius has probes inside the space.
///   Inconclusive: the smallest radius passes but its separation peaks in the
///            last tenth of the budget above epsilon / 2.
Verdict equicontinuity_modulus(const System& sys, const Point& x, double epsilon, long iter_budget,
                               std::span<const double> probe_schedule, std::size_t ring_count = 16);

struct CapBudgets {
  ClosureParams closure;
  long equicontinuity_budget = 10000;
  std::vector<double> probe_schedule = default_probe_schedule();
  std::size_t ring_count = 16;
};

/// Compact almost periodicity: every sampled orbit closure and the closure of
/// a test compactum stabilize with no escape, and equicontinuity certifies at
/// every sample point. The test compactum defaults to the sample itself.
/// `cause` names the refuting sub-detector: "orbit_closure",
/// "compactum_closure" or "equicontinuity".
Verdict classify_cap(const System& sys, std::span<const Point> sample, double epsilon, const CapBudgets& budgets,
                     const std::optional<FiniteCompactum>& test_compactum = std::nullopt);

/// Re-evaluates a witness. Returns the absolute difference between the stored
/// measurement and the recomputed one, or +inf when the recomputed value no
/// longer violates the inequality the witness claims.
double replay_witness(const System& sys, std::span<const Point> sample, const Witness& witness);

}  // namespace capdyn

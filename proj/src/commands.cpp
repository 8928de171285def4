#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "capdyn/almost_period.hpp"
#include "capdyn/compactify.hpp"
#include "capdyn/decomposition.hpp"
#include "capdyn/group_closure.hpp"
#include "capdyn/invariant_metric.hpp"
#include "capdyn/report.hpp"

namespace capdyn {

namespace {

constexpr long kClosurePatience = 1000;
constexpr std::size_t kMetricProbePoints = 16;
constexpr std::size_t kRandomPairs = 10000;

void validate(const RunConfig& c) {
  if (!(c.epsilon > 0) || !std::isfinite(c.epsilon)) throw UsageError("--epsilon must be positive");
  if (c.sample < 1) throw UsageError("--sample must be positive");
  if (c.budget < 1 || c.span < 1 || c.window_max < 1) throw UsageError("budgets must be positive");
}

Json base_report(const RunConfig& c, const System& sys) {
  Json r;
  r["schema"] = 1;
  r["command"] = c.command;
  r["config"] = {{"fixture", c.fixture}, {"file", c.file},     {"epsilon", c.epsilon},
                 {"sample", c.sample},   {"seed", c.seed},     {"budget", c.budget},
                 {"span", c.span},       {"window_max", c.window_max}};
  r["system"] = {{"name", sys.name}, {"space", sys.space.label()}};
  return r;
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string csv_point(const Point& p) {
  if (p.at_infinity) return "inf";
  std::string s;
  for (std::size_t i = 0; i < p.dim; ++i) s += (i ? ";" : "") + csv_number(p[i]);
  return s;
}

CapBudgets cap_budgets(const RunConfig& c) {
  CapBudgets b;
  b.closure = {c.epsilon, c.budget, 0};
  b.equicontinuity_budget = c.budget;
  return b;
}

Verdict aggregate_equicontinuity(const System& sys, std::span<const Point> sample, const RunConfig& c) {
  const auto schedule = default_probe_schedule();
  Verdict v;
  v.detector = "equicontinuity";
  v.budget.samples = static_cast<long>(sample.size());
  double min_delta = std::numeric_limits<double>::infinity();
  bool all = true;
  for (const auto& x : sample) {
    const auto e = equicontinuity_modulus(sys, x, c.epsilon, c.budget, schedule);
    v.budget.iterates += e.budget.iterates;
    if (e.refuted()) {
      v.status = Status::refuted;
      v.witness = e.witness;
      return v;
    }
    if (e.certified())
      min_delta = std::min(min_delta, e.certificate.at("delta"));
    else
      all = false;
  }
  if (all) {
    v.status = Status::certified;
    v.certificate["min_delta"] = min_delta;
  }
  return v;
}

// Proxy for "h is an isometry of some metric": the truncated invariant metric
// must stay below epsilon on the tightest probe ring of each point.
Verdict invariant_metric_proxy(const System& sys, std::span<const Point> sample, const RunConfig& c) {
  Verdict v;
  v.detector = "invariant_metric";
  const TruncatedInvariantMetric dstar(sys, c.budget);
  const auto schedule = default_probe_schedule();
  double worst_ratio = 0;
  const std::size_t count = std::min(sample.size(), kMetricProbePoints);
  v.budget = {c.budget, static_cast<long>(count)};
  try {
    for (std::size_t i = 0; i < count; ++i) {
      const Point& x = sample[i];
      std::vector<Point> ring;
      double delta = 0;
      for (auto it = schedule.rbegin(); it != schedule.rend() && ring.empty(); ++it) {
        delta = *it;
        ring = sys.space.ring(x, delta);
      }
      for (const auto& y : ring) {
        const auto val = dstar.evaluate(x, y);
        const double d = sys.space.distance(x, y);
        if (d > 0) worst_ratio = std::max(worst_ratio, val.value / d);
        if (val.value >= c.epsilon) {
          v.status = Status::refuted;
          v.witness = PairWitness{x, y, val.argmax, delta, val.value, c.epsilon};
          return v;
        }
      }
    }
  } catch (const UnboundedOrbitError& e) {
    v.certificate = {{"unbounded_at", static_cast<double>(e.index())}};
    return v;
  }
  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i + 1 < count; ++i) pairs.emplace_back(sample[i], sample[i + 1]);
  v.status = Status::certified;
  v.certificate = {{"truncation", static_cast<double>(c.budget)},
                   {"max_ratio", worst_ratio},
                   {"isometry_residual", isometry_residual(sys, dstar.as_metric(), pairs)}};
  return v;
}

Verdict closure_verdict(const ClosureNet& net) {
  Verdict v;
  v.detector = "enumerate_closure";
  v.budget = {net.n_scanned, static_cast<long>(net.sample->size())};
  v.certificate = {{"snapshots", static_cast<double>(net.snapshots.size())},
                   {"n_scanned", static_cast<double>(net.n_scanned)}};
  v.status = net.stabilized ? Status::certified : Status::inconclusive;
  return v;
}

Json with_metric(const Verdict& v, const char* metric) {
  Json j = to_json(v);
  j["metric"] = metric;
  return j;
}

Json consistency_block(const std::map<std::string, Verdict>& chain, bool hypothesis, std::vector<std::string>& found) {
  Json c;
  c["hypothesis_compact_orbit_closures"] = hypothesis;
  Json statuses = Json::object();
  for (const auto& [k, v] : chain) statuses[k] = to_string(v.status);
  c["chain"] = statuses;
  Json contradictions = Json::array();
  if (hypothesis) {
    for (const auto& [a, va] : chain)
      for (const auto& [b, vb] : chain)
        if (va.certified() && vb.refuted()) {
          contradictions.push_back({{"certified", a}, {"refuted", b}});
          found.push_back(a + " certified but " + b + " refuted");
        }
  }
  c["contradictions"] = contradictions;
  return c;
}

RunResult analyze(const RunConfig& c, const LoadedSystem& loaded) {
  const System& sys = loaded.system;
  const auto sample = loaded.sampler(c.sample, c.seed);
  RunResult res;
  res.report = base_report(c, sys);

  const WindowSearch search{c.epsilon, c.window_max, c.span, 0.0};
  const auto budgets = cap_budgets(c);
  std::optional<FiniteCompactum> compactum;
  if (loaded.fixture) compactum = loaded.fixture->test_compactum;

  std::map<std::string, Verdict> all;
  all[detector_key::almost_period] = find_almost_period(sys, sample, search);
  all[detector_key::cap] = classify_cap(sys, sample, c.epsilon, budgets, compactum);
  all[detector_key::equicontinuity] = aggregate_equicontinuity(sys, sample, c);
  all["invariant_metric"] = invariant_metric_proxy(sys, sample, c);
  all["closure"] = closure_verdict(enumerate_closure(sys, make_sample(sample), c.epsilon, c.budget,
                                                     std::min(kClosurePatience, c.budget)));

  Json detectors = Json::object();
  for (const auto& [k, v] : all) detectors[k] = with_metric(v, "native");

  if (sys.space.kind() == SpaceKind::plane) {
    const System ext = extend_map(sys);
    const auto round = chordal_sample(sample);
    all[detector_key::almost_period_chordal] = find_almost_period(ext, round, search);
    all[detector_key::cap_chordal] = classify_cap(ext, round, c.epsilon, budgets);
    detectors[detector_key::almost_period_chordal] = with_metric(all[detector_key::almost_period_chordal], "chordal");
    detectors[detector_key::cap_chordal] = with_metric(all[detector_key::cap_chordal], "chordal");
  }
  res.report["detectors"] = detectors;

  const Verdict& cap = all[detector_key::cap];
  const bool hypothesis = !(cap.refuted() && cap.cause == "orbit_closure");
  const std::map<std::string, Verdict> chain{{"cap", cap},
                                             {"equicontinuity", all[detector_key::equicontinuity]},
                                             {"invariant_metric", all["invariant_metric"]},
                                             {"closure", all["closure"]}};
  std::vector<std::string> contradictions;
  res.report["consistency"] = consistency_block(chain, hypothesis, contradictions);
  for (const auto& m : contradictions) res.warnings.push_back("contradiction: " + m);

  Json expectations = Json::array();
  if (loaded.fixture) {
    for (const auto& [key, want] : loaded.fixture->expected) {
      const auto it = all.find(key);
      const std::string got = it == all.end() ? "missing" : to_string(it->second.status);
      const bool ok = got == to_string(want);
      expectations.push_back({{"detector", key}, {"expected", to_string(want)}, {"actual", got}, {"ok", ok}});
      if (!ok) res.warnings.push_back("expectation mismatch: " + key + " expected " + to_string(want) + ", got " + got);
    }
  }
  res.report["expectations"] = expectations;
  res.exit_code = res.warnings.empty() ? 0 : 1;
  return res;
}

std::vector<std::pair<std::size_t, std::size_t>> random_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n < 2) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < count; ++k) out.emplace_back(pick(rng), pick(rng));
  return out;
}

RunResult run_decompose(const RunConfig& c, const LoadedSystem& loaded) {
  const System& sys = loaded.system;
  const auto sample = loaded.sampler(c.sample, c.seed);
  RunResult res;
  res.report = base_report(c, sys);

  std::optional<FiniteCompactum> compactum;
  if (loaded.fixture) compactum = loaded.fixture->test_compactum;
  const Verdict cap = classify_cap(sys, sample, c.epsilon, cap_budgets(c), compactum);
  res.report["detectors"] = {{detector_key::cap, with_metric(cap, "native")}};
  if (cap.refuted()) {
    res.warnings.push_back("system is not compactly almost periodic (" + cap.cause +
                           "); the decomposition need not be continuous");
    if (!c.force) {
      res.report["decomposition"] = nullptr;
      res.exit_code = 1;
      return res;
    }
  }

  const ClosureParams params{c.epsilon, c.budget, 0};
  std::optional<Decomposition> decomposed;
  try {
    decomposed = decompose(sys, sample, params);
  } catch (const NonCompactError& e) {
    res.warnings.push_back(e.what());
    res.report["decomposition"] = {{"error", e.what()}, {"sample_index", e.sample_index()}};
    res.exit_code = 1;
    return res;
  }
  const Decomposition& dec = *decomposed;

  Json classes = Json::array();
  GroupTable worst;
  std::size_t tables = 0;
  for (std::size_t k = 0; k < dec.classes.size(); ++k) {
    const auto& cl = dec.classes[k];
    const auto shape = classify_class(cl, sys);
    const auto members = std::count(dec.assignment.begin(), dec.assignment.end(), k);
    classes.push_back({{"id", k},
                       {"kind", to_string(shape.kind)},
                       {"period", shape.period},
                       {"net_size", cl.net.points.size()},
                       {"members", members},
                       {"stabilized", cl.stabilized}});
    if (!cl.stabilized) continue;
    const auto t = orbit_group_table(sys, cl.base.front(), params);
    worst.closure_residual = std::max(worst.closure_residual, t.closure_residual);
    worst.inverse_residual = std::max(worst.inverse_residual, t.inverse_residual);
    worst.commutativity_residual = std::max(worst.commutativity_residual, t.commutativity_residual);
    worst.identity_residual = std::max(worst.identity_residual, t.identity_residual);
    ++tables;
  }

  std::string pair_csv = "class_a,class_b,hausdorff,min_pair\n";
  double worst_gap = 0;
  for (std::size_t a = 0; a < dec.classes.size(); ++a)
    for (std::size_t b = a + 1; b < dec.classes.size(); ++b) {
      const auto q = quotient_distance(dec.classes[a], dec.classes[b]);
      worst_gap = std::max(worst_gap, std::abs(q.difference));
      pair_csv += std::to_string(a) + "," + std::to_string(b) + "," + csv_number(q.hausdorff) + "," +
                  csv_number(q.min_pair) + "\n";
    }
  const auto pairs = random_pairs(sample.size(), kRandomPairs, c.seed);
  const double violation = pairs.empty() ? 0.0 : check_projection_nonexpansive(dec, pairs);

  res.report["decomposition"] = {
      {"class_count", dec.classes.size()},
      {"classes", classes},
      {"nonexpansive_violation", violation},
      {"max_hausdorff_minus_min_pair", worst_gap},
      {"group_table",
       {{"tables", tables},
        {"closure_residual", worst.closure_residual},
        {"inverse_residual", worst.inverse_residual},
        {"commutativity_residual", worst.commutativity_residual},
        {"identity_residual", worst.identity_residual}}}};

  std::string assign_csv = "index,point,class\n";
  for (std::size_t i = 0; i < sample.size(); ++i)
    assign_csv += std::to_string(i) + "," + csv_point(sample[i]) + "," + std::to_string(dec.assignment[i]) + "\n";
  res.csv = {{".assignment.csv", assign_csv}, {".classes.csv", pair_csv}};
  return res;
}

RunResult run_closure(const RunConfig& c, const LoadedSystem& loaded) {
  const System& sys = loaded.system;
  const auto sample = make_sample(loaded.sampler(c.sample, c.seed));
  RunResult res;
  res.report = base_report(c, sys);

  const auto net = enumerate_closure(sys, sample, c.epsilon, c.budget, std::min(kClosurePatience, c.budget));
  res.report["detectors"] = {{"closure", with_metric(closure_verdict(net), "native")}};
  res.report["closure"] = {{"snapshots", net.snapshots.size()},
                           {"n_scanned", net.n_scanned},
                           {"stabilized", net.stabilized},
                           {"patience", std::min(kClosurePatience, c.budget)}};
  // The law check is quadratic in the net; an unstabilized net has no group
  // structure to check anyway.
  if (net.stabilized) {
    const auto laws = check_group_laws(net, sys);
    res.report["closure"]["group_laws"] = {{"closure", laws.closure},
                                           {"inverse", laws.inverse},
                                           {"commutativity", laws.commutativity},
                                           {"pairs", laws.pairs}};
  } else {
    res.report["closure"]["group_laws"] = nullptr;
  }

  std::string traj = "step,net_size\n";
  for (std::size_t i = 0; i < net.size_trajectory.size(); ++i)
    traj += std::to_string(i) + "," + std::to_string(net.size_trajectory[i]) + "\n";
  const long span = std::min(c.span, c.budget);
  const auto series = displacement_series(sys, *sample, span);
  std::string rec = "n,displacement\n";
  for (long i = -span; i <= span; ++i) rec += std::to_string(i) + "," + csv_number(series[i + span]) + "\n";
  res.csv = {{".trajectory.csv", traj}, {".recurrence.csv", rec}};
  return res;
}

RunResult run_metric(const RunConfig& c, const LoadedSystem& loaded) {
  const System& sys = loaded.system;
  const auto sample = loaded.sampler(c.sample, c.seed);
  RunResult res;
  res.report = base_report(c, sys);

  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i + 1 < sample.size(); ++i) pairs.emplace_back(sample[i], sample[i + 1]);
  const std::vector<double> radii{0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  const std::size_t probe_points = std::min(sample.size(), kMetricProbePoints);

  Json levels = Json::array();
  std::string csv = "truncation,point,delta,forward,backward\n";
  for (long n = 10; n <= std::min(c.budget, 1000L); n *= 10) {
    Json level{{"truncation", n}};
    try {
      const TruncatedInvariantMetric dstar(sys, n);
      const auto axioms = metric_axioms_check_random(dstar.as_metric(), sample, kRandomPairs, c.seed);
      const auto table = topology_equivalence_probe(sys, n, std::span(sample).first(probe_points), radii);
      level["axioms"] = {{"identity", axioms.identity},
                         {"negativity", axioms.negativity},
                         {"symmetry", axioms.symmetry},
                         {"triangle", axioms.triangle},
                         {"triples", axioms.triples}};
      level["isometry_residual"] = isometry_residual(sys, dstar.as_metric(), pairs);
      level["divergent_points"] = std::count(table.divergent.begin(), table.divergent.end(), true);
      for (const auto& row : table.rows)
        csv += std::to_string(n) + "," + std::to_string(row.point) + "," + csv_number(row.delta) + "," +
               csv_number(row.forward) + "," + csv_number(row.backward) + "\n";
    } catch (const UnboundedOrbitError& e) {
      level["unbounded"] = {{"index", e.index()}, {"value", e.value()}};
    }
    levels.push_back(level);
  }
  res.report["metric"] = {{"levels", levels}};
  res.csv = {{".modulus.csv", csv}};
  return res;
}

}  // namespace

RunResult run_command(const RunConfig& config) {
  validate(config);
  const auto loaded = load_system(config);
  if (config.command == "analyze") return analyze(config, loaded);
  if (config.command == "decompose") return run_decompose(config, loaded);
  if (config.command == "closure") return run_closure(config, loaded);
  if (config.command == "metric") return run_metric(config, loaded);
  throw UsageError("unknown command '" + config.command + "'");
}

}  // namespace capdyn

#include "capdyn/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "capdyn/almost_period.hpp"
#include "capdyn/compactify.hpp"

namespace capdyn {

Json to_json(const Point& p) {
  if (p.at_infinity) return "inf";
  Json a = Json::array();
  for (std::size_t i = 0; i < p.dim; ++i) a.push_back(p[i]);
  return a;
}

Point point_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw std::invalid_argument("unknown point literal");
    return Point::infinity();
  }
  if (!j.is_array() || j.empty() || j.size() > 4) throw std::invalid_argument("point must be an array of 1-4 numbers");
  Point p;
  p.dim = static_cast<std::uint8_t>(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = j[i].get<double>();
  return p;
}

namespace {

Json witness_json(const Witness& w) {
  if (const auto* x = std::get_if<WindowWitness>(&w))
    return {{"type", "window"},
            {"start", x->start},
            {"length", x->length},
            {"epsilon", x->epsilon},
            {"min_displacement", x->min_displacement}};
  if (const auto* x = std::get_if<PairWitness>(&w))
    return {{"type", "pair"},         {"x", to_json(x->x)},          {"y", to_json(x->y)},
            {"n", x->n},              {"delta", x->delta},           {"distance", x->distance},
            {"epsilon", x->epsilon}};
  const auto& e = std::get<EscapeWitness>(w);
  return {{"type", "escape"}, {"representative", to_json(e.representative)}, {"cluster_size", e.cluster_size}};
}

}  // namespace

Json to_json(const Verdict& v) {
  Json j;
  j["detector"] = v.detector;
  j["status"] = to_string(v.status);
  if (!v.cause.empty()) j["cause"] = v.cause;
  Json cert = Json::object();
  for (const auto& [k, x] : v.certificate) cert[k] = x;
  j["certificate"] = cert;
  j["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
  j["budget"] = {{"iterates", v.budget.iterates}, {"samples", v.budget.samples}};
  return j;
}

Witness witness_from_json(const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "window")
    return WindowWitness{j.at("start").get<long>(), j.at("length").get<long>(), j.at("epsilon").get<double>(),
                         j.at("min_displacement").get<double>()};
  if (type == "pair")
    return PairWitness{point_from_json(j.at("x")),   point_from_json(j.at("y")),      j.at("n").get<long>(),
                       j.at("delta").get<double>(), j.at("distance").get<double>(), j.at("epsilon").get<double>()};
  if (type == "escape")
    return EscapeWitness{point_from_json(j.at("representative")), j.at("cluster_size").get<std::size_t>()};
  throw std::invalid_argument("unknown witness type '" + type + "'");
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

LoadedSystem load_system(const RunConfig& config) {
  if (config.fixture.empty() == config.file.empty())
    throw UsageError("exactly one of --fixture and --file is required");
  if (!config.fixture.empty()) {
    try {
      auto f = fixture(config.fixture);
      return {f.system, f.sampler, f};
    } catch (const FixtureLookupError& e) {
      throw UsageError(e.what());
    }
  }
  std::ifstream in(config.file, std::ios::binary);
  if (!in) throw UsageError("cannot read system file '" + config.file + "'");
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = parse_system(text.str());
  return {parsed.system, parsed.sampler, std::nullopt};
}

ReplayOutcome verify_report(const Json& report) {
  ReplayOutcome out;
  if (report.value("schema", 0) != 1) throw std::invalid_argument("report schema is not 1");
  const Json& cfg = report.at("config");
  RunConfig config;
  config.fixture = cfg.value("fixture", "");
  config.file = cfg.value("file", "");
  config.sample = cfg.at("sample").get<std::size_t>();
  config.seed = cfg.at("seed").get<std::uint64_t>();
  const auto loaded = load_system(config);
  const auto sample = loaded.sampler(config.sample, config.seed);

  const Json& detectors = report.at("detectors");
  for (auto it = detectors.begin(); it != detectors.end(); ++it) {
    const Json& v = it.value();
    if (!v.is_object() || !v.contains("witness") || v.at("witness").is_null()) continue;
    const bool chordal = v.value("metric", "") == "chordal";
    const System sys = chordal ? extend_map(loaded.system) : loaded.system;
    const auto points = chordal ? chordal_sample(sample) : sample;
    const double err = replay_witness(sys, points, witness_from_json(v.at("witness")));
    ++out.witnesses;
    out.worst = std::max(out.worst, err);
    if (!(err <= kExactTolerance)) {
      ++out.failures;
      std::ostringstream msg;
      msg << it.key() << ": witness replay differs by " << err;
      out.messages.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace capdyn

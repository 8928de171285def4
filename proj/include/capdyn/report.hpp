#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "capdyn/sysdef.hpp"

namespace capdyn {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;  ///< analyze | decompose | closure | metric
  std::string fixture;
  std::string file;
  double epsilon = 0.1;
  std::size_t sample = 64;
  std::uint64_t seed = 0;
  long budget = 10000;
  long span = 10000;
  long window_max = 1000;
  std::string out;
  bool force = false;
};

/// Raised for configuration problems; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvFile {
  std::string suffix;  ///< appended to the report path stem, e.g. ".assignment.csv"
  std::string content;
};

struct RunResult {
  Json report;
  int exit_code = 0;
  std::vector<CsvFile> csv;
  /// Human-readable warnings for standard error.
  std::vector<std::string> warnings;
};

/// Resolved system and sampler for a config. Throws UsageError when neither
/// or both of fixture and file are given, or the fixture is unknown;
/// SystemParseError when the file does not load.
struct LoadedSystem {
  System system;
  Sampler sampler;
  std::optional<FixtureDescriptor> fixture;
};
LoadedSystem load_system(const RunConfig& config);

/// Runs one command. Deterministic given the config.
RunResult run_command(const RunConfig& config);

/// Canonical serialization: two-space indent, trailing newline.
std::string dump_report(const Json& report);

struct ReplayOutcome {
  std::size_t witnesses = 0;
  std::size_t failures = 0;
  double worst = 0;
  std::vector<std::string> messages;
};

/// Rebuilds the system and samples recorded in a report and replays every
/// stored witness. A witness fails when it differs by more than 1e-12.
ReplayOutcome verify_report(const Json& report);

Json to_json(const Point& p);
Point point_from_json(const Json& j);
Json to_json(const Verdict& v);
Witness witness_from_json(const Json& j);

}  // namespace capdyn

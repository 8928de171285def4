// capdyn: run the detectors on a fixture or a system file and write a JSON
// report plus CSV plot data.
//
// Exit codes: 0 success, 1 expectation mismatch / contradiction / failed
// witness replay, 2 usage or input error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <utility>

#include "capdyn/report.hpp"

namespace {

constexpr int kUsage = 2;

void add_run_options(CLI::App& cmd, capdyn::RunConfig& c, std::string& verify) {
  cmd.add_option("--fixture", c.fixture, "Registered fixture name, e.g. disk_twist or circle_rotation:3/8");
  cmd.add_option("--file", c.file, "System definition file");
  cmd.add_option("--epsilon", c.epsilon, "Resolution")->capture_default_str();
  cmd.add_option("--sample", c.sample, "Sample size")->capture_default_str();
  cmd.add_option("--seed", c.seed, "Sampling seed")->capture_default_str();
  cmd.add_option("--budget", c.budget, "Iterate budget")->capture_default_str();
  cmd.add_option("--span", c.span, "Almost-period search span")->capture_default_str();
  cmd.add_option("--window-max", c.window_max, "Largest admissible window")->capture_default_str();
  cmd.add_option("--out", c.out, "Report path; CSV files are written next to it");
  cmd.add_flag("--force", c.force, "Decompose even when the system is not compactly almost periodic");
  cmd.add_option("--verify-witness", verify, "Replay every witness of a stored report");
}

int verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "capdyn: cannot read report '" << path << "'\n";
    return kUsage;
  }
  capdyn::Json report;
  try {
    report = capdyn::Json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "capdyn: malformed report: " << e.what() << "\n";
    return kUsage;
  }
  const auto outcome = capdyn::verify_report(report);
  for (const auto& m : outcome.messages) std::cerr << "capdyn: " << m << "\n";
  std::cout << "witnesses " << outcome.witnesses << ", failures " << outcome.failures << ", worst " << outcome.worst
            << "\n";
  return outcome.failures == 0 ? 0 : 1;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw capdyn::UsageError("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost periodicity and compact almost periodicity of homeomorphisms"};
  app.require_subcommand(0, 1);
  capdyn::RunConfig config;
  std::string verify_path;
  app.add_option("--verify-witness", verify_path, "Replay every witness of a stored report");
  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "Run every detector and check consistency"},
      {"decompose", "Split a sample into orbit-closure classes"},
      {"closure", "Enumerate the closure of the iterates on a sample"},
      {"metric", "Build the invariant metric and test its axioms"}};
  for (const auto& [name, description] : commands) {
    auto* cmd = app.add_subcommand(name, description);
    add_run_options(*cmd, config, verify_path);
    cmd->callback([&config, cmd] { config.command = cmd->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (!verify_path.empty()) return verify(verify_path);
    if (config.command.empty()) {
      std::cerr << app.help();
      return kUsage;
    }
    const auto result = capdyn::run_command(config);
    for (const auto& w : result.warnings) std::cerr << "capdyn: " << w << "\n";
    const std::string text = capdyn::dump_report(result.report);
    if (config.out.empty()) {
      std::cout << text;
    } else {
      std::filesystem::path out(config.out);
      write_file(out, text);
      std::filesystem::path stem = out.parent_path() / out.stem();
      for (const auto& csv : result.csv) write_file(stem.string() + csv.suffix, csv.content);
    }
    return result.exit_code;
  } catch (const capdyn::UsageError& e) {
    std::cerr << "capdyn: " << e.what() << "\n";
    return kUsage;
  } catch (const capdyn::SystemParseError& e) {
    std::cerr << "capdyn: " << config.file << ":" << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "capdyn: " << e.what() << "\n";
    return kUsage;
  }
}

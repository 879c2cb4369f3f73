#pragma once

#include "qrf/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Scenario runner: parses run configurations, executes the named experiments
// end to end, and emits machine-readable results (report.json plus CSV
// artifacts). Identical configurations, including the seed, produce
// byte-identical output files.
namespace qrf::cli {

struct ScenarioConfig {
  std::string scenario;
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir;
  std::uint64_t seed = 12345;
  double hbar = 1.0;
};

// Builds a config from an optional JSON file (flat key-value object),
// command-line overrides ("key=value"), and the output-dir precedence
// --out > QRF_OUT > config "output_dir" > "qrf-out/<scenario>".
ScenarioConfig load_config(const std::string& scenario,
                           const std::optional<std::filesystem::path>& file,
                           const std::vector<std::string>& overrides,
                           const std::optional<std::filesystem::path>& out_dir);

// Typed parameter access with schema checking: every key a scenario reads is
// recorded, and finish() rejects configs containing keys the scenario does
// not know.
class ParamReader {
 public:
  explicit ParamReader(const ScenarioConfig& config);

  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  Rational get_rational(const std::string& key, const Rational& fallback);
  std::vector<Rational> get_rational_list(const std::string& key,
                                          const std::string& fallback);
  void finish() const;

  nlohmann::json echo() const { return echo_; }

 private:
  const ScenarioConfig& config_;
  std::set<std::string> consumed_;
  nlohmann::json echo_;
};

struct ResultLine {
  std::string label;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// pass iff |value - expected| <= tolerance
ResultLine check_line(const std::string& label, double value, double expected,
                      double tolerance);
// pass iff value >= threshold
ResultLine threshold_line(const std::string& label, double value,
                          double threshold);

struct ScenarioReport {
  std::string scenario;
  nlohmann::json inputs;
  std::vector<ResultLine> results;
  std::vector<std::string> artifacts;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

ScenarioReport run_boost_demo(const ScenarioConfig& config);
ScenarioReport run_paradox(const ScenarioConfig& config);
ScenarioReport run_gamma_check(const ScenarioConfig& config);
ScenarioReport run_nogo(const ScenarioConfig& config);
ScenarioReport run_nparticle_table(const ScenarioConfig& config);
ScenarioReport run_relative_reduced(const ScenarioConfig& config);
ScenarioReport run_castro_check(const ScenarioConfig& config);

// Dispatches on config.scenario; unknown names throw std::invalid_argument.
ScenarioReport run_scenario(const ScenarioConfig& config);

// Writes report.json into the output dir and appends it to the artifacts.
void write_report(ScenarioReport& report,
                  const std::filesystem::path& output_dir);

const std::vector<std::string>& scenario_names();

}  // namespace qrf::cli

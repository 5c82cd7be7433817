#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tam/report.hpp"

namespace tam {

/// One run of the driver: a command, the scenario it exercises, and the
/// reproducibility knobs.  Everything random in a scenario flows from the
/// seed, so equal configs give byte-identical reports (modulo timestamp).
struct RunConfig {
  std::string command = "check";
  std::string scenario;  // empty: the command's default scenario
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::string output_path;                   // empty: stdout only
  int grid = 8;
  double colatitude = 1.0471975511965976;  // demo knob
  std::pair<int, int> signature{2, 0};     // metric knob
  std::string metric_file;  // constant metric matrix to round trip
  bool with_timestamp = true;
};

struct ScenarioInfo {
  std::string name;
  std::string command;
  std::string laws;  // check tokens the scenario exercises
  std::string summary;
};

const std::vector<ScenarioInfo>& scenario_table();

/// Text table of every builtin scenario and the laws it exercises.
std::string list_scenarios();

struct RunResult {
  std::string scenario;
  std::vector<AxiomReport> checks;
  nlohmann::json numbers;  // scenario-specific values for the report
  bool pass() const;
};

/// Executes the named scenario.  Throws DomainError for unknown
/// command/scenario combinations; numeric failures propagate as their own
/// error types.
RunResult run_scenario(const RunConfig& config);

/// Full report document: {scenario, seed, checks, metadata}.
nlohmann::json report_json(const RunConfig& config, const RunResult& result);

/// Deterministically formatted report text.
std::string report_text(const RunConfig& config, const RunResult& result);

/// Tolerance helper: per-check override or the supplied default.
double tolerance_for(const RunConfig& config, const std::string& check,
                     double fallback);

}  // namespace tam

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qme/scenarios.hpp"

namespace qme {

enum class Check { Gkls, Stationarity, Covariance, Entropy, Positivity };

std::optional<Check> check_from_string(const std::string& name);
const char* to_string(Check c);

struct RunConfig {
  std::string scenario;               // builtin name or path to a scenario file
  std::vector<std::string> methods;   // empty -> scenario defaults
  std::string out_dir;
  std::optional<double> boltzmann_cm_per_K;
  std::optional<double> dt_fs;
  std::optional<double> t_max_fs;
  std::optional<int> heom_depth;
  std::vector<Check> checks;
};

// Exit codes: 0 success, 2 configuration error, 3 propagation divergence,
// 4 failed enabled check. Diagnostics go to the returned message.
struct RunOutcome {
  int exit_code = 0;
  std::string message;
};

RunOutcome run(const RunConfig& config);

// Scenario files are JSON with explicit units in the key names; unknown keys
// are rejected. See README for the schema.
ScenarioSpec parse_scenario(const std::string& path);
ScenarioSpec parse_scenario_text(const std::string& text, const std::string& origin);
// Canonical form: matrices written out, defaults filled in. parse of the
// output reproduces the spec.
std::string serialize_scenario(const ScenarioSpec& spec);

}  // namespace qme

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qme/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qme: GKLS/Redfield master-equation generators with a HEOM reference solver"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a scenario and write CSV/JSON results");

  qme::RunConfig config;
  std::string methods_csv;
  std::string checks_csv;
  double kb = 0.0, dt = 0.0, tmax = 0.0;
  int depth = 0;

  run_cmd->add_option("--scenario", config.scenario, "builtin name (paper-fig2, paper-fig3) or scenario file")
      ->required();
  run_cmd->add_option("--methods", methods_csv,
                      "comma-separated: redfield,davies,unified,unified_simplified,"
                      "nonsecular_davies,heom (default: scenario's list)");
  run_cmd->add_option("--out", config.out_dir, "output directory (default: $QME_OUT_DIR/<scenario>)");
  auto* kb_opt = run_cmd->add_option("--kB", kb, "Boltzmann constant in cm^-1/K");
  auto* depth_opt = run_cmd->add_option("--heom-depth", depth, "HEOM truncation depth");
  auto* dt_opt = run_cmd->add_option("--dt-fs", dt, "time step in fs");
  auto* tmax_opt = run_cmd->add_option("--t-max-fs", tmax, "simulated time in fs");
  run_cmd->add_option("--checks", checks_csv,
                      "comma-separated: gkls,stationarity,covariance,entropy,positivity");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->count("--methods")) {
    for (auto& piece : CLI::detail::split(methods_csv, ',')) {
      if (!piece.empty()) config.methods.push_back(piece);
    }
    if (config.methods.empty()) {
      std::cerr << "configuration error: --methods given but empty\n";
      return 2;
    }
  }
  if (run_cmd->count("--checks")) {
    for (auto& piece : CLI::detail::split(checks_csv, ',')) {
      if (piece.empty()) continue;
      auto c = qme::check_from_string(piece);
      if (!c) {
        std::cerr << "configuration error: unknown check '" << piece << "'\n";
        return 2;
      }
      config.checks.push_back(*c);
    }
  }
  if (*kb_opt) config.boltzmann_cm_per_K = kb;
  if (*depth_opt) config.heom_depth = depth;
  if (*dt_opt) config.dt_fs = dt;
  if (*tmax_opt) config.t_max_fs = tmax;

  if (config.out_dir.empty()) {
    const char* base = std::getenv("QME_OUT_DIR");
    config.out_dir = (base != nullptr ? std::string(base) : std::string("qme-out")) + "/" +
                     config.scenario;
  }

  const auto outcome = qme::run(config);
  if (outcome.exit_code == 0) {
    std::cout << outcome.message << "\n";
  } else {
    std::cerr << outcome.message << "\n";
  }
  return outcome.exit_code;
}

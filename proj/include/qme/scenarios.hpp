#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qme/bath.hpp"
#include "qme/dynamics.hpp"
#include "qme/generators.hpp"
#include "qme/linalg.hpp"

namespace qme {

// Bath parameters as configured; realized into a BathDescriptor per run so the
// Boltzmann constant can be overridden.
struct ScenarioBath {
  std::string label;
  std::string model;  // "drude_high_temp" | "drude_exact_gamma" | "exp_sum"
  double eta_cm = 0.0;
  double omega_cut_cm = 0.0;
  double temperature_K = 0.0;
  // exp_sum only:
  double beta_cm = 0.0;
  std::vector<ExponentialMode> modes;
};

struct ScenarioCoupling {
  std::string bath_label;
  Cmat op;
};

struct SplitSpec {
  enum class Mode { ByTolerance, ExplicitH0 };
  Mode mode = Mode::ByTolerance;
  double level_tolerance_cm = 0.0;
  Cmat h0;  // ExplicitH0 only
};

struct ScenarioSpec {
  std::string name;
  Cmat h_s;   // cm^-1
  Cmat rho0;
  std::vector<ScenarioBath> baths;
  std::vector<ScenarioCoupling> couplings;
  SplitSpec split;
  double t_max_fs = 1000.0;
  double dt_fs = 1.0;
  int heom_depth = 6;
  double boltzmann_cm_per_K = units::kDefaultBoltzmannCmPerK;
  std::vector<std::string> methods;
  // Off-diagonal element (ascending H_S eigenbasis) reported in coherence.csv.
  int coherence_i = 0;
  int coherence_j = 1;
};

BathDescriptor realize_bath(const ScenarioBath& b, double boltzmann_cm_per_K);
std::vector<SystemCoupling> realize_couplings(const ScenarioSpec& spec);
TimeGrid scenario_grid(const ScenarioSpec& spec);

// E1 sigma_z^(1) + E2 sigma_z^(2) + J sigma_x^(1) sigma_x^(2) on |q1 q2>,
// basis index 2*q1 + q2, sigma_z = |1><1| - |0><0|.
Cmat two_qubit_hamiltonian(double e1_cm, double e2_cm, double j_cm);

// Two weakly interacting qubits, three Drude-Lorentz baths at different
// temperatures, sigma_z couplings to local baths plus a common sigma_x bath.
ScenarioSpec builtin_two_qubit_three_bath();

// Two-level reduction of the dephasing dimer: H = J sigma_x on {|01>, |10>},
// two local dephasing baths coupled through +-Z, reference Hamiltonian zero.
ScenarioSpec builtin_dephasing_dimer();

std::optional<ScenarioSpec> builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// Closed 2x2 system for the dimer coherences x = <+|rho|->, y = <-|rho|+>:
//   dx/dt = -i (2J + S(2J) - S(-2J)) x + gamma0 (y - x)
//   dy/dt = +i (2J + S(2J) - S(-2J)) y - gamma0 (y - x),
// solved by the exact 2x2 matrix exponential on the grid (rates in cm^-1,
// times in fs).
struct DimerCoherences {
  std::vector<Complex> x;
  std::vector<Complex> y;
};
DimerCoherences dephasing_analytic_coherences(double j_cm, double s_2j, double s_m2j,
                                              double gamma0, const TimeGrid& grid,
                                              Complex x0, Complex y0);

// -gamma0 + sqrt(gamma0^2 - (2J + dS)^2) (real part if the root is complex).
double slowest_decay_rate(double gamma0, double j_cm, double delta_s);

}  // namespace qme

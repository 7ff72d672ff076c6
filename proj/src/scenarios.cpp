#include "qme/scenarios.hpp"

#include <cmath>

namespace qme {

namespace {

Cmat sigma_z2() {
  Cmat s(2, 2);
  s << -1.0, 0.0, 0.0, 1.0;  // |1><1| - |0><0| on basis (|0>, |1>)
  return s;
}

Cmat sigma_x2() {
  Cmat s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Cmat kron2(const Cmat& a, const Cmat& b) {
  Cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double scenario_omega_cut() {
  // Cutoff fixed by a 100 fs bath correlation time.
  return 1.0 / (100.0 * units::kWavenumberToRadPerFs);
}

}  // namespace

BathDescriptor realize_bath(const ScenarioBath& b, double boltzmann_cm_per_K) {
  if (b.model == "drude_high_temp") {
    return drude_lorentz_high_temp(b.label, b.eta_cm, b.omega_cut_cm, b.temperature_K,
                                   boltzmann_cm_per_K);
  }
  if (b.model == "drude_exact_gamma") {
    return drude_lorentz_exact_gamma(b.label, b.eta_cm, b.omega_cut_cm, b.temperature_K,
                                     boltzmann_cm_per_K);
  }
  if (b.model == "exp_sum") {
    return BathDescriptor::exp_sum(b.label, b.beta_cm, b.modes);
  }
  throw InvariantViolation("realize_bath: unknown bath model '" + b.model + "'");
}

std::vector<SystemCoupling> realize_couplings(const ScenarioSpec& spec) {
  std::vector<SystemCoupling> out;
  for (const auto& c : spec.couplings) {
    const ScenarioBath* bath = nullptr;
    for (const auto& b : spec.baths) {
      if (b.label == c.bath_label) {
        bath = &b;
        break;
      }
    }
    if (bath == nullptr) {
      throw InvariantViolation("realize_couplings: no bath with label '" + c.bath_label + "'");
    }
    out.push_back(SystemCoupling{c.op, realize_bath(*bath, spec.boltzmann_cm_per_K)});
  }
  return out;
}

TimeGrid scenario_grid(const ScenarioSpec& spec) {
  TimeGrid g;
  g.t0_fs = 0.0;
  g.dt_fs = spec.dt_fs;
  g.steps = static_cast<int>(std::llround(spec.t_max_fs / spec.dt_fs));
  return g;
}

Cmat two_qubit_hamiltonian(double e1_cm, double e2_cm, double j_cm) {
  const Cmat id = Cmat::Identity(2, 2);
  return e1_cm * kron2(sigma_z2(), id) + e2_cm * kron2(id, sigma_z2()) +
         j_cm * kron2(sigma_x2(), sigma_x2());
}

ScenarioSpec builtin_two_qubit_three_bath() {
  ScenarioSpec s;
  s.name = "paper-fig2";
  s.h_s = two_qubit_hamiltonian(50.0, 50.0, 2.0);

  Cvec psi = Cvec::Zero(4);
  psi(1) = 1.0;  // |01> at index 2*q1 + q2
  s.rho0 = DensityMatrix::pure(psi).matrix();

  const double omega = scenario_omega_cut();
  s.baths = {
      {"b0", "drude_high_temp", 1.0, omega, 350.0, 0.0, {}},
      {"b1", "drude_high_temp", 1.0, omega, 300.0, 0.0, {}},
      {"b2", "drude_high_temp", 1.0, omega, 400.0, 0.0, {}},
  };
  const Cmat id = Cmat::Identity(2, 2);
  s.couplings = {
      {"b0", kron2(sigma_x2(), id) + kron2(id, sigma_x2())},
      {"b1", kron2(sigma_z2(), id)},
      {"b2", kron2(id, sigma_z2())},
  };
  s.split.mode = SplitSpec::Mode::ByTolerance;
  s.split.level_tolerance_cm = 10.0;  // merges the +-2 cm^-1 pair into one level
  s.t_max_fs = 2000.0;
  s.dt_fs = 1.0;
  s.heom_depth = 6;
  s.methods = {"unified", "davies", "redfield", "heom"};
  // Coherence between the two nearly degenerate middle eigenstates.
  s.coherence_i = 1;
  s.coherence_j = 2;
  return s;
}

ScenarioSpec builtin_dephasing_dimer() {
  ScenarioSpec s;
  s.name = "paper-fig3";
  // Basis (|01>, |10>); H = J (|01><10| + |10><01|).
  const double j = 2.0;
  s.h_s = j * sigma_x2();

  Cvec psi = Cvec::Zero(2);
  psi(0) = 1.0;  // |01>
  s.rho0 = DensityMatrix::pure(psi).matrix();

  const double omega = scenario_omega_cut();
  s.baths = {
      {"b1", "drude_high_temp", 1.0, omega, 300.0, 0.0, {}},
      {"b2", "drude_high_temp", 1.0, omega, 300.0, 0.0, {}},
  };
  // Z = |01><01| - |10><10|; local couplings enter with alternating sign.
  Cmat z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  s.couplings = {
      {"b1", -z},
      {"b2", z},
  };
  s.split.mode = SplitSpec::Mode::ExplicitH0;
  s.split.h0 = Cmat::Zero(2, 2);
  s.t_max_fs = 10000.0;
  s.dt_fs = 2.0;
  s.heom_depth = 6;
  s.methods = {"unified", "unified_simplified", "davies", "redfield", "heom"};
  s.coherence_i = 1;  // <+|rho|->
  s.coherence_j = 0;
  return s;
}

std::optional<ScenarioSpec> builtin_scenario(const std::string& name) {
  if (name == "paper-fig2") return builtin_two_qubit_three_bath();
  if (name == "paper-fig3") return builtin_dephasing_dimer();
  return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() { return {"paper-fig2", "paper-fig3"}; }

DimerCoherences dephasing_analytic_coherences(double j_cm, double s_2j, double s_m2j,
                                              double gamma0, const TimeGrid& grid, Complex x0,
                                              Complex y0) {
  const double w = 2.0 * j_cm + s_2j - s_m2j;
  Cmat m(2, 2);
  m << Complex(-gamma0, -w), Complex(gamma0, 0.0), Complex(gamma0, 0.0), Complex(-gamma0, w);
  const Cmat step = matrix_exp(Cmat(units::kWavenumberToRadPerFs * grid.dt_fs * m));
  DimerCoherences out;
  out.x.reserve(grid.points());
  out.y.reserve(grid.points());
  Eigen::Vector2cd v(x0, y0);
  out.x.push_back(v(0));
  out.y.push_back(v(1));
  for (int k = 1; k <= grid.steps; ++k) {
    v = step * v;
    out.x.push_back(v(0));
    out.y.push_back(v(1));
  }
  return out;
}

double slowest_decay_rate(double gamma0, double j_cm, double delta_s) {
  if (gamma0 <= 0.0) throw InvariantViolation("slowest_decay_rate: gamma0 must be positive");
  const double w = 2.0 * j_cm + delta_s;
  const Complex root = std::sqrt(Complex(gamma0 * gamma0 - w * w, 0.0));
  return -gamma0 + root.real();
}

}  // namespace qme

#include "qme/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "qme/units.hpp"

namespace qme {

Trajectory::Trajectory(TimeGrid grid, std::vector<Cmat> states, std::string method)
    : grid_(grid), states_(std::move(states)), method_(std::move(method)) {
  if (grid_.dt_fs <= 0.0) throw InvariantViolation("Trajectory: dt must be positive");
  if (states_.empty() || static_cast<int>(states_.size()) != grid_.points()) {
    throw InvariantViolation("Trajectory: state count does not match grid");
  }
  for (std::size_t k = 0; k < states_.size(); ++k) {
    const auto& s = states_[k];
    if (!s.allFinite()) {
      throw PropagationDiverged(k, "Trajectory: non-finite state at step " + std::to_string(k));
    }
    if (std::abs(s.trace() - Complex(1.0, 0.0)) > 1e-8) {
      throw PropagationDiverged(k, "Trajectory: trace drift beyond 1e-8 at step " +
                                       std::to_string(k));
    }
    if (max_abs(s - s.adjoint()) > 1e-10 * std::max(max_abs(s), 1.0)) {
      throw PropagationDiverged(k, "Trajectory: Hermiticity loss at step " + std::to_string(k));
    }
  }
}

namespace {

void check_finite(const Cmat& s, std::size_t step) {
  if (!s.allFinite()) {
    throw PropagationDiverged(step,
                              "propagate: non-finite state at step " + std::to_string(step));
  }
}

}  // namespace

Trajectory propagate(const Generator& g, const DensityMatrix& rho0, const TimeGrid& grid,
                     PropagationMethod method) {
  if (rho0.dim() != g.dim()) throw InvariantViolation("propagate: dimension mismatch");
  if (grid.dt_fs <= 0.0 || grid.steps < 1) {
    throw InvariantViolation("propagate: grid must have positive dt and steps");
  }
  const double scale = units::kWavenumberToRadPerFs;  // generator is in cm^-1
  const Cmat& lmat = g.total().matrix();

  std::vector<Cmat> states;
  states.reserve(grid.points());
  states.push_back(rho0.matrix());

  if (method == PropagationMethod::ExpmStep) {
    const Cmat step = matrix_exp(Cmat(scale * grid.dt_fs * lmat));
    Cvec v = vec(rho0.matrix());
    for (int k = 1; k <= grid.steps; ++k) {
      v = step * v;
      Cmat s = unvec(v, g.dim());
      check_finite(s, k);
      states.push_back(std::move(s));
    }
  } else {
    // Classic fixed-step RK4 with substeps sized so ||L|| dt_sub <= 0.1.
    const double norm = lmat.cwiseAbs().rowwise().sum().maxCoeff() * scale;
    const int nsub = std::max(1, static_cast<int>(std::ceil(norm * grid.dt_fs / 0.1)));
    const double h = scale * grid.dt_fs / nsub;
    Cvec v = vec(rho0.matrix());
    for (int k = 1; k <= grid.steps; ++k) {
      for (int s = 0; s < nsub; ++s) {
        const Cvec k1 = lmat * v;
        const Cvec k2 = lmat * (v + 0.5 * h * k1);
        const Cvec k3 = lmat * (v + 0.5 * h * k2);
        const Cvec k4 = lmat * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      Cmat s = unvec(v, g.dim());
      check_finite(s, k);
      states.push_back(std::move(s));
    }
  }
  return Trajectory(grid, std::move(states),
                    method == PropagationMethod::ExpmStep ? "expm_step" : "rk4");
}

std::vector<Complex> coherence_series(const Trajectory& traj, const Cmat& basis, int i, int j) {
  if (basis.rows() != traj.dim() || basis.cols() != traj.dim()) {
    throw InvariantViolation("coherence_series: basis dimension mismatch");
  }
  if (max_abs(Cmat(basis.adjoint() * basis - Cmat::Identity(basis.rows(), basis.cols()))) > 1e-10) {
    throw InvariantViolation("coherence_series: basis is not orthonormal");
  }
  std::vector<Complex> out;
  out.reserve(traj.states().size());
  const Cvec ei = basis.col(i);
  const Cvec ej = basis.col(j);
  for (const auto& s : traj.states()) out.push_back((ei.adjoint() * s * ej)(0, 0));
  return out;
}

std::vector<double> trace_distance_series(const Trajectory& a, const Trajectory& b) {
  const auto& ga = a.grid();
  const auto& gb = b.grid();
  if (ga.steps != gb.steps || std::abs(ga.dt_fs - gb.dt_fs) > 1e-12 ||
      std::abs(ga.t0_fs - gb.t0_fs) > 1e-12) {
    throw InvariantViolation("trace_distance_series: grids differ");
  }
  std::vector<double> out;
  out.reserve(a.states().size());
  for (std::size_t k = 0; k < a.states().size(); ++k) {
    out.push_back(trace_distance(a.states()[k], b.states()[k]));
  }
  return out;
}

std::vector<double> positivity_monitor(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.states().size());
  for (const auto& s : traj.states()) {
    const Cmat h = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Cmat> es(h, Eigen::EigenvaluesOnly);
    out.push_back(es.eigenvalues().minCoeff());
  }
  return out;
}

double suggested_dt_fs(const Generator& g) {
  double w_max = 0.0;
  double g_max = 0.0;
  for (const auto& part : g.baths()) {
    for (const auto& block : part.blocks) {
      for (const auto& [alpha, w] : block.index) w_max = std::max(w_max, std::abs(w));
      g_max = std::max(g_max, max_abs(block.matrix));
    }
  }
  Eigen::SelfAdjointEigenSolver<Cmat> es(g.hamiltonian().matrix(), Eigen::EigenvaluesOnly);
  w_max = std::max(w_max, es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff());
  double dt_cm = std::numeric_limits<double>::infinity();
  if (w_max > 0.0) dt_cm = 2.0 * std::numbers::pi / w_max;
  if (g_max > 0.0) dt_cm = std::min(dt_cm, 1.0 / g_max);
  if (!std::isfinite(dt_cm)) return 1.0;
  return dt_cm / 40.0 / units::kWavenumberToRadPerFs;
}

}  // namespace qme

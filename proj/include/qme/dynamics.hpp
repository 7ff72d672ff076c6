#pragma once

#include <string>
#include <vector>

#include "qme/generators.hpp"
#include "qme/linalg.hpp"

namespace qme {

struct TimeGrid {
  double t0_fs = 0.0;
  double dt_fs = 1.0;
  int steps = 1;

  double time_at(int k) const { return t0_fs + dt_fs * k; }
  int points() const { return steps + 1; }
};

enum class PropagationMethod { ExpmStep, Rk4 };

// Time series of density matrices on a fixed grid. Trace and Hermiticity are
// enforced; positivity is monitored but never repaired.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::vector<Cmat> states, std::string method);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<Cmat>& states() const { return states_; }
  const Cmat& state(int k) const { return states_.at(k); }
  const std::string& method() const { return method_; }
  Index dim() const { return states_.front().rows(); }

 private:
  TimeGrid grid_;
  std::vector<Cmat> states_;
  std::string method_;
};

Trajectory propagate(const Generator& g, const DensityMatrix& rho0, const TimeGrid& grid,
                     PropagationMethod method = PropagationMethod::ExpmStep);

// <e_i| rho(t) |e_j> for an orthonormal basis given as matrix columns.
std::vector<Complex> coherence_series(const Trajectory& traj, const Cmat& basis, int i, int j);

std::vector<double> trace_distance_series(const Trajectory& a, const Trajectory& b);

// Minimum eigenvalue of each state.
std::vector<double> positivity_monitor(const Trajectory& traj);

// (1/40) x min(2 pi / w_max, 1 / gamma_max), converted to fs.
double suggested_dt_fs(const Generator& g);

}  // namespace qme

#include "qme/heom.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qme/units.hpp"

namespace qme {

namespace {

void enumerate_indices(int modes, int depth, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == modes) {
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int v : current) used += v;
  for (int n = 0; n + used <= depth; ++n) {
    current.push_back(n);
    enumerate_indices(modes, depth, current, out);
    current.pop_back();
  }
}

}  // namespace

Hierarchy::Hierarchy(HermitianOperator h_s, const std::vector<SystemCoupling>& couplings,
                     int depth)
    : h_s_(std::move(h_s)), depth_(depth) {
  if (depth < 1) throw InvariantViolation("Hierarchy: depth must be at least 1");
  for (const auto& c : couplings) {
    if (c.op.rows() != h_s_.dim() || c.op.cols() != h_s_.dim()) {
      throw InvariantViolation("Hierarchy: coupling dimension mismatch");
    }
    if (c.bath.gamma_mode() != GammaMode::ExpSum) {
      throw InvariantViolation("Hierarchy: baths must be in exp_sum mode");
    }
    for (const auto& m : c.bath.modes()) {
      if (std::abs(m.decay.imag()) > 1e-12 * std::abs(m.decay.real())) {
        throw InvariantViolation("Hierarchy: complex mode decays are unsupported");
      }
      amplitudes_.push_back(m.amplitude);
      decays_.push_back(m.decay.real());
      coupling_ops_.push_back(c.op);
    }
  }

  const int modes = static_cast<int>(amplitudes_.size());
  std::vector<int> current;
  enumerate_indices(modes, depth_, current, indices_);
  std::map<std::vector<int>, int> position;
  for (std::size_t i = 0; i < indices_.size(); ++i) position[indices_[i]] = static_cast<int>(i);

  up_.assign(indices_.size(), std::vector<int>(modes, -1));
  down_.assign(indices_.size(), std::vector<int>(modes, -1));
  damping_.assign(indices_.size(), 0.0);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    double damp = 0.0;
    for (int m = 0; m < modes; ++m) damp += indices_[i][m] * decays_[m];
    damping_[i] = damp;
    std::vector<int> n = indices_[i];
    for (int m = 0; m < modes; ++m) {
      ++n[m];
      if (auto it = position.find(n); it != position.end()) up_[i][m] = it->second;
      n[m] -= 2;
      if (n[m] >= 0) {
        if (auto it = position.find(n); it != position.end()) down_[i][m] = it->second;
      }
      ++n[m];
    }
  }
}

void Hierarchy::rhs(const std::vector<Cmat>& ados, std::vector<Cmat>& out) const {
  const Complex mi(0.0, -1.0);
  const int modes = static_cast<int>(amplitudes_.size());
  const Cmat& h = h_s_.matrix();
  out.resize(ados.size());
  for (std::size_t i = 0; i < ados.size(); ++i) {
    const Cmat& rho = ados[i];
    Cmat d = mi * (h * rho - rho * h) - damping_[i] * rho;
    for (int m = 0; m < modes; ++m) {
      const Cmat& a = coupling_ops_[m];
      if (const int u = up_[i][m]; u >= 0) {
        d += mi * (a * ados[u] - ados[u] * a);
      }
      if (const int dn = down_[i][m]; dn >= 0) {
        const double n_m = indices_[i][m];
        d += mi * n_m * (amplitudes_[m] * (a * ados[dn]) -
                         std::conj(amplitudes_[m]) * (ados[dn] * a));
      }
    }
    out[i] = std::move(d);
  }
}

double Hierarchy::rate_estimate() const {
  Eigen::SelfAdjointEigenSolver<Cmat> es(h_s_.matrix(), Eigen::EigenvaluesOnly);
  double est = es.eigenvalues().cwiseAbs().maxCoeff() * 2.0;
  for (std::size_t m = 0; m < amplitudes_.size(); ++m) {
    const double a_norm = coupling_ops_[m].operatorNorm();
    est += depth_ * decays_[m] +
           4.0 * a_norm * std::sqrt((depth_ + 1.0) * std::abs(amplitudes_[m]));
  }
  return est;
}

Trajectory propagate_heom(const Hierarchy& h, const DensityMatrix& rho0, const TimeGrid& grid) {
  if (rho0.dim() != h.dim()) throw InvariantViolation("propagate_heom: dimension mismatch");
  if (grid.dt_fs <= 0.0 || grid.steps < 1) {
    throw InvariantViolation("propagate_heom: grid must have positive dt and steps");
  }
  const double scale = units::kWavenumberToRadPerFs;
  const int nsub =
      std::max(1, static_cast<int>(std::ceil(h.rate_estimate() * scale * grid.dt_fs / 0.5)));
  const double dt = scale * grid.dt_fs / nsub;

  std::vector<Cmat> ados(h.size(), Cmat::Zero(h.dim(), h.dim()));
  ados[0] = rho0.matrix();
  std::vector<Cmat> k1, k2, k3, k4;
  std::vector<Cmat> tmp(h.size());

  std::vector<Cmat> states;
  states.reserve(grid.points());
  states.push_back(ados[0]);

  for (int step = 1; step <= grid.steps; ++step) {
    for (int s = 0; s < nsub; ++s) {
      h.rhs(ados, k1);
      for (std::size_t i = 0; i < ados.size(); ++i) tmp[i] = ados[i] + 0.5 * dt * k1[i];
      h.rhs(tmp, k2);
      for (std::size_t i = 0; i < ados.size(); ++i) tmp[i] = ados[i] + 0.5 * dt * k2[i];
      h.rhs(tmp, k3);
      for (std::size_t i = 0; i < ados.size(); ++i) tmp[i] = ados[i] + dt * k3[i];
      h.rhs(tmp, k4);
      for (std::size_t i = 0; i < ados.size(); ++i) {
        ados[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    if (!ados[0].allFinite()) {
      throw PropagationDiverged(static_cast<std::size_t>(step),
                                "propagate_heom: non-finite system state at step " +
                                    std::to_string(step));
    }
    states.push_back(ados[0]);
  }
  return Trajectory(grid, std::move(states), "heom");
}

std::vector<ConvergenceRow> convergence_scan(const HermitianOperator& h_s,
                                             const std::vector<SystemCoupling>& couplings,
                                             const DensityMatrix& rho0, const TimeGrid& grid,
                                             const std::vector<int>& depths) {
  std::vector<ConvergenceRow> rows;
  if (depths.size() < 2) return rows;
  std::vector<Trajectory> trajs;
  trajs.reserve(depths.size());
  for (int depth : depths) {
    trajs.push_back(propagate_heom(Hierarchy(h_s, couplings, depth), rho0, grid));
  }
  for (std::size_t i = 1; i < depths.size(); ++i) {
    const auto dists = trace_distance_series(trajs[i - 1], trajs[i]);
    ConvergenceRow row{depths[i - 1], depths[i], 0.0};
    for (double d : dists) row.max_trace_distance = std::max(row.max_trace_distance, d);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qme

#pragma once

#include <vector>

#include "qme/dynamics.hpp"
#include "qme/generators.hpp"
#include "qme/linalg.hpp"

namespace qme {

// Hierarchical equations of motion for exponential-mode baths with real decay
// rates (one coupling operator per mode), hard-truncated at a maximum total
// occupation. Numerically exact reference dynamics once converged in depth.
class Hierarchy {
 public:
  Hierarchy(HermitianOperator h_s, const std::vector<SystemCoupling>& couplings, int depth);

  Index dim() const { return h_s_.dim(); }
  int depth() const { return depth_; }
  std::size_t size() const { return indices_.size(); }  // number of ADOs
  const std::vector<std::vector<int>>& indices() const { return indices_; }

  // d(ados)/dt in cm^-1 time units:
  //   -i[H, rho_n] - (sum_m n_m nu_m) rho_n - i sum_m [A_m, rho_{n+e_m}]
  //   - i sum_m n_m (c_m A_m rho_{n-e_m} - c_m^* rho_{n-e_m} A_m).
  void rhs(const std::vector<Cmat>& ados, std::vector<Cmat>& out) const;

  // Crude spectral-radius estimate used to pick RK4 substeps, cm^-1.
  double rate_estimate() const;

 private:
  HermitianOperator h_s_;
  std::vector<Complex> amplitudes_;  // c_m
  std::vector<double> decays_;       // nu_m
  std::vector<Cmat> coupling_ops_;   // A_m
  int depth_;
  std::vector<std::vector<int>> indices_;
  std::vector<std::vector<int>> up_;    // [ado][mode] -> index of n + e_m, -1 if truncated
  std::vector<std::vector<int>> down_;  // [ado][mode] -> index of n - e_m, -1 if absent
  std::vector<double> damping_;         // sum_m n_m nu_m per ado
};

Trajectory propagate_heom(const Hierarchy& h, const DensityMatrix& rho0, const TimeGrid& grid);

struct ConvergenceRow {
  int depth_a = 0;
  int depth_b = 0;
  double max_trace_distance = 0.0;
};

// Propagates at each listed depth and reports max-over-time trace distances of
// consecutive entries.
std::vector<ConvergenceRow> convergence_scan(const HermitianOperator& h_s,
                                             const std::vector<SystemCoupling>& couplings,
                                             const DensityMatrix& rho0, const TimeGrid& grid,
                                             const std::vector<int>& depths);

}  // namespace qme

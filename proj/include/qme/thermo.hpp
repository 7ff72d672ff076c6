#pragma once

#include <vector>

#include "qme/dynamics.hpp"
#include "qme/generators.hpp"
#include "qme/linalg.hpp"

namespace qme {

// exp(-beta H0)/Z computed in the eigenbasis; trace is exactly one.
DensityMatrix gibbs_state(const HermitianOperator& h0, double beta_cm);

// Trace norm of L(rho_beta).
double stationarity_residual(const Generator& g, const DensityMatrix& rho_beta);

// max over samples of || U(t) L(rho) U(t)^dag - L(U(t) rho U(t)^dag) ||_1 with
// U(t) = exp(-i H0 t), t in fs.
double covariance_residual(const Generator& g, const HermitianOperator& h0,
                           const std::vector<std::pair<double, DensityMatrix>>& samples);

struct EntropySample {
  double t_fs = 0.0;
  double sigma = 0.0;  // cm^-1
  bool flagged = false;  // state not positive beyond the flooring tolerance
};

// sigma(t) = -Tr[(L rho) ln rho] - sum_n beta_n Tr(H0 L_n rho), with ln rho via
// eigendecomposition and eigenvalues floored at 1e-14.
std::vector<EntropySample> entropy_production(const Trajectory& traj, const Generator& g,
                                              const HermitianOperator& h0);

// Heat current INTO bath n is -Tr(H0 L_n rho); one row per grid point.
std::vector<std::vector<double>> heat_currents(const Trajectory& traj, const Generator& g,
                                               const HermitianOperator& h0);

double von_neumann_entropy(const DensityMatrix& rho);

struct ThermoReport {
  double stationarity_residual = 0.0;
  std::vector<std::pair<double, double>> covariance_residuals;  // (t_fs, residual)
  std::vector<EntropySample> entropy;
  std::vector<std::vector<double>> heat;  // per grid point, per bath
};

}  // namespace qme

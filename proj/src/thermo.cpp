#include "qme/thermo.hpp"

#include <cmath>

#include "qme/units.hpp"

namespace qme {

DensityMatrix gibbs_state(const HermitianOperator& h0, double beta_cm) {
  if (beta_cm <= 0.0) throw InvariantViolation("gibbs_state: beta must be positive");
  Eigen::SelfAdjointEigenSolver<Cmat> es(h0.matrix());
  const auto& vals = es.eigenvalues();
  const double emin = vals.minCoeff();
  Eigen::VectorXd w(vals.size());
  for (Index i = 0; i < vals.size(); ++i) w(i) = std::exp(-beta_cm * (vals(i) - emin));
  w /= w.sum();
  Cmat rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

double stationarity_residual(const Generator& g, const DensityMatrix& rho_beta) {
  const Cmat r = g.total().apply(rho_beta.matrix());
  return trace_norm_hermitian(0.5 * (r + r.adjoint()));
}

double covariance_residual(const Generator& g, const HermitianOperator& h0,
                           const std::vector<std::pair<double, DensityMatrix>>& samples) {
  double worst = 0.0;
  for (const auto& [t_fs, rho] : samples) {
    const double theta = units::kWavenumberToRadPerFs * t_fs;
    const Cmat u = matrix_exp(Cmat(Complex(0.0, -theta) * h0.matrix()));
    const Cmat lhs = u * g.total().apply(rho.matrix()) * u.adjoint();
    const Cmat rhs = g.total().apply(Cmat(u * rho.matrix() * u.adjoint()));
    worst = std::max(worst, trace_norm_hermitian(0.5 * ((lhs - rhs) + (lhs - rhs).adjoint())));
  }
  return worst;
}

namespace {

constexpr double kEigenvalueFloor = 1e-14;
constexpr double kNegativityFlag = 1e-8;

Cmat floored_log(const Cmat& rho, bool& flagged) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(0.5 * (rho + rho.adjoint()));
  const auto& vals = es.eigenvalues();
  if (vals.minCoeff() < -kNegativityFlag) flagged = true;
  Eigen::VectorXd logs(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    logs(i) = std::log(std::max(vals(i), kEigenvalueFloor));
  }
  return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::vector<EntropySample> entropy_production(const Trajectory& traj, const Generator& g,
                                              const HermitianOperator& h0) {
  std::vector<Superoperator> parts;
  for (std::size_t n = 0; n < g.baths().size(); ++n) parts.push_back(g.bath_generator(n));

  std::vector<EntropySample> out;
  out.reserve(traj.states().size());
  for (std::size_t k = 0; k < traj.states().size(); ++k) {
    const Cmat& rho = traj.states()[k];
    EntropySample s;
    s.t_fs = traj.grid().time_at(static_cast<int>(k));
    const Cmat log_rho = floored_log(rho, s.flagged);
    const Cmat lrho = g.total().apply(rho);
    double sigma = -std::real((lrho * log_rho).trace());
    for (std::size_t n = 0; n < parts.size(); ++n) {
      const Cmat lnrho = parts[n].apply(rho);
      sigma -= g.baths()[n].beta * std::real((h0.matrix() * lnrho).trace());
    }
    s.sigma = sigma;
    out.push_back(s);
  }
  return out;
}

std::vector<std::vector<double>> heat_currents(const Trajectory& traj, const Generator& g,
                                               const HermitianOperator& h0) {
  std::vector<Superoperator> parts;
  for (std::size_t n = 0; n < g.baths().size(); ++n) parts.push_back(g.bath_generator(n));
  std::vector<std::vector<double>> out;
  out.reserve(traj.states().size());
  for (const auto& rho : traj.states()) {
    std::vector<double> row;
    row.reserve(parts.size());
    for (const auto& part : parts) {
      row.push_back(-std::real((h0.matrix() * part.apply(rho)).trace()));
    }
    out.push_back(std::move(row));
  }
  return out;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace qme

#include "qme/bath.hpp"

#include <cmath>

namespace qme {

BathDescriptor BathDescriptor::exp_sum(std::string label, double beta_cm,
                                       std::vector<ExponentialMode> modes) {
  if (beta_cm <= 0.0) throw InvariantViolation("BathDescriptor: beta must be positive");
  for (const auto& m : modes) {
    if (!(m.decay.real() > 0.0)) {
      throw InvariantViolation("BathDescriptor: mode decay must have positive real part");
    }
  }
  BathDescriptor b;
  b.label_ = std::move(label);
  b.beta_ = beta_cm;
  b.modes_ = std::move(modes);
  b.mode_ = GammaMode::ExpSum;
  return b;
}

BathDescriptor drude_lorentz_high_temp(std::string label, double eta_cm, double omega_cut_cm,
                                       double temperature_K, double boltzmann_cm_per_K) {
  if (eta_cm <= 0.0 || omega_cut_cm <= 0.0 || temperature_K <= 0.0) {
    throw InvariantViolation("drude_lorentz_high_temp: eta, Omega, T must be positive");
  }
  const double beta = units::inverse_temperature_cm(temperature_K, boltzmann_cm_per_K);
  const Complex c = eta_cm * omega_cut_cm * Complex(2.0 / (beta * omega_cut_cm), -1.0);
  auto b = BathDescriptor::exp_sum(std::move(label), beta, {{c, Complex(omega_cut_cm, 0.0)}});
  b.eta_ = eta_cm;
  b.omega_cut_ = omega_cut_cm;
  return b;
}

BathDescriptor drude_lorentz_exact_gamma(std::string label, double eta_cm, double omega_cut_cm,
                                         double temperature_K, double boltzmann_cm_per_K) {
  auto b = drude_lorentz_high_temp(std::move(label), eta_cm, omega_cut_cm, temperature_K,
                                   boltzmann_cm_per_K);
  b.mode_ = GammaMode::DrudeExactGamma;
  return b;
}

namespace {

// 4 eta Omega w / [(w^2 + Omega^2)(1 - e^{-beta w})], continuous at w = 0.
double drude_exact_rate(double eta, double omega_cut, double beta, double w) {
  const double denom = w * w + omega_cut * omega_cut;
  if (w == 0.0) return 4.0 * eta / (beta * omega_cut);
  // -expm1(-x) = 1 - e^{-x} without cancellation near x = 0.
  return 4.0 * eta * omega_cut * w / (denom * (-std::expm1(-beta * w)));
}

double high_temp_shift(double eta, double omega_cut, double beta, double w) {
  const double a = 2.0 / (beta * omega_cut);
  return eta * omega_cut * (a * w - omega_cut) / (omega_cut * omega_cut + w * w);
}

}  // namespace

Complex BathDescriptor::half_fourier(double w) const {
  if (mode_ == GammaMode::DrudeExactGamma) {
    return Complex(0.5 * drude_exact_rate(eta_, omega_cut_, beta_, w),
                   high_temp_shift(eta_, omega_cut_, beta_, w));
  }
  Complex g(0.0, 0.0);
  for (const auto& m : modes_) g += m.amplitude / (m.decay - Complex(0.0, w));
  return g;
}

double BathDescriptor::gamma(double w) const {
  if (mode_ == GammaMode::DrudeExactGamma) {
    return drude_exact_rate(eta_, omega_cut_, beta_, w);
  }
  return 2.0 * half_fourier(w).real();
}

std::pair<Complex, Complex> BathDescriptor::gamma_s(double w, double wp) const {
  const Complex gw = half_fourier(w);
  const Complex gwp = std::conj(half_fourier(wp));
  return {gw + gwp, (gw - gwp) / Complex(0.0, 2.0)};
}

double BathDescriptor::rate_scale() const {
  if (mode_ == GammaMode::DrudeExactGamma) return omega_cut_;
  double s = modes_.empty() ? 1.0 : modes_.front().decay.real();
  for (const auto& m : modes_) s = std::min(s, m.decay.real());
  return s;
}

double kms_residual(const BathDescriptor& b, double w) {
  const double gp = b.gamma(w);
  const double gm = b.gamma(-w);
  const double denom = std::max(gp, gm);
  if (denom <= 0.0) return 0.0;
  return std::abs(gm - std::exp(-b.beta() * w) * gp) / denom;
}

double kms_defect(const BathDescriptor& b, double w) {
  return std::abs(b.gamma(-w) - std::exp(-b.beta() * w) * b.gamma(w));
}

}  // namespace qme

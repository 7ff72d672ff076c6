#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qme/linalg.hpp"
#include "qme/units.hpp"

namespace qme {

// One term of C(s) = sum_k c_k exp(-nu_k s); Re nu > 0 keeps the half-Fourier
// integral finite.
struct ExponentialMode {
  Complex amplitude;  // cm^-2
  Complex decay;      // cm^-1
};

enum class GammaMode { ExpSum, DrudeExactGamma };

// Thermal bath with exponential-mode correlation function, giving closed-form
// half-Fourier transforms Gamma(w) and the rate/shift pair (gamma, S).
class BathDescriptor {
 public:
  static BathDescriptor exp_sum(std::string label, double beta_cm,
                                std::vector<ExponentialMode> modes);

  const std::string& label() const { return label_; }
  double beta() const { return beta_; }
  const std::vector<ExponentialMode>& modes() const { return modes_; }
  GammaMode gamma_mode() const { return mode_; }
  double eta() const { return eta_; }
  double omega_cut() const { return omega_cut_; }
  // beta*Omega for Drude constructors; the high-temperature closed forms
  // assume this is well below one.
  double beta_omega() const { return beta_ * omega_cut_; }
  bool high_temp_ok() const { return omega_cut_ <= 0.0 || beta_omega() < 1.0; }

  // Gamma(w) = int_0^inf e^{iws} C(s) ds.
  Complex half_fourier(double w) const;
  // Single-frequency rate gamma(w,w) = 2 Re Gamma(w) (exact closed form in
  // DrudeExactGamma mode, which satisfies KMS identically).
  double gamma(double w) const;
  // (gamma, S)(w, w') = (Gamma(w) + Gamma*(w'), [Gamma(w) - Gamma*(w')]/2i).
  // Both are real on the diagonal w = w'.
  std::pair<Complex, Complex> gamma_s(double w, double wp) const;
  // Characteristic bath relaxation rate (min Re nu, or the Drude cutoff).
  double rate_scale() const;

  friend BathDescriptor drude_lorentz_high_temp(std::string label, double eta_cm,
                                                double omega_cut_cm, double temperature_K,
                                                double boltzmann_cm_per_K);
  friend BathDescriptor drude_lorentz_exact_gamma(std::string label, double eta_cm,
                                                  double omega_cut_cm, double temperature_K,
                                                  double boltzmann_cm_per_K);

 private:
  BathDescriptor() = default;

  std::string label_;
  double beta_ = 0.0;
  std::vector<ExponentialMode> modes_;
  GammaMode mode_ = GammaMode::ExpSum;
  double eta_ = 0.0;
  double omega_cut_ = 0.0;
};

// High-temperature Drude-Lorentz bath: one mode c = eta*Omega*(2/(beta*Omega) - i),
// nu = Omega.
BathDescriptor drude_lorentz_high_temp(std::string label, double eta_cm, double omega_cut_cm,
                                       double temperature_K,
                                       double boltzmann_cm_per_K = units::kDefaultBoltzmannCmPerK);

// Same S as the high-temperature form, but gamma from the full thermal Fourier
// transform, so the KMS relation gamma(-w) = e^{-beta w} gamma(w) holds exactly.
BathDescriptor drude_lorentz_exact_gamma(std::string label, double eta_cm, double omega_cut_cm,
                                         double temperature_K,
                                         double boltzmann_cm_per_K = units::kDefaultBoltzmannCmPerK);

// |gamma(-w) - e^{-beta w} gamma(w)| / max(gamma(w), gamma(-w)).
double kms_residual(const BathDescriptor& b, double w);
// Unnormalized defect |gamma(-w) - e^{-beta w} gamma(w)|; scales as beta^2 at
// fixed w for the high-temperature Drude form.
double kms_defect(const BathDescriptor& b, double w);

}  // namespace qme

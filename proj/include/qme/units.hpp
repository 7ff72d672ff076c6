#pragma once

namespace qme::units {

// Angular frequency per wavenumber: 2*pi*c with c in cm/fs.
inline constexpr double kWavenumberToRadPerFs = 1.883651567e-4;

// Boltzmann constant in cm^-1/K used throughout unless overridden.
inline constexpr double kDefaultBoltzmannCmPerK = 0.734;

inline double wavenumber_to_rad_per_fs(double energy_cm) {
  return kWavenumberToRadPerFs * energy_cm;
}

inline double rad_per_fs_to_wavenumber(double omega_rad_fs) {
  return omega_rad_fs / kWavenumberToRadPerFs;
}

// beta = 1/(kB T), in cm (inverse wavenumbers).
inline double inverse_temperature_cm(double temperature_kelvin,
                                     double boltzmann_cm_per_kelvin = kDefaultBoltzmannCmPerK) {
  return 1.0 / (boltzmann_cm_per_kelvin * temperature_kelvin);
}

}  // namespace qme::units

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qme/bath.hpp"
#include "qme/units.hpp"

using namespace qme;

namespace {

// Independent oracle: composite-Simpson quadrature of the half-Fourier
// integral int_0^T e^{iws} C(s) ds with C from the exponential modes.
Complex gamma_by_quadrature(const BathDescriptor& b, double w) {
  double nu_min = b.modes().front().decay.real();
  for (const auto& m : b.modes()) nu_min = std::min(nu_min, m.decay.real());
  const double T = 40.0 / nu_min;
  const int n = 1 << 16;  // even
  const double h = T / n;
  auto f = [&](double s) {
    Complex c(0.0, 0.0);
    for (const auto& m : b.modes()) c += m.amplitude * std::exp(-m.decay * s);
    return std::exp(Complex(0.0, w * s)) * c;
  };
  Complex acc = f(0.0) + f(T);
  for (int k = 1; k < n; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
  return acc * (h / 3.0);
}

double scenario_omega() { return 1.0 / (100.0 * units::kWavenumberToRadPerFs); }

}  // namespace

TEST_CASE("unit conversions round-trip the paper parameters") {
  CHECK(units::wavenumber_to_rad_per_fs(0.0) == 0.0);
  // 53.08 cm^-1 is close to a 100 fs correlation time.
  CHECK(units::wavenumber_to_rad_per_fs(53.08) == doctest::Approx(0.009998).epsilon(1e-4));
  CHECK(units::rad_per_fs_to_wavenumber(0.01) == doctest::Approx(53.0884).epsilon(1e-5));
  CHECK(scenario_omega() == doctest::Approx(53.08).epsilon(2e-4));
  // beta * Omega at 300 K with the configured Boltzmann constant.
  const double beta = units::inverse_temperature_cm(300.0);
  CHECK(beta * scenario_omega() == doctest::Approx(0.241).epsilon(1e-3));
}

TEST_CASE("high-temperature Drude constructor produces the closed-form mode") {
  const auto b = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  REQUIRE(b.modes().size() == 1);
  const auto& m = b.modes().front();
  // c = eta*Omega*(2/(beta*Omega) - i) = (2 eta / beta, -eta*Omega).
  CHECK(m.amplitude.real() == doctest::Approx(440.4).epsilon(1e-12));
  CHECK(m.amplitude.imag() == doctest::Approx(-scenario_omega()).epsilon(1e-12));
  CHECK(m.decay.real() == doctest::Approx(scenario_omega()).epsilon(1e-14));
  CHECK(b.high_temp_ok());

  // C(0) = c.
  Complex c0(0.0, 0.0);
  for (const auto& mode : b.modes()) c0 += mode.amplitude;
  CHECK(std::abs(c0 - m.amplitude) == 0.0);

  // gamma(0) = 4 eta / (beta Omega); frozen from the closed form.
  CHECK(b.gamma(0.0) == doctest::Approx(16.591203002136).epsilon(1e-12));
}

TEST_CASE("Gamma(0) matches the closed form at the paper parameters") {
  const auto b = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  const Complex g0 = b.half_fourier(0.0);
  CHECK(g0.real() == doctest::Approx(8.295601501068).epsilon(1e-12));
  CHECK(g0.imag() == doctest::Approx(-1.0).epsilon(1e-12));
  // Single-mode identity Gamma(w) = c / (nu - i w).
  const auto& m = b.modes().front();
  for (double w : {-200.0, -4.0, 0.0, 4.0, 98.02, 200.04}) {
    const Complex expected = m.amplitude / (m.decay - Complex(0.0, w));
    CHECK(std::abs(b.half_fourier(w) - expected) < 1e-12 * std::abs(expected));
  }
}

TEST_CASE("exp_sum Gamma matches the quadrature oracle on a frequency grid") {
  const auto b = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  for (int k = 0; k < 50; ++k) {
    const double w = -250.0 + 10.0 * k;
    const Complex expected = gamma_by_quadrature(b, w);
    CHECK(std::abs(b.half_fourier(w) - expected) <= 1e-8 * std::abs(expected));
  }
  // Also a two-mode descriptor with a complex decay.
  const auto two = BathDescriptor::exp_sum(
      "two", 0.005,
      {{Complex(100.0, -20.0), Complex(50.0, 0.0)}, {Complex(30.0, 5.0), Complex(20.0, 7.0)}});
  for (int k = 0; k < 50; ++k) {
    const double w = -120.0 + 5.0 * k;
    const Complex expected = gamma_by_quadrature(two, w);
    CHECK(std::abs(two.half_fourier(w) - expected) <= 1e-8 * std::abs(expected));
  }
}

TEST_CASE("gamma_s pair identities") {
  const auto b = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  // Diagonal collapse: gamma = 2 Re Gamma, S = Im Gamma.
  for (double w : {-7.0, 0.0, 13.0, 102.02}) {
    const auto [g, s] = b.gamma_s(w, w);
    CHECK(g.real() == doctest::Approx(2.0 * b.half_fourier(w).real()).epsilon(1e-14));
    CHECK(std::abs(g.imag()) < 1e-14);
    CHECK(s.real() == doctest::Approx(b.half_fourier(w).imag()).epsilon(1e-14));
    CHECK(std::abs(s.imag()) < 1e-14);
  }
  // Hermiticity gamma(w, w') = gamma(w', w)*.
  for (double w : {-11.0, 3.0}) {
    for (double wp : {-5.0, 17.0}) {
      const auto g1 = b.gamma_s(w, wp).first;
      const auto g2 = b.gamma_s(wp, w).first;
      CHECK(std::abs(g1 - std::conj(g2)) < 1e-14);
    }
  }
}

TEST_CASE("dimer shift difference matches the closed form") {
  // S(2J) - S(-2J) for one bath: eta*Omega*8a*J' /(Omega^2 + (2J)^2) with
  // a = 2/(beta Omega) and 2J = 4 cm^-1; frozen from the closed form.
  const auto b = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  const double s_diff = b.half_fourier(4.0).imag() - b.half_fourier(-4.0).imag();
  CHECK(s_diff == doctest::Approx(1.2430251314161673).epsilon(1e-12));
  // Against the spec-level approximation.
  CHECK(s_diff == doctest::Approx(1.2436).epsilon(1e-3));
}

TEST_CASE("exact-gamma descriptor satisfies KMS identically") {
  const auto b = drude_lorentz_exact_gamma("b", 1.0, scenario_omega(), 300.0);
  for (double w : {-150.0, -4.0, 0.0, 1e-3, 4.0, 53.0, 202.0}) {
    CHECK(kms_residual(b, w) < 1e-15);
  }
  CHECK(kms_residual(b, 0.0) == 0.0);
}

TEST_CASE("exact gamma is continuous through zero and matches the series") {
  const auto b = drude_lorentz_exact_gamma("b", 1.0, scenario_omega(), 300.0);
  const double g0 = b.gamma(0.0);
  CHECK(g0 == doctest::Approx(16.591203002136).epsilon(1e-12));
  const double beta = b.beta();
  for (double w : {1e-6, -1e-6}) {
    const double x = beta * w;
    // x/(1 - e^{-x}) = 1 + x/2 + x^2/12 + O(x^4)
    const double series = g0 / (1.0 + (w / scenario_omega()) * (w / scenario_omega())) *
                          (1.0 + 0.5 * x + x * x / 12.0);
    CHECK(b.gamma(w) == doctest::Approx(series).epsilon(1e-10));
  }
  // High-temperature agreement at small beta*w: ratio -> 1 within O((beta w)^2).
  const auto ht = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  for (double w : {0.5, 1.0, 2.0, 4.0}) {
    const double x = b.beta() * w;
    CHECK(std::abs(b.gamma(w) / ht.gamma(w) - 1.0) < 0.5 * x * x + 1e-12);
  }
}

TEST_CASE("high-temperature KMS residual magnitude and beta scaling") {
  const double omega = scenario_omega();
  const auto b300 = drude_lorentz_high_temp("b", 1.0, omega, 300.0);
  const auto b600 = drude_lorentz_high_temp("b", 1.0, omega, 600.0);

  // At w = Omega, beta*Omega = 0.24: residual is a few times 1e-3.
  const double r = kms_residual(b300, omega);
  CHECK(r > 1e-4);
  CHECK(r < 5e-3);
  CHECK(kms_residual(b300, 0.0) == 0.0);

  // The unnormalized KMS defect scales as beta^2 at fixed w: halving beta
  // divides it by 4 (up to finite-beta corrections; frozen ratio 3.77).
  const double ratio = kms_defect(b300, omega) / kms_defect(b600, omega);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
  CHECK(ratio == doctest::Approx(3.7701).epsilon(1e-3));
}

TEST_CASE("single-frequency rates are nonnegative on a grid (thermal descriptors)") {
  for (const auto& b :
       {drude_lorentz_high_temp("a", 1.0, scenario_omega(), 300.0),
        drude_lorentz_exact_gamma("b", 2.0, 80.0, 400.0),
        drude_lorentz_high_temp("c", 0.3, 20.0, 700.0)}) {
    for (int k = -60; k <= 60; ++k) {
      CHECK(b.gamma(5.0 * k) >= 0.0);
    }
  }
}

TEST_CASE("two-frequency coefficient matrices have the rank-two spectrum") {
  // M_{ij} = Gamma(w_i) + Gamma*(w_j) = g 1^dag + 1 g^dag has eigenvalues
  // Re(G) +- sqrt(Re(G)^2 + |Gamma(w) - Gamma(w')|^2) with G = Gamma(w) +
  // Gamma(w'); the lower one is <= 0 whenever the two values differ (this is
  // the nonsecular positivity defect), while the diagonal rates stay
  // nonnegative.
  const auto b = drude_lorentz_high_temp("b", 1.0, scenario_omega(), 300.0);
  for (double w : {-90.0, -4.0, 0.5, 30.0}) {
    for (double wp : {-55.0, 4.0, 61.0, 150.0}) {
      Cmat m(2, 2);
      m(0, 0) = b.gamma_s(w, w).first;
      m(0, 1) = b.gamma_s(w, wp).first;  // entry (row w, col w') = Gamma(w) + Gamma*(w')
      m(1, 0) = b.gamma_s(wp, w).first;
      m(1, 1) = b.gamma_s(wp, wp).first;
      Eigen::SelfAdjointEigenSolver<Cmat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
      const Complex gw = b.half_fourier(w);
      const Complex gwp = b.half_fourier(wp);
      const double mid = gw.real() + gwp.real();
      const double rad = std::sqrt(mid * mid + std::norm(gw - gwp));
      CHECK(es.eigenvalues().minCoeff() == doctest::Approx(mid - rad).epsilon(1e-12));
      CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(mid + rad).epsilon(1e-12));
      CHECK(es.eigenvalues().minCoeff() <= 1e-12);
      CHECK(m(0, 0).real() >= 0.0);
      CHECK(m(1, 1).real() >= 0.0);
    }
  }
}

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS(BathDescriptor::exp_sum("x", -1.0, {{Complex(1, 0), Complex(1, 0)}}),
                  InvariantViolation);
  CHECK_THROWS_AS(BathDescriptor::exp_sum("x", 1.0, {{Complex(1, 0), Complex(-2, 0)}}),
                  InvariantViolation);
  CHECK_THROWS_AS(drude_lorentz_high_temp("x", -1.0, 50.0, 300.0), InvariantViolation);
  // beta*Omega >= 1 is flagged, not rejected.
  const auto cold = drude_lorentz_high_temp("x", 1.0, 500.0, 30.0);
  CHECK_FALSE(cold.high_temp_ok());
}

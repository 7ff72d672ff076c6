#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qme {

using Complex = std::complex<double>;
using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using Index = Eigen::Index;

// Thrown when a domain-type invariant (Hermiticity, trace, positivity,
// dimension compatibility) is violated at construction or call time.
class InvariantViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an explicit reference Hamiltonian is not block-constant on the
// eigenprojectors of the system Hamiltonian.
class IncompatibleReference : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a time stepper produces a non-finite state.
class PropagationDiverged : public std::runtime_error {
 public:
  PropagationDiverged(std::size_t step_index, const std::string& what)
      : std::runtime_error(what), step(step_index) {}
  std::size_t step;
};

double max_abs(const Cmat& m);

// Dense Hermitian operator; entries in cm^-1 unless dimensionless by context.
class HermitianOperator {
 public:
  explicit HermitianOperator(Cmat m);
  static HermitianOperator zero(Index dim);

  const Cmat& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  Cmat m_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity, unit trace and positivity.
  explicit DensityMatrix(const Cmat& m);
  static DensityMatrix pure(const Cvec& psi);
  static DensityMatrix maximally_mixed(Index dim);
  // For propagation output: Hermiticity/trace are monitored by the caller,
  // positivity is data, not a precondition.
  static DensityMatrix unchecked(Cmat m);

  const Cmat& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  DensityMatrix() = default;
  Cmat m_;
};

// Linear map on operators, stored dense in the column-stacking convention:
// vec(A rho B) = (B^T (x) A) vec(rho).
class Superoperator {
 public:
  explicit Superoperator(Cmat s);
  static Superoperator zero(Index dim);

  Index dim() const { return dim_; }
  const Cmat& matrix() const { return s_; }
  Cmat apply(const Cmat& rho) const;

  Superoperator& operator+=(const Superoperator& o);
  Superoperator& operator*=(Complex c);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator*(Complex c, Superoperator s) { return s *= c; }

 private:
  Cmat s_;
  Index dim_;
};

Cvec vec(const Cmat& m);
Cmat unvec(const Cvec& v, Index dim);

struct Eigenpair {
  double value;
  Cmat projector;
  int multiplicity;
};

// Ascending eigenvalues; groups whose consecutive gaps are <= group_tol are
// merged (single linkage) into one entry with the multiplicity-weighted mean
// value and the summed projector.
std::vector<Eigenpair> hermitian_eig(const HermitianOperator& h, double group_tol);

Cmat matrix_exp(const Cmat& m);

// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const Cmat& m);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Cmat& a, const Cmat& b);

Superoperator lift_left(const Cmat& a);                    // rho -> A rho
Superoperator lift_right(const Cmat& b);                   // rho -> rho B
Superoperator lift_sandwich(const Cmat& a, const Cmat& b); // rho -> A rho B
Superoperator lift_commutator(const Cmat& h);              // rho -> [H, rho]

}  // namespace qme

#include "qme/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qme {

double max_abs(const Cmat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

void require_square(const Cmat& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw InvariantViolation(std::string(who) + ": matrix must be square");
  }
  if (!m.allFinite()) {
    throw InvariantViolation(std::string(who) + ": matrix has non-finite entries");
  }
}

void require_same_dim(Index a, Index b, const char* who) {
  if (a != b) {
    throw InvariantViolation(std::string(who) + ": dimension mismatch (" +
                             std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

HermitianOperator::HermitianOperator(Cmat m) : m_(std::move(m)) {
  require_square(m_, "HermitianOperator");
  const double scale = std::max(max_abs(m_), 1.0);
  if (max_abs(m_ - m_.adjoint()) > 1e-12 * scale) {
    throw InvariantViolation("HermitianOperator: input is not Hermitian");
  }
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(Cmat::Zero(dim, dim));
}

DensityMatrix::DensityMatrix(const Cmat& m) : m_(m) {
  require_square(m_, "DensityMatrix");
  if (max_abs(m_ - m_.adjoint()) > 1e-10 * std::max(max_abs(m_), 1.0)) {
    throw InvariantViolation("DensityMatrix: input is not Hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > 1e-10) {
    throw InvariantViolation("DensityMatrix: trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<Cmat> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvariantViolation("DensityMatrix: negative eigenvalue beyond tolerance");
  }
}

DensityMatrix DensityMatrix::pure(const Cvec& psi) {
  const double n = psi.norm();
  if (n <= 0.0) throw InvariantViolation("DensityMatrix::pure: zero vector");
  Cvec u = psi / n;
  DensityMatrix d;
  d.m_ = u * u.adjoint();
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  DensityMatrix d;
  d.m_ = Cmat::Identity(dim, dim) / static_cast<double>(dim);
  return d;
}

DensityMatrix DensityMatrix::unchecked(Cmat m) {
  DensityMatrix d;
  d.m_ = std::move(m);
  return d;
}

Superoperator::Superoperator(Cmat s) : s_(std::move(s)) {
  require_square(s_, "Superoperator");
  const auto n = s_.rows();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) {
    throw InvariantViolation("Superoperator: size is not a perfect square");
  }
  dim_ = d;
}

Superoperator Superoperator::zero(Index dim) {
  return Superoperator(Cmat::Zero(dim * dim, dim * dim));
}

Cmat Superoperator::apply(const Cmat& rho) const {
  require_same_dim(rho.rows(), dim_, "Superoperator::apply");
  require_same_dim(rho.cols(), dim_, "Superoperator::apply");
  return unvec(s_ * vec(rho), dim_);
}

Superoperator& Superoperator::operator+=(const Superoperator& o) {
  require_same_dim(dim_, o.dim_, "Superoperator::operator+=");
  s_ += o.s_;
  return *this;
}

Superoperator& Superoperator::operator*=(Complex c) {
  s_ *= c;
  return *this;
}

Cvec vec(const Cmat& m) {
  return Eigen::Map<const Cvec>(m.data(), m.size());
}

Cmat unvec(const Cvec& v, Index dim) {
  if (v.size() != dim * dim) {
    throw InvariantViolation("unvec: length does not match dimension");
  }
  return Eigen::Map<const Cmat>(v.data(), dim, dim);
}

std::vector<Eigenpair> hermitian_eig(const HermitianOperator& h, double group_tol) {
  if (group_tol < 0.0) throw InvariantViolation("hermitian_eig: negative group tolerance");
  Eigen::SelfAdjointEigenSolver<Cmat> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();

  std::vector<Eigenpair> out;
  const Index d = h.dim();
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d && vals(stop) - vals(stop - 1) <= group_tol) ++stop;
    const Index mult = stop - start;
    const auto block = vecs.middleCols(start, mult);
    Eigenpair p;
    p.value = vals.segment(start, mult).mean();
    p.projector = block * block.adjoint();
    p.multiplicity = static_cast<int>(mult);
    out.push_back(std::move(p));
    start = stop;
  }
  return out;
}

Cmat matrix_exp(const Cmat& m) {
  require_square(m, "matrix_exp");
  return m.exp();
}

double trace_norm_hermitian(const Cmat& m) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const Cmat& a, const Cmat& b) {
  require_same_dim(a.rows(), b.rows(), "trace_distance");
  require_same_dim(a.cols(), b.cols(), "trace_distance");
  return 0.5 * trace_norm_hermitian(Cmat(a - b));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

Superoperator lift_left(const Cmat& a) {
  require_square(a, "lift_left");
  const Cmat id = Cmat::Identity(a.rows(), a.rows());
  return Superoperator(Eigen::kroneckerProduct(id, a).eval());
}

Superoperator lift_right(const Cmat& b) {
  require_square(b, "lift_right");
  const Cmat id = Cmat::Identity(b.rows(), b.rows());
  return Superoperator(Eigen::kroneckerProduct(b.transpose(), id).eval());
}

Superoperator lift_sandwich(const Cmat& a, const Cmat& b) {
  require_square(a, "lift_sandwich");
  require_square(b, "lift_sandwich");
  require_same_dim(a.rows(), b.rows(), "lift_sandwich");
  return Superoperator(Eigen::kroneckerProduct(b.transpose(), a).eval());
}

Superoperator lift_commutator(const Cmat& h) {
  require_square(h, "lift_commutator");
  const Cmat id = Cmat::Identity(h.rows(), h.rows());
  Cmat s = Eigen::kroneckerProduct(id, h).eval() - Eigen::kroneckerProduct(h.transpose(), id).eval();
  return Superoperator(std::move(s));
}

}  // namespace qme

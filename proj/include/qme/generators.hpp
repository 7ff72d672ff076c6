#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qme/bath.hpp"
#include "qme/linalg.hpp"
#include "qme/spectral.hpp"

namespace qme {

enum class GeneratorKind { Redfield, Davies, Unified, UnifiedSimplified, NonsecularDavies };

const char* to_string(GeneratorKind kind);
std::optional<GeneratorKind> generator_kind_from_string(const std::string& name);
bool is_gkls_kind(GeneratorKind kind);

// A system operator together with the bath it couples to. Couplings whose
// baths share a label are cross-correlated through the same correlation
// function; distinct labels are uncorrelated.
struct SystemCoupling {
  Cmat op;
  BathDescriptor bath;
};

// Coefficient matrix entering one dissipator contribution, kept for the GKLS
// certificate. For secular-type generators there is one block per
// (bath label, cluster center); for Redfield-type generators one block per
// bath label with a (coupling, frequency) double index.
struct CoefficientBlock {
  std::string bath_label;
  double center;  // NaN for full double-indexed blocks
  Cmat matrix;    // Hermitian
  std::vector<std::pair<int, double>> index;  // (coupling index, frequency) per row
};

struct BathPart {
  std::string label;
  std::vector<int> coupling_indices;
  HermitianOperator lamb_shift;  // cm^-1
  Superoperator dissipator;      // cm^-1
  double beta;                   // cm
  std::vector<CoefficientBlock> blocks;
};

// Master-equation generator in the Schroedinger picture, all entries in cm^-1:
//   L rho = -i[H_S + sum_n H_LS_n, rho] + sum_n D_n rho.
class Generator {
 public:
  Generator(GeneratorKind kind, HermitianOperator hamiltonian, std::vector<BathPart> baths,
            std::optional<ReferenceSplit> split);

  GeneratorKind kind() const { return kind_; }
  Index dim() const { return hamiltonian_.dim(); }
  const HermitianOperator& hamiltonian() const { return hamiltonian_; }
  const std::vector<BathPart>& baths() const { return baths_; }
  const std::optional<ReferenceSplit>& split() const { return split_; }
  const Superoperator& total() const { return total_; }
  HermitianOperator total_lamb_shift() const;
  // -i[H_LS_n, .] + D_n for bath n.
  Superoperator bath_generator(std::size_t n) const;

 private:
  GeneratorKind kind_;
  HermitianOperator hamiltonian_;
  std::vector<BathPart> baths_;
  std::optional<ReferenceSplit> split_;
  Superoperator total_;
};

// All (w, w') pairs with gamma, S at the original Bohr frequencies.
Generator build_redfield(const SpectralDecomposition& d,
                         const std::vector<SystemCoupling>& couplings);
// Redfield restricted to w = w' everywhere.
Generator build_davies(const SpectralDecomposition& d,
                       const std::vector<SystemCoupling>& couplings);
// Cluster-secular dissipator with gamma at cluster centers and aggregated jump
// operators; Lamb shift with S at the original member frequencies.
Generator build_unified(const ReferenceSplit& split,
                        const std::vector<SystemCoupling>& couplings);
// Same dissipator; Lamb shift also taken at the cluster centers.
Generator build_unified_simplified(const ReferenceSplit& split,
                                   const std::vector<SystemCoupling>& couplings);
// Redfield structure with the arguments of gamma and S swapped.
Generator build_nonsecular_davies(const SpectralDecomposition& d,
                                  const std::vector<SystemCoupling>& couplings);

struct CertificateBlockReport {
  std::string bath_label;
  double center;  // NaN for full blocks
  double min_eigenvalue;
  double max_eigenvalue;
};

struct GKLSCertificate {
  std::vector<CertificateBlockReport> blocks;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

GKLSCertificate gkls_certificate(const Generator& g);

}  // namespace qme

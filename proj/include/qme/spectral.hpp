#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qme/linalg.hpp"

namespace qme {

class BathDescriptor;

struct Level {
  double energy;     // cm^-1
  Cmat projector;
  int multiplicity;
};

// Distinct eigenvalues of a Hermitian operator with their eigenprojectors.
class SpectralDecomposition {
 public:
  SpectralDecomposition(const HermitianOperator& h, double group_tol);
  // Adopt precomputed levels (used for reference Hamiltonians whose level
  // structure is derived rather than re-diagonalized).
  SpectralDecomposition(std::vector<Level> levels, Index dim, double group_tol);

  const std::vector<Level>& levels() const { return levels_; }
  Index dim() const { return dim_; }
  double group_tol() const { return group_tol_; }
  Cmat reconstruct() const;  // sum_j eps_j P_j

 private:
  std::vector<Level> levels_;
  Index dim_;
  double group_tol_;
};

SpectralDecomposition decompose(const HermitianOperator& h, double group_tol);

struct BohrFrequency {
  double value;                            // cm^-1
  std::vector<std::pair<int, int>> pairs;  // (j, j') with eps_j - eps_j' = value
};

// All level differences, closed under negation, deduplicated within a tolerance.
class BohrSpectrum {
 public:
  BohrSpectrum() = default;
  explicit BohrSpectrum(std::vector<BohrFrequency> freqs, double dedup_tol);

  const std::vector<BohrFrequency>& frequencies() const { return freqs_; }
  std::size_t size() const { return freqs_.size(); }
  double dedup_tol() const { return dedup_tol_; }
  const BohrFrequency& operator[](std::size_t i) const { return freqs_[i]; }
  // Index of the frequency closest to w; throws if further than tol away.
  int index_of(double w, double tol) const;

 private:
  std::vector<BohrFrequency> freqs_;  // ascending
  double dedup_tol_ = 0.0;
};

double default_dedup_tol(const SpectralDecomposition& d);
BohrSpectrum bohr_frequencies(const SpectralDecomposition& d, double dedup_tol);

// Jump operators A_{alpha,omega} = sum_{eps_j - eps_j' = omega} P_j' A_alpha P_j,
// satisfying [H, A_{alpha,omega}] = -omega A_{alpha,omega}.
struct JumpOperatorSet {
  std::vector<Cmat> couplings;          // original A_alpha
  BohrSpectrum frequencies;             // of the decomposition
  std::vector<std::vector<Cmat>> ops;   // [alpha][frequency index]

  struct Aggregated {
    std::vector<double> centers;              // cluster centers, aligned with the split
    std::vector<std::vector<Cmat>> ops;       // [alpha][cluster index]
  };
  std::optional<Aggregated> aggregated;
};

JumpOperatorSet jump_operators(const SpectralDecomposition& d, const BohrSpectrum& f,
                               const std::vector<Cmat>& couplings);

struct H0Level {
  double energy;             // cm^-1
  Cmat projector;            // sum of member projectors of the base decomposition
  std::vector<int> members;  // indices into base levels
  int multiplicity;
};

struct BohrCluster {
  double center;                  // Bohr frequency of the reference Hamiltonian
  std::vector<int> member_freqs;  // indices into the base Bohr spectrum
};

// H_S = H0 + delta with [H0, delta] = 0; H0 merges near-degenerate levels, and
// the Bohr frequencies of H_S fall into clusters centered on those of H0.
class ReferenceSplit {
 public:
  const SpectralDecomposition& base() const { return base_; }
  const std::vector<H0Level>& h0_levels() const { return h0_levels_; }
  const HermitianOperator& delta() const { return delta_; }
  Cmat h0_matrix() const;
  const BohrSpectrum& frequencies() const { return freqs_; }
  const std::vector<BohrCluster>& clusters() const { return clusters_; }
  int cluster_of(int freq_index) const { return freq_to_cluster_.at(freq_index); }
  int h0_level_of(int base_level) const { return level_to_h0_.at(base_level); }
  // True when everything merged into a single level (delta comparable to H_S);
  // flagged for diagnostics, not an error.
  bool collapsed() const { return h0_levels_.size() <= 1; }

  friend ReferenceSplit reference_split_by_tolerance(const SpectralDecomposition&, double);
  friend ReferenceSplit reference_split_explicit(const SpectralDecomposition&,
                                                 const HermitianOperator&);

 private:
  ReferenceSplit(SpectralDecomposition base, std::vector<H0Level> h0_levels,
                 std::vector<int> level_to_h0);

  SpectralDecomposition base_;
  std::vector<H0Level> h0_levels_;
  std::vector<int> level_to_h0_;
  HermitianOperator delta_;
  BohrSpectrum freqs_;
  std::vector<BohrCluster> clusters_;
  std::vector<int> freq_to_cluster_;
};

ReferenceSplit reference_split_by_tolerance(const SpectralDecomposition& d,
                                            double level_cluster_tol);
ReferenceSplit reference_split_explicit(const SpectralDecomposition& d,
                                        const HermitianOperator& h0);

JumpOperatorSet aggregate_jump_operators(const JumpOperatorSet& jumps,
                                         const ReferenceSplit& split);

// Dimensionless validity ratios of the clustered weak-coupling construction.
// All should be well below one for the approximations to hold.
struct ValidityReport {
  double weak_coupling_ratio = 0.0;    // max_w |Gamma(w)| / bath rate scale
  double secular_ratio = 0.0;          // max_{wbar != wbar'} |Gamma(wbar)| / |wbar' - wbar|
  double cluster_flatness_re = 0.0;    // max |Re Gamma'(wbar)| dw / |Re Gamma(wbar)|
  double cluster_flatness_im = 0.0;
  double delta_norm_ratio = 0.0;       // ||delta|| / ||H_S||
  bool collapsed = false;
};

ValidityReport validity_diagnostics(const ReferenceSplit& split,
                                    const std::vector<BathDescriptor>& baths);

}  // namespace qme

#include "qme/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qme/bath.hpp"

namespace qme {

namespace {

constexpr double kProjectorTol = 1e-10;

void check_projector_completeness(const std::vector<Level>& levels, Index dim) {
  Cmat sum = Cmat::Zero(dim, dim);
  for (const auto& l : levels) sum += l.projector;
  if (max_abs(sum - Cmat::Identity(dim, dim)) > kProjectorTol) {
    throw InvariantViolation("SpectralDecomposition: projectors do not sum to identity");
  }
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(const HermitianOperator& h, double group_tol)
    : dim_(h.dim()), group_tol_(group_tol) {
  for (auto& p : hermitian_eig(h, group_tol)) {
    levels_.push_back(Level{p.value, std::move(p.projector), p.multiplicity});
  }
  check_projector_completeness(levels_, dim_);
}

SpectralDecomposition::SpectralDecomposition(std::vector<Level> levels, Index dim,
                                             double group_tol)
    : levels_(std::move(levels)), dim_(dim), group_tol_(group_tol) {
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (!(levels_[i].energy > levels_[i - 1].energy)) {
      throw InvariantViolation("SpectralDecomposition: levels must be strictly increasing");
    }
  }
  check_projector_completeness(levels_, dim_);
}

Cmat SpectralDecomposition::reconstruct() const {
  Cmat h = Cmat::Zero(dim_, dim_);
  for (const auto& l : levels_) h += l.energy * l.projector;
  return h;
}

SpectralDecomposition decompose(const HermitianOperator& h, double group_tol) {
  return SpectralDecomposition(h, group_tol);
}

BohrSpectrum::BohrSpectrum(std::vector<BohrFrequency> freqs, double dedup_tol)
    : freqs_(std::move(freqs)), dedup_tol_(dedup_tol) {
  for (std::size_t i = 1; i < freqs_.size(); ++i) {
    if (!(freqs_[i].value > freqs_[i - 1].value)) {
      throw InvariantViolation("BohrSpectrum: frequencies must be strictly increasing");
    }
  }
}

int BohrSpectrum::index_of(double w, double tol) const {
  int best = -1;
  double best_d = tol;
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    const double d = std::abs(freqs_[i].value - w);
    if (d <= best_d) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  if (best < 0) throw InvariantViolation("BohrSpectrum::index_of: no frequency within tolerance");
  return best;
}

double default_dedup_tol(const SpectralDecomposition& d) {
  double m = 0.0;
  for (const auto& l : d.levels()) m = std::max(m, std::abs(l.energy));
  return 1e-9 * m;
}

BohrSpectrum bohr_frequencies(const SpectralDecomposition& d, double dedup_tol) {
  const auto& levels = d.levels();
  const int n = static_cast<int>(levels.size());
  struct Raw {
    double value;
    std::pair<int, int> pair;
  };
  std::vector<Raw> raw;
  raw.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int jp = 0; jp < n; ++jp) {
      raw.push_back({levels[j].energy - levels[jp].energy, {j, jp}});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    return a.value < b.value || (a.value == b.value && a.pair < b.pair);
  });

  std::vector<BohrFrequency> freqs;
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t stop = start + 1;
    while (stop < raw.size() && raw[stop].value - raw[stop - 1].value <= dedup_tol) ++stop;
    BohrFrequency f;
    double sum = 0.0;
    for (std::size_t i = start; i < stop; ++i) {
      sum += raw[i].value;
      f.pairs.push_back(raw[i].pair);
    }
    f.value = sum / static_cast<double>(stop - start);
    freqs.push_back(std::move(f));
    start = stop;
  }
  return BohrSpectrum(std::move(freqs), dedup_tol);
}

JumpOperatorSet jump_operators(const SpectralDecomposition& d, const BohrSpectrum& f,
                               const std::vector<Cmat>& couplings) {
  JumpOperatorSet out;
  out.frequencies = f;
  out.couplings = couplings;
  out.ops.reserve(couplings.size());
  for (const auto& a : couplings) {
    if (a.rows() != d.dim() || a.cols() != d.dim()) {
      throw InvariantViolation("jump_operators: coupling dimension mismatch");
    }
    std::vector<Cmat> per_freq;
    per_freq.reserve(f.size());
    for (const auto& bf : f.frequencies()) {
      Cmat aw = Cmat::Zero(d.dim(), d.dim());
      for (const auto& [j, jp] : bf.pairs) {
        aw += d.levels()[jp].projector * a * d.levels()[j].projector;
      }
      per_freq.push_back(std::move(aw));
    }
    out.ops.push_back(std::move(per_freq));
  }
  return out;
}

ReferenceSplit::ReferenceSplit(SpectralDecomposition base, std::vector<H0Level> h0_levels,
                               std::vector<int> level_to_h0)
    : base_(std::move(base)),
      h0_levels_(std::move(h0_levels)),
      level_to_h0_(std::move(level_to_h0)),
      delta_(HermitianOperator::zero(base_.dim())) {
  // delta = sum_j (eps_j - eps0_{k(j)}) P_j, exactly commuting with H0.
  Cmat delta = Cmat::Zero(base_.dim(), base_.dim());
  for (std::size_t j = 0; j < base_.levels().size(); ++j) {
    const double shift = base_.levels()[j].energy - h0_levels_[level_to_h0_[j]].energy;
    delta += shift * base_.levels()[j].projector;
  }
  delta_ = HermitianOperator(std::move(delta));

  const Cmat h0 = h0_matrix();
  const Cmat hs = base_.reconstruct();
  const double scale = std::max(max_abs(hs), 1.0);
  if (max_abs(h0 + delta_.matrix() - hs) > 1e-10 * scale) {
    throw InvariantViolation("ReferenceSplit: H0 + delta does not reconstruct H_S");
  }
  if (max_abs(h0 * delta_.matrix() - delta_.matrix() * h0) > 1e-10 * scale * scale) {
    throw InvariantViolation("ReferenceSplit: H0 and delta do not commute");
  }

  // Bohr spectrum of H_S and of H0, with a common dedup tolerance so the
  // trivial split reproduces the base frequencies bit for bit.
  const double tol = default_dedup_tol(base_);
  freqs_ = bohr_frequencies(base_, tol);

  std::vector<Level> h0_as_levels;
  for (const auto& l : h0_levels_) {
    h0_as_levels.push_back(Level{l.energy, l.projector, l.multiplicity});
  }
  SpectralDecomposition h0_decomp(std::move(h0_as_levels), base_.dim(), 0.0);
  const BohrSpectrum centers = bohr_frequencies(h0_decomp, tol);

  // Map (k, k') -> center index.
  std::map<std::pair<int, int>, int> center_of_pair;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (const auto& kk : centers[c].pairs) center_of_pair[kk] = static_cast<int>(c);
  }

  clusters_.resize(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) clusters_[c].center = centers[c].value;
  freq_to_cluster_.assign(freqs_.size(), -1);
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    int cluster = -1;
    for (const auto& [j, jp] : freqs_[i].pairs) {
      const int c = center_of_pair.at({level_to_h0_[j], level_to_h0_[jp]});
      if (cluster < 0) cluster = c;
      if (c != cluster) {
        throw InvariantViolation(
            "ReferenceSplit: a deduplicated Bohr frequency spans two clusters; "
            "lower the dedup tolerance or adjust the level clustering");
      }
    }
    freq_to_cluster_[i] = cluster;
    clusters_[cluster].member_freqs.push_back(static_cast<int>(i));
  }
  for (const auto& c : clusters_) {
    if (c.member_freqs.empty()) {
      throw InvariantViolation("ReferenceSplit: empty Bohr cluster");
    }
  }
}

Cmat ReferenceSplit::h0_matrix() const {
  Cmat h0 = Cmat::Zero(base_.dim(), base_.dim());
  for (const auto& l : h0_levels_) h0 += l.energy * l.projector;
  return h0;
}

ReferenceSplit reference_split_by_tolerance(const SpectralDecomposition& d,
                                            double level_cluster_tol) {
  if (level_cluster_tol < 0.0) {
    throw InvariantViolation("reference_split_by_tolerance: negative tolerance");
  }
  const auto& levels = d.levels();
  std::vector<H0Level> h0_levels;
  std::vector<int> level_to_h0(levels.size(), -1);
  std::size_t start = 0;
  while (start < levels.size()) {
    std::size_t stop = start + 1;
    while (stop < levels.size() &&
           levels[stop].energy - levels[stop - 1].energy <= level_cluster_tol) {
      ++stop;
    }
    H0Level h;
    double wsum = 0.0;
    int mult = 0;
    Cmat proj = Cmat::Zero(d.dim(), d.dim());
    for (std::size_t j = start; j < stop; ++j) {
      wsum += levels[j].energy * levels[j].multiplicity;
      mult += levels[j].multiplicity;
      proj += levels[j].projector;
      h.members.push_back(static_cast<int>(j));
      level_to_h0[j] = static_cast<int>(h0_levels.size());
    }
    h.energy = (stop - start == 1) ? levels[start].energy : wsum / mult;
    h.projector = std::move(proj);
    h.multiplicity = mult;
    h0_levels.push_back(std::move(h));
    start = stop;
  }
  return ReferenceSplit(d, std::move(h0_levels), std::move(level_to_h0));
}

ReferenceSplit reference_split_explicit(const SpectralDecomposition& d,
                                        const HermitianOperator& h0) {
  if (h0.dim() != d.dim()) {
    throw InvariantViolation("reference_split_explicit: dimension mismatch");
  }
  // Merge numerically degenerate H0 eigenvalues before matching projectors.
  double scale = std::max(max_abs(h0.matrix()), 1.0);
  const auto h0_eig = hermitian_eig(h0, 1e-9 * scale);

  const auto& levels = d.levels();
  std::vector<H0Level> h0_levels;
  std::vector<int> level_to_h0(levels.size(), -1);
  for (const auto& p : h0_eig) {
    H0Level h;
    h.energy = p.value;
    h.multiplicity = p.multiplicity;
    Cmat rebuilt = Cmat::Zero(d.dim(), d.dim());
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double overlap = std::real((p.projector * levels[j].projector).trace());
      if (overlap > 0.5 * levels[j].multiplicity) {
        if (level_to_h0[j] >= 0) {
          throw IncompatibleReference(
              "reference_split_explicit: base projector overlaps two H0 levels");
        }
        level_to_h0[j] = static_cast<int>(h0_levels.size());
        h.members.push_back(static_cast<int>(j));
        rebuilt += levels[j].projector;
      }
    }
    if (max_abs(rebuilt - p.projector) > kProjectorTol) {
      throw IncompatibleReference(
          "reference_split_explicit: H0 eigenprojector is not a sum of base projectors");
    }
    h.projector = std::move(rebuilt);
    h0_levels.push_back(std::move(h));
  }
  for (int k : level_to_h0) {
    if (k < 0) {
      throw IncompatibleReference("reference_split_explicit: unassigned base level");
    }
  }
  return ReferenceSplit(d, std::move(h0_levels), std::move(level_to_h0));
}

JumpOperatorSet aggregate_jump_operators(const JumpOperatorSet& jumps,
                                         const ReferenceSplit& split) {
  const auto& f = jumps.frequencies;
  if (f.size() != split.frequencies().size()) {
    throw InvariantViolation("aggregate_jump_operators: mismatched provenance");
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i].value - split.frequencies()[i].value) >
        std::max(f.dedup_tol(), 1e-12)) {
      throw InvariantViolation("aggregate_jump_operators: mismatched provenance");
    }
  }

  JumpOperatorSet out = jumps;
  JumpOperatorSet::Aggregated agg;
  const auto& clusters = split.clusters();
  agg.centers.reserve(clusters.size());
  for (const auto& c : clusters) agg.centers.push_back(c.center);
  const Index dim = split.base().dim();
  for (const auto& per_freq : jumps.ops) {
    std::vector<Cmat> per_cluster;
    per_cluster.reserve(clusters.size());
    for (const auto& c : clusters) {
      Cmat sum = Cmat::Zero(dim, dim);
      for (int fi : c.member_freqs) sum += per_freq[fi];
      per_cluster.push_back(std::move(sum));
    }
    agg.ops.push_back(std::move(per_cluster));
  }
  out.aggregated = std::move(agg);
  return out;
}

ValidityReport validity_diagnostics(const ReferenceSplit& split,
                                    const std::vector<BathDescriptor>& baths) {
  ValidityReport r;
  r.collapsed = split.collapsed();
  const double hs_norm = max_abs(split.base().reconstruct());
  r.delta_norm_ratio = hs_norm > 0.0 ? max_abs(split.delta().matrix()) / hs_norm : 0.0;

  const auto& clusters = split.clusters();
  for (const auto& bath : baths) {
    const double rate_scale = bath.rate_scale();
    for (const auto& bf : split.frequencies().frequencies()) {
      r.weak_coupling_ratio =
          std::max(r.weak_coupling_ratio, std::abs(bath.half_fourier(bf.value)) / rate_scale);
    }
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      const double ga = std::abs(bath.half_fourier(clusters[a].center));
      for (std::size_t b = 0; b < clusters.size(); ++b) {
        if (a == b) continue;
        const double gap = std::abs(clusters[b].center - clusters[a].center);
        if (gap > 0.0) r.secular_ratio = std::max(r.secular_ratio, ga / gap);
      }
      // Flatness of Gamma across the cluster width.
      double dw = 0.0;
      for (int fi : clusters[a].member_freqs) {
        dw = std::max(dw, std::abs(split.frequencies()[fi].value - clusters[a].center));
      }
      if (dw == 0.0) continue;
      const double h = dw / 100.0;
      const Complex g = bath.half_fourier(clusters[a].center);
      const Complex gp =
          (bath.half_fourier(clusters[a].center + h) - bath.half_fourier(clusters[a].center - h)) /
          (2.0 * h);
      if (std::abs(g.real()) > 0.0) {
        r.cluster_flatness_re =
            std::max(r.cluster_flatness_re, std::abs(gp.real()) * dw / std::abs(g.real()));
      }
      if (std::abs(g.imag()) > 0.0) {
        r.cluster_flatness_im =
            std::max(r.cluster_flatness_im, std::abs(gp.imag()) * dw / std::abs(g.imag()));
      }
    }
  }
  return r;
}

}  // namespace qme

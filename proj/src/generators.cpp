#include "qme/generators.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace qme {

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Redfield: return "redfield";
    case GeneratorKind::Davies: return "davies";
    case GeneratorKind::Unified: return "unified";
    case GeneratorKind::UnifiedSimplified: return "unified_simplified";
    case GeneratorKind::NonsecularDavies: return "nonsecular_davies";
  }
  return "?";
}

std::optional<GeneratorKind> generator_kind_from_string(const std::string& name) {
  for (auto k : {GeneratorKind::Redfield, GeneratorKind::Davies, GeneratorKind::Unified,
                 GeneratorKind::UnifiedSimplified, GeneratorKind::NonsecularDavies}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

bool is_gkls_kind(GeneratorKind kind) {
  return kind == GeneratorKind::Davies || kind == GeneratorKind::Unified ||
         kind == GeneratorKind::UnifiedSimplified;
}

namespace {

std::vector<std::vector<int>> group_by_label(const std::vector<SystemCoupling>& couplings) {
  std::vector<std::vector<int>> groups;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const auto& label = couplings[i].bath.label();
    auto it = seen.find(label);
    if (it == seen.end()) {
      seen.emplace(label, groups.size());
      groups.push_back({static_cast<int>(i)});
    } else {
      groups[it->second].push_back(static_cast<int>(i));
    }
  }
  return groups;
}

void check_coupling_dims(const std::vector<SystemCoupling>& couplings, Index dim) {
  for (const auto& c : couplings) {
    if (c.op.rows() != dim || c.op.cols() != dim) {
      throw InvariantViolation("generator builder: coupling dimension mismatch");
    }
  }
}

// gamma * (A rho B^dag - 1/2 {B^dag A, rho}) accumulated into a dense superoperator.
void add_channel(Cmat& diss, const Cmat& a, const Cmat& b, Complex coeff) {
  const Cmat c = b.adjoint() * a;
  diss += coeff * lift_sandwich(a, b.adjoint()).matrix();
  diss -= 0.5 * coeff * (lift_left(c).matrix() + lift_right(c).matrix());
}

Generator assemble(GeneratorKind kind, const SpectralDecomposition& d,
                   std::vector<BathPart> parts, std::optional<ReferenceSplit> split) {
  Cmat hs = d.reconstruct();
  hs = 0.5 * (hs + hs.adjoint()).eval();
  return Generator(kind, HermitianOperator(std::move(hs)), std::move(parts), std::move(split));
}

// Redfield-type generators: all (w, w') pairs, or the w = w' diagonal only.
// swap_args selects gamma(w', w), S(w', w) in place of gamma(w, w'), S(w, w').
Generator build_frequency_resolved(GeneratorKind kind, const SpectralDecomposition& d,
                                   const std::vector<SystemCoupling>& couplings,
                                   bool secular_only, bool swap_args) {
  check_coupling_dims(couplings, d.dim());
  const auto f = bohr_frequencies(d, default_dedup_tol(d));
  std::vector<Cmat> ops;
  for (const auto& c : couplings) ops.push_back(c.op);
  const auto jumps = jump_operators(d, f, ops);
  const Index dim = d.dim();
  const int nf = static_cast<int>(f.size());

  std::vector<BathPart> parts;
  for (const auto& group : group_by_label(couplings)) {
    const auto& bath = couplings[group.front()].bath;
    Cmat lamb = Cmat::Zero(dim, dim);
    Cmat diss = Cmat::Zero(dim * dim, dim * dim);
    for (int a : group) {
      for (int b : group) {
        for (int wi = 0; wi < nf; ++wi) {
          const int wj_begin = secular_only ? wi : 0;
          const int wj_end = secular_only ? wi + 1 : nf;
          for (int wj = wj_begin; wj < wj_end; ++wj) {
            const double w = f[wi].value;
            const double wp = f[wj].value;
            const auto [gamma, shift] = swap_args ? bath.gamma_s(wp, w) : bath.gamma_s(w, wp);
            const Cmat& jump = jumps.ops[b][wi];       // A_{beta, w}
            const Cmat& dag_side = jumps.ops[a][wj];   // A_{alpha, w'}
            add_channel(diss, jump, dag_side, gamma);
            lamb += shift * (dag_side.adjoint() * jump);
          }
        }
      }
    }

    BathPart part{bath.label(),
                  group,
                  HermitianOperator(0.5 * (lamb + lamb.adjoint()).eval()),
                  Superoperator(std::move(diss)),
                  bath.beta(),
                  {}};

    const int ng = static_cast<int>(group.size());
    if (secular_only) {
      // One block per frequency: gamma_{alpha beta}(w) over the label group.
      for (int wi = 0; wi < nf; ++wi) {
        const double rate = bath.gamma(f[wi].value);
        Cmat cert = rate * Cmat::Ones(ng, ng);
        std::vector<std::pair<int, double>> index;
        for (int a : group) index.emplace_back(a, f[wi].value);
        part.blocks.push_back(
            CoefficientBlock{bath.label(), f[wi].value, std::move(cert), std::move(index)});
      }
    } else {
      // Full double-indexed coefficient matrix, rows (alpha, w'), cols (beta, w).
      Cmat cert(ng * nf, ng * nf);
      std::vector<std::pair<int, double>> index;
      for (int ap = 0; ap < ng; ++ap) {
        for (int wj = 0; wj < nf; ++wj) index.emplace_back(group[ap], f[wj].value);
      }
      for (int ap = 0; ap < ng; ++ap) {
        for (int wj = 0; wj < nf; ++wj) {
          for (int bp = 0; bp < ng; ++bp) {
            for (int wi = 0; wi < nf; ++wi) {
              Complex v = bath.gamma_s(f[wi].value, f[wj].value).first;
              if (swap_args) v = std::conj(v);
              cert(ap * nf + wj, bp * nf + wi) = v;
            }
          }
        }
      }
      part.blocks.push_back(CoefficientBlock{bath.label(),
                                             std::numeric_limits<double>::quiet_NaN(),
                                             std::move(cert), std::move(index)});
    }
    parts.push_back(std::move(part));
  }
  return assemble(kind, d, std::move(parts), std::nullopt);
}

Generator build_clustered(GeneratorKind kind, const ReferenceSplit& split,
                          const std::vector<SystemCoupling>& couplings, bool simplified_lamb) {
  const auto& d = split.base();
  check_coupling_dims(couplings, d.dim());
  std::vector<Cmat> ops;
  for (const auto& c : couplings) ops.push_back(c.op);
  const auto jumps = aggregate_jump_operators(jump_operators(d, split.frequencies(), ops), split);
  const auto& agg = *jumps.aggregated;
  const auto& clusters = split.clusters();
  const Index dim = d.dim();

  std::vector<BathPart> parts;
  for (const auto& group : group_by_label(couplings)) {
    const auto& bath = couplings[group.front()].bath;
    Cmat lamb = Cmat::Zero(dim, dim);
    Cmat diss = Cmat::Zero(dim * dim, dim * dim);
    std::vector<CoefficientBlock> blocks;
    const int ng = static_cast<int>(group.size());

    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const double center = clusters[c].center;
      const double rate = bath.gamma(center);
      for (int a : group) {
        for (int b : group) {
          add_channel(diss, agg.ops[b][c], agg.ops[a][c], rate);
          if (simplified_lamb) {
            const Complex shift = bath.gamma_s(center, center).second;
            lamb += shift * (agg.ops[a][c].adjoint() * agg.ops[b][c]);
          } else {
            for (int wj : clusters[c].member_freqs) {
              for (int wi : clusters[c].member_freqs) {
                const double w = split.frequencies()[wi].value;
                const double wp = split.frequencies()[wj].value;
                const Complex shift = bath.gamma_s(w, wp).second;
                lamb += shift * (jumps.ops[a][wj].adjoint() * jumps.ops[b][wi]);
              }
            }
          }
        }
      }
      Cmat cert = rate * Cmat::Ones(ng, ng);
      std::vector<std::pair<int, double>> index;
      for (int a : group) index.emplace_back(a, center);
      blocks.push_back(CoefficientBlock{bath.label(), center, std::move(cert), std::move(index)});
    }

    parts.push_back(BathPart{bath.label(),
                             group,
                             HermitianOperator(0.5 * (lamb + lamb.adjoint()).eval()),
                             Superoperator(std::move(diss)),
                             bath.beta(),
                             std::move(blocks)});
  }
  return assemble(kind, d, std::move(parts), split);
}

}  // namespace

Generator::Generator(GeneratorKind kind, HermitianOperator hamiltonian,
                     std::vector<BathPart> baths, std::optional<ReferenceSplit> split)
    : kind_(kind),
      hamiltonian_(std::move(hamiltonian)),
      baths_(std::move(baths)),
      split_(std::move(split)),
      total_(Superoperator::zero(hamiltonian_.dim())) {
  Cmat h = hamiltonian_.matrix();
  for (const auto& p : baths_) h += p.lamb_shift.matrix();
  Cmat total = Complex(0.0, -1.0) * lift_commutator(h).matrix();
  for (const auto& p : baths_) total += p.dissipator.matrix();
  total_ = Superoperator(std::move(total));
}

HermitianOperator Generator::total_lamb_shift() const {
  Cmat h = Cmat::Zero(dim(), dim());
  for (const auto& p : baths_) h += p.lamb_shift.matrix();
  return HermitianOperator(std::move(h));
}

Superoperator Generator::bath_generator(std::size_t n) const {
  const auto& p = baths_.at(n);
  Cmat s = Complex(0.0, -1.0) * lift_commutator(p.lamb_shift.matrix()).matrix() +
           p.dissipator.matrix();
  return Superoperator(std::move(s));
}

Generator build_redfield(const SpectralDecomposition& d,
                         const std::vector<SystemCoupling>& couplings) {
  return build_frequency_resolved(GeneratorKind::Redfield, d, couplings, false, false);
}

Generator build_davies(const SpectralDecomposition& d,
                       const std::vector<SystemCoupling>& couplings) {
  return build_frequency_resolved(GeneratorKind::Davies, d, couplings, true, false);
}

Generator build_nonsecular_davies(const SpectralDecomposition& d,
                                  const std::vector<SystemCoupling>& couplings) {
  return build_frequency_resolved(GeneratorKind::NonsecularDavies, d, couplings, false, true);
}

Generator build_unified(const ReferenceSplit& split,
                        const std::vector<SystemCoupling>& couplings) {
  return build_clustered(GeneratorKind::Unified, split, couplings, false);
}

Generator build_unified_simplified(const ReferenceSplit& split,
                                   const std::vector<SystemCoupling>& couplings) {
  return build_clustered(GeneratorKind::UnifiedSimplified, split, couplings, true);
}

GKLSCertificate gkls_certificate(const Generator& g) {
  GKLSCertificate cert;
  bool first = true;
  for (const auto& part : g.baths()) {
    for (const auto& block : part.blocks) {
      Cmat m = 0.5 * (block.matrix + block.matrix.adjoint());
      Eigen::SelfAdjointEigenSolver<Cmat> es(m, Eigen::EigenvaluesOnly);
      CertificateBlockReport r{block.bath_label, block.center, es.eigenvalues().minCoeff(),
                               es.eigenvalues().maxCoeff()};
      if (first || r.min_eigenvalue < cert.min_eigenvalue) cert.min_eigenvalue = r.min_eigenvalue;
      if (first || r.max_eigenvalue > cert.max_eigenvalue) cert.max_eigenvalue = r.max_eigenvalue;
      first = false;
      cert.blocks.push_back(std::move(r));
    }
  }
  return cert;
}

}  // namespace qme

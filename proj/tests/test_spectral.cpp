#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qme/bath.hpp"
#include "qme/scenarios.hpp"
#include "qme/spectral.hpp"
#include "test_support.hpp"

using namespace qme;
using qme::testing::kron;
using qme::testing::pauli_x;
using qme::testing::pauli_z;
using qme::testing::random_complex;
using qme::testing::random_hermitian;

namespace {

SpectralDecomposition two_qubit_decomp() {
  return decompose(HermitianOperator(two_qubit_hamiltonian(50.0, 50.0, 2.0)), 0.0);
}

}  // namespace

TEST_CASE("decompose sigma_z and degenerate two-qubit cases") {
  const auto d = decompose(HermitianOperator(pauli_z()), 0.0);
  REQUIRE(d.levels().size() == 2);
  CHECK(d.levels()[0].energy == doctest::Approx(-1.0));
  CHECK(d.levels()[1].energy == doctest::Approx(+1.0));

  const auto d4 = two_qubit_decomp();
  REQUIRE(d4.levels().size() == 4);
  CHECK(d4.levels()[0].energy == doctest::Approx(-100.0199980003999).epsilon(1e-13));
  CHECK(d4.levels()[3].energy == doctest::Approx(+100.0199980003999).epsilon(1e-13));

  // J = 0 leaves the middle levels exactly degenerate, projector rank 2.
  const auto dj0 = decompose(HermitianOperator(two_qubit_hamiltonian(50.0, 50.0, 0.0)), 1e-9);
  REQUIRE(dj0.levels().size() == 3);
  CHECK(dj0.levels()[1].energy == doctest::Approx(0.0));
  CHECK(dj0.levels()[1].multiplicity == 2);
}

TEST_CASE("bohr_frequencies of sigma_z and the two-qubit system") {
  const auto d = decompose(HermitianOperator(pauli_z()), 0.0);
  const auto f = bohr_frequencies(d, default_dedup_tol(d));
  REQUIRE(f.size() == 3);
  CHECK(f[0].value == doctest::Approx(-2.0));
  CHECK(f[1].value == doctest::Approx(0.0));
  CHECK(f[2].value == doctest::Approx(2.0));

  const auto d4 = two_qubit_decomp();
  const auto f4 = bohr_frequencies(d4, default_dedup_tol(d4));
  REQUIRE(f4.size() == 9);
  const double e11 = 100.0199980003999;
  const std::vector<double> expected = {-2 * e11, -(e11 + 2), -(e11 - 2), -4.0, 0.0,
                                        4.0,      e11 - 2,    e11 + 2,   2 * e11};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(f4[i].value == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("bohr spectrum is closed under negation and contains zero") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = decompose(HermitianOperator(random_hermitian(4, rng)), 0.0);
    const auto f = bohr_frequencies(d, default_dedup_tol(d));
    bool has_zero = false;
    for (const auto& bf : f.frequencies()) {
      if (bf.value == 0.0) has_zero = true;
      bool found = false;
      for (const auto& other : f.frequencies()) {
        if (std::abs(other.value + bf.value) <= 1e-12 * std::max(1.0, std::abs(bf.value))) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
    CHECK(has_zero);
  }
}

TEST_CASE("jump operators of sigma_x under sigma_z") {
  const auto d = decompose(HermitianOperator(pauli_z()), 0.0);
  const auto f = bohr_frequencies(d, default_dedup_tol(d));
  const auto jumps = jump_operators(d, f, {pauli_x()});
  // A_{+2} = |0><1|, A_{-2} = |1><0|, A_0 = 0.
  Cmat lower = Cmat::Zero(2, 2);
  lower(0, 1) = 1.0;
  CHECK(max_abs(jumps.ops[0][f.index_of(2.0, 1e-9)] - lower) < 1e-14);
  CHECK(max_abs(jumps.ops[0][f.index_of(-2.0, 1e-9)] - lower.adjoint()) < 1e-14);
  CHECK(max_abs(jumps.ops[0][f.index_of(0.0, 1e-9)]) < 1e-14);
}

TEST_CASE("jump operator eigenrelation, completeness and adjoint pairing") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    const Cmat h = random_hermitian(4, rng);
    const auto d = decompose(HermitianOperator(h), 0.0);
    const auto f = bohr_frequencies(d, default_dedup_tol(d));
    const Cmat a_random = random_complex(4, rng);
    const Cmat a_herm = random_hermitian(4, rng);
    const auto jumps = jump_operators(d, f, {a_random, a_herm});

    for (int alpha = 0; alpha < 2; ++alpha) {
      Cmat sum = Cmat::Zero(4, 4);
      for (std::size_t wi = 0; wi < f.size(); ++wi) {
        const Cmat& aw = jumps.ops[alpha][wi];
        sum += aw;
        // [H, A_w] = -w A_w
        CHECK(max_abs(Cmat(h * aw - aw * h + f[wi].value * aw)) < 1e-10);
      }
      CHECK(max_abs(sum - jumps.couplings[alpha]) < 1e-12);
    }
    // Hermitian couplings pair as A_{-w} = A_w^dag.
    for (std::size_t wi = 0; wi < f.size(); ++wi) {
      const int mi = f.index_of(-f[wi].value, 1e-9);
      CHECK(max_abs(Cmat(jumps.ops[1][mi] - jumps.ops[1][wi].adjoint())) < 1e-12);
    }
  }
}

TEST_CASE("reference split with tolerance zero is trivial") {
  const auto d = two_qubit_decomp();
  const auto split = reference_split_by_tolerance(d, 0.0);
  CHECK(split.h0_levels().size() == d.levels().size());
  CHECK(max_abs(split.delta().matrix()) == 0.0);
  for (const auto& c : split.clusters()) CHECK(c.member_freqs.size() == 1);
  CHECK_FALSE(split.collapsed());
}

TEST_CASE("reference split below the minimum gap is trivial") {
  const auto d = two_qubit_decomp();
  const auto split = reference_split_by_tolerance(d, 3.9);  // min gap is 4
  CHECK(split.h0_levels().size() == 4);
  CHECK(max_abs(split.delta().matrix()) == 0.0);
}

TEST_CASE("two-qubit reference split at tolerance 10 gives five clusters") {
  const auto d = two_qubit_decomp();
  const auto split = reference_split_by_tolerance(d, 10.0);
  const double e11 = 100.0199980003999;

  REQUIRE(split.h0_levels().size() == 3);
  CHECK(split.h0_levels()[0].energy == doctest::Approx(-e11).epsilon(1e-12));
  CHECK(split.h0_levels()[1].energy == doctest::Approx(0.0));
  CHECK(split.h0_levels()[1].multiplicity == 2);
  CHECK(split.h0_levels()[2].energy == doctest::Approx(+e11).epsilon(1e-12));

  REQUIRE(split.clusters().size() == 5);
  // Centers: -2 e11, -e11, 0, +e11, +2 e11; the +-e11 clusters hold
  // {e11 -+ 2}, the zero cluster holds {0, +-4}, the extremes are singletons.
  const auto& cl = split.clusters();
  CHECK(cl[0].center == doctest::Approx(-2 * e11).epsilon(1e-12));
  CHECK(cl[0].member_freqs.size() == 1);
  CHECK(cl[1].center == doctest::Approx(-e11).epsilon(1e-12));
  CHECK(cl[1].member_freqs.size() == 2);
  CHECK(cl[2].center == doctest::Approx(0.0));
  CHECK(cl[2].member_freqs.size() == 3);
  CHECK(cl[3].center == doctest::Approx(+e11).epsilon(1e-12));
  CHECK(cl[3].member_freqs.size() == 2);
  CHECK(cl[4].center == doctest::Approx(2 * e11).epsilon(1e-12));

  // Center of the positive cluster is the mean of its two members.
  const auto& f = split.frequencies();
  const double w1 = f[cl[3].member_freqs[0]].value;
  const double w2 = f[cl[3].member_freqs[1]].value;
  CHECK(cl[3].center == doctest::Approx(0.5 * (w1 + w2)).epsilon(1e-12));

  // H0 + delta = H_S and [H0, delta] = 0.
  const Cmat h0 = split.h0_matrix();
  const Cmat delta = split.delta().matrix();
  CHECK(max_abs(h0 + delta - d.reconstruct()) < 1e-10);
  CHECK(max_abs(Cmat(h0 * delta - delta * h0)) < 1e-10);
}

TEST_CASE("cluster partition covers every frequency exactly once") {
  const auto d = two_qubit_decomp();
  const auto split = reference_split_by_tolerance(d, 10.0);
  std::vector<int> seen(split.frequencies().size(), 0);
  for (const auto& c : split.clusters()) {
    for (int fi : c.member_freqs) seen[fi] += 1;
  }
  for (int s : seen) CHECK(s == 1);
  // Centers closed under negation.
  for (const auto& c : split.clusters()) {
    bool found = false;
    for (const auto& o : split.clusters()) {
      if (std::abs(o.center + c.center) <= 1e-9 * std::max(1.0, std::abs(c.center))) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("explicit reference split: trivial, zero and incompatible") {
  const auto d = two_qubit_decomp();

  const auto trivial = reference_split_explicit(d, HermitianOperator(d.reconstruct()));
  CHECK(trivial.h0_levels().size() == 4);
  CHECK(max_abs(trivial.delta().matrix()) < 1e-10);

  // H0 = 0: one level, one cluster containing every Bohr frequency.
  const auto singular = reference_split_explicit(d, HermitianOperator::zero(4));
  CHECK(singular.h0_levels().size() == 1);
  CHECK(singular.collapsed());
  REQUIRE(singular.clusters().size() == 1);
  CHECK(singular.clusters()[0].center == 0.0);
  CHECK(singular.clusters()[0].member_freqs.size() == singular.frequencies().size());

  // A reference that does not commute with the projector structure is refused.
  const Cmat id = Cmat::Identity(2, 2);
  CHECK_THROWS_AS(reference_split_explicit(d, HermitianOperator(kron(pauli_x(), id))),
                  IncompatibleReference);
}

TEST_CASE("dimer explicit split reproduces the local-basis delta") {
  // H = J(|01><10| + h.c.) on the two-dimensional subspace, H0 = 0.
  Cmat h(2, 2);
  h << 0.0, 2.0, 2.0, 0.0;
  const auto d = decompose(HermitianOperator(h), 0.0);
  const auto split = reference_split_explicit(d, HermitianOperator::zero(2));
  CHECK(split.h0_levels().size() == 1);
  CHECK(max_abs(split.delta().matrix() - h) < 1e-10);
}

TEST_CASE("aggregated jump operators agree with the reference-projector formula") {
  const auto d = two_qubit_decomp();
  const auto split = reference_split_by_tolerance(d, 10.0);
  const Cmat id = Cmat::Identity(2, 2);
  const std::vector<Cmat> couplings = {kron(pauli_x(), id) + kron(id, pauli_x()),
                                       kron(pauli_z(), id), kron(id, pauli_z())};
  const auto jumps = jump_operators(d, split.frequencies(), couplings);
  const auto agg = aggregate_jump_operators(jumps, split);
  REQUIRE(agg.aggregated.has_value());

  const Cmat h0 = split.h0_matrix();
  for (std::size_t alpha = 0; alpha < couplings.size(); ++alpha) {
    for (std::size_t c = 0; c < split.clusters().size(); ++c) {
      const double center = split.clusters()[c].center;
      const Cmat& abar = agg.aggregated->ops[alpha][c];
      // Route 2: sum over reference projector pairs at the center frequency.
      Cmat direct = Cmat::Zero(4, 4);
      for (const auto& lk : split.h0_levels()) {
        for (const auto& lkp : split.h0_levels()) {
          if (std::abs(lk.energy - lkp.energy - center) < 1e-6) {
            direct += lkp.projector * couplings[alpha] * lk.projector;
          }
        }
      }
      CHECK(max_abs(abar - direct) < 1e-12);
      // Eigenrelation with respect to H0.
      CHECK(max_abs(Cmat(h0 * abar - abar * h0 + center * abar)) < 1e-10);
    }
  }

  // Trivial split: aggregation is the identity on the frequency axis.
  const auto trivial = reference_split_by_tolerance(d, 0.0);
  const auto jumps_t = jump_operators(d, trivial.frequencies(), couplings);
  const auto agg_t = aggregate_jump_operators(jumps_t, trivial);
  for (std::size_t alpha = 0; alpha < couplings.size(); ++alpha) {
    for (std::size_t c = 0; c < trivial.clusters().size(); ++c) {
      const int fi = trivial.clusters()[c].member_freqs[0];
      CHECK(max_abs(agg_t.aggregated->ops[alpha][c] - jumps_t.ops[alpha][fi]) == 0.0);
    }
  }
}

TEST_CASE("aggregate rejects mismatched provenance") {
  const auto d = two_qubit_decomp();
  const auto split = reference_split_by_tolerance(d, 10.0);
  const auto other = decompose(HermitianOperator(pauli_z()), 0.0);
  const auto f2 = bohr_frequencies(other, default_dedup_tol(other));
  const auto jumps = jump_operators(other, f2, {pauli_x()});
  CHECK_THROWS_AS(aggregate_jump_operators(jumps, split), InvariantViolation);
}

TEST_CASE("validity diagnostics on the two-qubit scenario") {
  const auto d = two_qubit_decomp();
  const auto baths = std::vector<BathDescriptor>{
      drude_lorentz_high_temp("b0", 1.0, 1.0 / (100.0 * units::kWavenumberToRadPerFs), 350.0),
      drude_lorentz_high_temp("b1", 1.0, 1.0 / (100.0 * units::kWavenumberToRadPerFs), 300.0),
      drude_lorentz_high_temp("b2", 1.0, 1.0 / (100.0 * units::kWavenumberToRadPerFs), 400.0)};

  SUBCASE("trivial split has zero flatness ratios") {
    const auto split = reference_split_by_tolerance(d, 0.0);
    const auto r = validity_diagnostics(split, baths);
    CHECK(r.cluster_flatness_re == 0.0);
    CHECK(r.cluster_flatness_im == 0.0);
    CHECK(r.delta_norm_ratio == 0.0);
  }

  SUBCASE("clustered split keeps all three ratios below one") {
    const auto split = reference_split_by_tolerance(d, 10.0);
    const auto r = validity_diagnostics(split, baths);
    CHECK(r.weak_coupling_ratio < 1.0);
    CHECK(r.secular_ratio < 1.0);
    CHECK(r.cluster_flatness_re < 1.0);
    CHECK(r.cluster_flatness_im < 1.0);
    CHECK(r.weak_coupling_ratio > 0.0);
    CHECK_FALSE(r.collapsed);
  }

  SUBCASE("collapsed split is flagged") {
    const auto split = reference_split_explicit(d, HermitianOperator::zero(4));
    const auto r = validity_diagnostics(split, baths);
    CHECK(r.collapsed);
    // Single cluster: no center pairs, flatness measured across the whole spectrum.
    CHECK(r.secular_ratio == 0.0);
  }
}

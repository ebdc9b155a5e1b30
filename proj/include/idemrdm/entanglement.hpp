// SPDX-License-Identifier: Apache-2.0
//
// Reduced density matrices of identical-particle states in the occupation
// basis. Each occupation state is factorized across the bipartition as
// sign * |left> (x) |right>; tracing one side contracts the factor with every
// basis state of that side, which is the same as applying the interior
// product with each traced-side basis bra.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "idemrdm/density_matrix.hpp"
#include "idemrdm/fock.hpp"

namespace idemrdm {

struct MixtureComponent {
  double weight = 1.0;
  GradedVector state;
};

/// Rejects mixtures whose weights are not positive or do not sum to 1, and
/// components whose norm deviates from 1 by more than `norm_tol`.
void validate_mixture(std::span<const MixtureComponent> mixture, double norm_tol = 1e-8);

/// Reduced state of the side opposite to `traced`. Only kept-side occupation
/// states with support appear in the basis, ordered by grade then lexicographically.
DensityMatrix reduced_density_matrix(std::span<const MixtureComponent> mixture, const Bipartition& partition,
                                     Side traced);
DensityMatrix reduced_density_matrix(const GradedVector& state, const Bipartition& partition, Side traced);

/// Removes coherences between superselection sectors: particle number for
/// bosons, particle-number parity for fermions.
DensityMatrix ssr_project(const DensityMatrix& rho, Statistics stats);

/// -sum lambda log2 lambda. Throws when an eigenvalue is below -1e-8.
double von_neumann_entropy(const DensityMatrix& rho);

/// Observable on one subsystem's occupation basis. Acts as zero on states
/// outside `basis`.
class LocalObservable {
 public:
  LocalObservable(Side side, std::vector<OccupationState> basis, SquareMatrix matrix);

  static LocalObservable identity(Side side, const Bipartition& partition, std::size_t max_grade, Statistics stats);
  /// (M + M^dagger)/2 with standard complex Gaussian M.
  static LocalObservable random_hermitian(Side side, std::vector<OccupationState> basis, std::mt19937_64& rng);
  static LocalObservable projector(Side side, const OccupationState& state);

  Side side() const noexcept { return side_; }
  const std::vector<OccupationState>& basis() const noexcept { return basis_; }
  const SquareMatrix& matrix() const noexcept { return matrix_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::optional<std::size_t> index_of(const OccupationState& state) const;

 private:
  Side side_;
  std::vector<OccupationState> basis_;
  SquareMatrix matrix_;
  bool hermitian_;
};

/// Tr(rho K), with rho on the same side as K.
Complex trace_product(const DensityMatrix& rho, const LocalObservable& observable);

/// K (x) identity on the full graded space, using the same L-before-R sign
/// convention as reduced_density_matrix.
class LiftedObservable {
 public:
  LiftedObservable(LocalObservable local, Bipartition partition, SingleParticleSpace space, Statistics stats);

  GradedVector apply(const GradedVector& v) const;
  /// sum_w weight_w <psi_w| K (x) I |psi_w>. Requires a Hermitian K.
  Complex expectation(std::span<const MixtureComponent> mixture) const;
  /// Matrix elements <S_i| K (x) I |S_j> over the given full-space occupation states.
  SquareMatrix matrix_on(const std::vector<OccupationState>& basis) const;

  const LocalObservable& local() const noexcept { return local_; }

 private:
  LocalObservable local_;
  Bipartition partition_;
  SingleParticleSpace space_;
  Statistics stats_;
};

LiftedObservable lift_observable(const LocalObservable& observable, const Bipartition& partition,
                                 const SingleParticleSpace& space, Statistics stats);

/// splitmix64 of (seed, index): per-trial seeds that do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct GnsReport {
  double max_residual = 0.0;
  std::size_t trials = 0;
  bool pass = false;
  /// |Tr(rho_L I) - Tr(rho I)| for the identity observable.
  double identity_residual = 0.0;
  /// Distinguishable-particle control: |Tr(rho_A K_A) - Tr(rho (K_A (x) I_B))|.
  double control_residual = 0.0;
};

/// Compares Tr(rho_L K) against Tr(rho (K (x) I_R)) for `trials` random
/// Hermitian K on the left subsystem.
GnsReport gns_restriction_check(std::span<const MixtureComponent> mixture, const Bipartition& partition,
                                std::size_t trials, std::uint64_t seed, double tolerance = 1e-10);

/// Two particles, one per side: |psi> = sum c_{c mu} |c> ^ |mu> (c in L, mu in R),
/// observable alpha_0 = sum alpha_ab |a><b| (x) I_R.
struct PairRestrictionResult {
  SquareMatrix overlap_matrix;    ///< X_cd = sum_omega c_{c omega} conj(c_{d omega})
  double rdm_residual = 0.0;      ///< max |rho_L - X|
  Complex formula;                ///< sum_ab alpha_ab X_ba
  Complex restricted;             ///< Tr(rho_L alpha)
  Complex full;                   ///< <psi| alpha_0 |psi>
};

/// `coefficients` is |L| x |R| row-major in ascending orbital order; it is
/// normalized before use. `alpha` is |L| x |L|.
PairRestrictionResult two_particle_restriction(const std::vector<Complex>& coefficients, const SquareMatrix& alpha,
                                               const Bipartition& partition, Statistics stats);

}  // namespace idemrdm

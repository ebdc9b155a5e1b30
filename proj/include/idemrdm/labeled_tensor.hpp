// SPDX-License-Identifier: Apache-2.0
//
// Brute-force first-quantized representation with explicit particle
// pseudolabels. An N-particle state is a dense rank-N tensor over the orbital
// basis; slot k carries pseudolabel k. Everything here works on dense arrays
// and never touches the ladder-operator code in fock.hpp, so it can serve as
// an independent reference for it.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "idemrdm/density_matrix.hpp"
#include "idemrdm/fock.hpp"
#include "idemrdm/orbital.hpp"
#include "idemrdm/types.hpp"

namespace idemrdm::fq {

/// Upper bound on d^N for dense tensors.
inline constexpr std::size_t kDenseGuard = 10'000'000;

/// Dense tensor over `slots` pseudolabelled particles, slot 0 most significant.
class LabeledTensor {
 public:
  LabeledTensor(SingleParticleSpace space, std::size_t slots, std::vector<Complex> amplitudes,
                std::optional<Statistics> symmetry = std::nullopt);

  static LabeledTensor zeros(SingleParticleSpace space, std::size_t slots,
                             std::optional<Statistics> symmetry = std::nullopt);

  /// |psi_1>_1 (x) |psi_2>_2 (x) ... with no symmetrization.
  static LabeledTensor product(std::span<const Orbital> orbitals);

  const SingleParticleSpace& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  std::size_t slots() const noexcept { return slots_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  /// Set when the tensor was built symmetrized (bosons) or antisymmetrized (fermions).
  std::optional<Statistics> symmetry() const noexcept { return symmetry_; }

  Complex at(std::span<const int> index) const;
  std::size_t flat_index(std::span<const int> index) const;
  std::vector<int> multi_index(std::size_t flat) const;

  /// Tensor with the contents of slots i and j exchanged.
  LabeledTensor swap_slots(std::size_t i, std::size_t j) const;

  double norm() const;
  /// <this|ket>
  Complex inner(const LabeledTensor& ket) const;

  LabeledTensor operator+(const LabeledTensor& rhs) const;
  LabeledTensor operator*(Complex factor) const;

 private:
  SingleParticleSpace space_;
  std::size_t slots_;
  std::vector<Complex> amplitudes_;
  std::optional<Statistics> symmetry_;
};

/// x (x) y, slots of y appended after slots of x.
LabeledTensor tensor_product(const LabeledTensor& x, const LabeledTensor& y);

/// (1/sqrt(N!)) sum_sigma (+-1)^sigma |psi_1>_{sigma(1)} ... |psi_N>_{sigma(N)}.
/// Carries the same norm as from_orbitals() of the same list.
LabeledTensor symmetrized_product(std::span<const Orbital> orbitals, Statistics stats);

/// Unit-norm symmetrized state. Throws when the result vanishes (linearly
/// dependent fermion orbitals) or the dense size exceeds kDenseGuard.
LabeledTensor symmetrize_explicit(std::span<const Orbital> orbitals, Statistics stats);

/// The elementary symmetrizing map on a rank-k tensor: symmetrize over slots
/// with weight 1/k! and drop every component whose basis indices repeat.
LabeledTensor elementary_symmetrize(const LabeledTensor& x, std::size_t grade);

/// v vee w: elementary_symmetrize(v (x) w).
LabeledTensor vee_product(const LabeledTensor& v, const LabeledTensor& w);

/// Phase angle (radians) for every subset of pseudolabels; unset subsets are 0.
class PhaseAssignment {
 public:
  PhaseAssignment() = default;

  /// Uniform angles in [0, 2pi) for every non-empty subset of 0..slots-1.
  static PhaseAssignment random(std::size_t slots, std::mt19937_64& rng);

  double angle(const std::vector<int>& subset) const;
  void set(std::vector<int> subset, double angle);
  bool all_zero() const;

 private:
  std::map<std::vector<int>, double> angles_;
};

/// A tensor over N pseudolabels that is populated only on some slot subsets.
/// Each sector holds a dense tensor over its own (ascending) slot list.
/// Sectors with different slot lists are orthogonal.
class PartialTensor {
 public:
  using Sectors = std::map<std::vector<int>, std::vector<Complex>>;

  PartialTensor(SingleParticleSpace space, std::size_t total_slots, Sectors sectors);

  const SingleParticleSpace& space() const noexcept { return space_; }
  std::size_t total_slots() const noexcept { return total_slots_; }
  const Sectors& sectors() const noexcept { return sectors_; }

  double norm() const;
  Complex inner(const PartialTensor& ket) const;
  /// The sector on every slot as a full tensor. Requires a single full sector.
  LabeledTensor as_full(std::optional<Statistics> symmetry = std::nullopt) const;

 private:
  SingleParticleSpace space_;
  std::size_t total_slots_;
  Sectors sectors_;
};

/// sum_{a_1<...<a_n} e^{i theta_a} sum_{sigma in S_n} (+-1)^sigma |phi_1>_{a_sigma(1)} ... |phi_n>_{a_sigma(n)},
/// normalized. n = sub_orbitals.size() <= total_slots.
PartialTensor subsystem_basis_states(std::span<const Orbital> sub_orbitals, std::size_t total_slots,
                                     const PhaseAssignment& phases, Statistics stats);

struct ExplicitSubsystemBasis {
  std::vector<std::pair<OccupationState, PartialTensor>> states;
};

/// Every grade-n occupation over `orbitals`, each embedded by subsystem_basis_states.
ExplicitSubsystemBasis explicit_subsystem_basis(const SingleParticleSpace& space, const std::set<int>& orbitals,
                                                std::size_t grade, std::size_t total_slots,
                                                const PhaseAssignment& phases, Statistics stats);

/// <bra| contracted into |ket> on the bra's slots; the result lives on the complementary slots.
PartialTensor contract(const PartialTensor& bra, const LabeledTensor& ket);

struct WeightedTensor {
  double weight = 1.0;
  LabeledTensor state;
};

/// Symmetrized partial trace of sum_w weight_w |T_w><T_w| over the `traced` side.
///
/// For every allowed grade n of the traced side and every traced occupation r,
/// the partial bra from subsystem_basis_states(r) is contracted into each
/// state. The resulting partial tensor is read out in the kept side's
/// occupation basis using kept-side states whose pseudolabel phases are
/// induced by the traced phases (conjugated, with the reordering sign for
/// fermions), so the entries are expressed in the same L-before-R convention
/// as the SEA path. Each traced grade is weighted by C(N, n), the number of
/// pseudolabel subsets the traced particles can occupy.
DensityMatrix partial_trace_explicit(std::span<const WeightedTensor> rho, const Bipartition& partition, Side traced,
                                     const PhaseAssignment& phases);

/// Plain slot-wise partial trace of a distinguishable-particle state onto
/// `kept_slots`. Row/column index is the flat index over the kept slots.
SquareMatrix partial_trace_slots(const LabeledTensor& state, const std::vector<std::size_t>& kept_slots);

struct CorrespondenceReport {
  double max_residual = 0.0;
  std::size_t pairs = 0;
  bool pass = false;
};

/// Checks that amplitudes computed from dense symmetrized tensors agree with
/// the occupation-basis path (from_orbitals + inner_product) for the given
/// bra lists against `orbitals`. Oracle scale only: N <= 5, d <= 6.
CorrespondenceReport sea_correspondence(std::span<const Orbital> orbitals, Statistics stats,
                                        std::span<const std::vector<Orbital>> bras, double tolerance = 1e-10);

/// Same, with bras = every basis-orbital occupation of grade N plus the ket list itself.
CorrespondenceReport sea_correspondence(std::span<const Orbital> orbitals, Statistics stats,
                                        double tolerance = 1e-10);

}  // namespace idemrdm::fq

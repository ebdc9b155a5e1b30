// SPDX-License-Identifier: Apache-2.0
//
// Randomized cross-checks between the occupation-basis (SEA) path and the
// dense first-quantized oracle.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idemrdm/entanglement.hpp"
#include "idemrdm/labeled_tensor.hpp"

namespace idemrdm {

/// One state given in both representations.
struct DualState {
  std::vector<MixtureComponent> sea;
  std::vector<fq::WeightedTensor> dense;
};

struct VerificationInstance {
  Statistics stats;
  SingleParticleSpace space;
  Bipartition partition;
  DualState state;
  fq::PhaseAssignment phases;
  bool pure = true;
  std::string description;
};

struct RandomInstanceOptions {
  std::size_t max_particles = 4;
  std::size_t max_dim = 8;
  bool allow_mixed = true;
};

/// Dense counterpart of an occupation-basis vector: each normalized basis
/// vector maps to the normalized (anti)symmetrized tensor of its orbitals in
/// canonical order. Every term must have the same grade.
fq::LabeledTensor to_labeled_tensor(const GradedVector& v);

DualState dual_from_mixture(const std::vector<MixtureComponent>& mixture);

VerificationInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

struct EquivalenceResult {
  /// max entrywise |SEA - oracle| over both traced sides, zero phases.
  double rdm_residual = 0.0;
  /// Same with the instance's random phase assignment.
  double phased_rdm_residual = 0.0;
  /// max |eigenvalue difference| between zero-phase and phased oracle RDMs.
  double spectrum_residual = 0.0;
  /// |S(rho_L) - S(rho_R)| for pure states, 0 otherwise.
  double entropy_asymmetry = 0.0;
  /// Every emitted DensityMatrix is Hermitian, PSD and unit-trace.
  bool all_valid = true;

  bool pass(double tolerance) const {
    return all_valid && rdm_residual <= tolerance && phased_rdm_residual <= tolerance &&
           spectrum_residual <= tolerance && entropy_asymmetry <= 1e-9;
  }
};

EquivalenceResult check_equivalence(const Bipartition& partition, const DualState& state,
                                    const fq::PhaseAssignment& phases, bool pure);
EquivalenceResult check_equivalence(const VerificationInstance& instance);

/// Padded, sorted eigenvalue lists compared elementwise.
double spectrum_distance(std::vector<double> a, std::vector<double> b);

}  // namespace idemrdm

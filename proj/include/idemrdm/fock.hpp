// SPDX-License-Identifier: Apache-2.0
//
// Occupation-basis Fock space over a finite single-particle space.
//
// Basis vectors are labelled by sorted orbital lists. For bosons the list is a
// multiset and the vector is the normalized occupation-number state. For
// fermions the list is strictly increasing and the vector is
// e_{i1} ^ ... ^ e_{in} with i1 < ... < in. Ladder operators follow
//   a+(e_i)|..n_i..> = sqrt(n_i + 1)|..n_i + 1..>        (bosons)
//   a+(e_i)|S>       = (-1)^{#{j in S : j < i}} |S + i>  (fermions)
// and a(phi) is the adjoint of a+(phi).
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idemrdm/orbital.hpp"
#include "idemrdm/types.hpp"

namespace idemrdm {

class OccupationState {
 public:
  OccupationState() = default;

  /// Canonical state from an already sorted list. Throws when the list is
  /// unsorted, or when a fermion list repeats an orbital.
  OccupationState(Statistics stats, std::vector<int> sorted_orbitals);

  /// Sorts an arbitrary orbital sequence into canonical order. Returns the
  /// permutation sign for fermions (+1 for bosons), or 0 when a fermion
  /// orbital repeats.
  static std::pair<OccupationState, int> canonicalize(Statistics stats, std::vector<int> orbitals);

  const std::vector<int>& orbitals() const noexcept { return orbitals_; }
  std::size_t grade() const noexcept { return orbitals_.size(); }
  bool empty() const noexcept { return orbitals_.empty(); }
  std::size_t count(int orbital) const;
  std::string label() const;

  /// Ordered by grade, then lexicographically.
  friend std::strong_ordering operator<=>(const OccupationState& a, const OccupationState& b);
  friend bool operator==(const OccupationState& a, const OccupationState& b) = default;

 private:
  std::vector<int> orbitals_;
};

/// Sparse vector over occupation states of every grade.
class GradedVector {
 public:
  using Terms = std::map<OccupationState, Complex>;

  /// The zero vector.
  GradedVector(Statistics stats, SingleParticleSpace space);
  GradedVector(Statistics stats, SingleParticleSpace space, Terms terms);

  static GradedVector vacuum(Statistics stats, SingleParticleSpace space);

  /// A single basis vector given by an orbital sequence in any order; fermion
  /// sequences are reordered with the corresponding sign.
  static GradedVector basis_state(Statistics stats, SingleParticleSpace space, std::vector<int> orbitals,
                                  Complex amplitude = 1.0);

  Statistics statistics() const noexcept { return stats_; }
  const SingleParticleSpace& space() const noexcept { return space_; }
  const Terms& terms() const noexcept { return terms_; }
  std::set<std::size_t> grades() const;
  bool is_zero() const noexcept { return terms_.empty(); }
  Complex amplitude(const OccupationState& state) const;

  double norm() const;
  GradedVector normalized() const;

  GradedVector operator+(const GradedVector& rhs) const;
  GradedVector operator-(const GradedVector& rhs) const;
  GradedVector operator*(Complex factor) const;

 private:
  void prune();

  Statistics stats_;
  SingleParticleSpace space_;
  Terms terms_;
};

void require_compatible(const GradedVector& u, const GradedVector& v);

/// Every occupation state of the given grade over a subset of orbitals, ascending.
std::vector<OccupationState> enumerate_occupations(const std::set<int>& orbitals, std::size_t grade,
                                                   Statistics stats);

/// a+(phi) v.
GradedVector create_apply(const Orbital& phi, const GradedVector& v);

/// a(phi) v, the interior product of <phi| with v.
GradedVector annihilate_apply(const Orbital& phi, const GradedVector& v);

/// a+(psi_1) ... a+(psi_N) |vac>, unnormalized.
GradedVector from_orbitals(std::span<const Orbital> orbitals, Statistics stats);

/// <u|v>, conjugate-linear in u.
Complex inner_product(const GradedVector& u, const GradedVector& v);

/// per(A) for bosons, det(A) for fermions, A_ij = <bra_i|ket_j>.
Complex transition_amplitude(std::span<const Orbital> bra, std::span<const Orbital> ket, Statistics stats);

}  // namespace idemrdm

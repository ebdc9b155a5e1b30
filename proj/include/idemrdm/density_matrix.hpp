// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "idemrdm/fock.hpp"
#include "idemrdm/matrix_kernels.hpp"
#include "idemrdm/orbital.hpp"

namespace idemrdm {

enum class Side { Left, Right };

inline Side opposite(Side side) noexcept { return side == Side::Left ? Side::Right : Side::Left; }
inline const char* to_string(Side side) noexcept { return side == Side::Left ? "L" : "R"; }

/// Split of the orbitals into two detector regions.
class Bipartition {
 public:
  /// Throws unless the two sets are disjoint and cover 0..dim-1.
  Bipartition(const SingleParticleSpace& space, std::set<int> left, std::set<int> right);

  const std::set<int>& left() const noexcept { return left_; }
  const std::set<int>& right() const noexcept { return right_; }
  const std::set<int>& orbitals(Side side) const noexcept { return side == Side::Left ? left_ : right_; }
  Side side_of(int orbital) const;
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
  std::set<int> left_;
  std::set<int> right_;
};

/// An occupation state split as sign * |left> (x) |right>, with the left
/// factor ordered before the right one. For fermions the sign is
/// (-1)^{number of (l, r) pairs with r < l}.
struct SplitState {
  OccupationState left;
  OccupationState right;
  int sign = 1;
};

SplitState split(const OccupationState& state, const Bipartition& partition, Statistics stats);

/// Inverse of split(): returns the joined canonical state and the sign s with
/// |left> (x) |right> = s * |joined>.
std::pair<OccupationState, int> join(const OccupationState& left, const OccupationState& right, Statistics stats);

/// Operator on one subsystem, stored in that subsystem's occupation basis.
class DensityMatrix {
 public:
  DensityMatrix(Statistics stats, std::vector<OccupationState> basis, SquareMatrix entries);

  Statistics statistics() const noexcept { return stats_; }
  const std::vector<OccupationState>& basis() const noexcept { return basis_; }
  const SquareMatrix& matrix() const noexcept { return entries_; }
  std::size_t size() const noexcept { return basis_.size(); }
  std::size_t grade(std::size_t i) const { return basis_[i].grade(); }

  std::optional<std::size_t> index_of(const OccupationState& state) const;
  /// Entry by label; zero for labels outside the basis.
  Complex entry(const OccupationState& row, const OccupationState& col) const;

  Complex trace() const { return entries_.trace(); }
  std::vector<double> eigenvalues() const;

  /// Checks the density-operator invariants: Hermitian to 1e-12,
  /// eigenvalues >= -1e-10, unit trace to 1e-10.
  bool is_valid(double hermitian_tol = 1e-12, double eigen_tol = 1e-10, double trace_tol = 1e-10) const;

 private:
  Statistics stats_;
  std::vector<OccupationState> basis_;
  SquareMatrix entries_;
};

/// max over the union of both bases of |a(row, col) - b(row, col)|.
double max_entry_difference(const DensityMatrix& a, const DensityMatrix& b);

struct JacobiOptions {
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.
std::vector<double> hermitian_eigenvalues(const SquareMatrix& h, JacobiOptions options = {});

}  // namespace idemrdm

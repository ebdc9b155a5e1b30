// SPDX-License-Identifier: Apache-2.0
//
// Dense complex square matrices and the scalar kernels behind transition
// amplitudes: permanent (Ryser, Gray-code order), a brute-force permanent
// used as an oracle, and an LU determinant.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "idemrdm/orbital.hpp"
#include "idemrdm/types.hpp"

namespace idemrdm {

/// Row-major n x n complex matrix, n >= 1.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t order);
  SquareMatrix(std::size_t order, std::vector<Complex> entries);
  SquareMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static SquareMatrix identity(std::size_t order);
  static SquareMatrix constant(std::size_t order, Complex value);

  std::size_t order() const noexcept { return order_; }
  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * order_ + col]; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * order_ + col]; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  SquareMatrix transpose() const;
  SquareMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  bool all_finite() const;
  bool is_hermitian(double tol) const;

  SquareMatrix operator*(const SquareMatrix& rhs) const;
  SquareMatrix operator+(const SquareMatrix& rhs) const;
  SquareMatrix operator-(const SquareMatrix& rhs) const;
  SquareMatrix operator*(Complex factor) const;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t order_;
  std::vector<Complex> entries_;
};

inline constexpr std::size_t kRyserMaxOrder = 30;
inline constexpr std::size_t kNaivePermanentMaxOrder = 9;

struct RyserOptions {
  /// Worker threads for the subset loop. The result does not depend on this:
  /// the Gray-code range is split into a fixed set of chunks whose partial
  /// sums are combined by a fixed-shape tree reduction.
  std::size_t workers = 1;
};

/// per(A) by Ryser's inclusion-exclusion formula, O(2^n n).
Complex permanent_ryser(const SquareMatrix& a, RyserOptions options = {});

/// per(A) as a sum over all n! permutations. Oracle only, n <= 9.
Complex permanent_naive(const SquareMatrix& a);

/// det(A) by partially pivoted LU. Returns exactly 0 when no pivot exceeds
/// 1e-14 * max|A_ij| in the active column.
Complex determinant(const SquareMatrix& a);

/// A_ij = <bra_i|ket_j>.
SquareMatrix gram_matrix(std::span<const Orbital> bra, std::span<const Orbital> ket);

}  // namespace idemrdm

// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "idemrdm/density_matrix.hpp"
#include "idemrdm/matrix_kernels.hpp"

using namespace idemrdm;

namespace {

// Cofactor expansion along the first row.
Complex cofactor_det(const SquareMatrix& a) {
  const std::size_t n = a.order();
  if (n == 1) return a(0, 0);
  Complex sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    SquareMatrix minor(n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = a(i, j);
    sum += (c % 2 ? -1.0 : 1.0) * a(0, c) * cofactor_det(minor);
  }
  return sum;
}

SquareMatrix permute_rows(const SquareMatrix& a, std::size_t i, std::size_t j) {
  SquareMatrix b = a;
  for (std::size_t c = 0; c < a.order(); ++c) std::swap(b(i, c), b(j, c));
  return b;
}

SquareMatrix permute_cols(const SquareMatrix& a, std::size_t i, std::size_t j) {
  return permute_rows(a.transpose(), i, j).transpose();
}

}  // namespace

TEST_CASE("permanent examples") {
  CHECK(permanent_ryser(SquareMatrix::constant(3, 1.0)) == Complex(6.0));
  CHECK(permanent_ryser(SquareMatrix::identity(4)) == Complex(1.0));
  CHECK(permanent_naive(SquareMatrix{{Complex(2, -1)}}) == Complex(2, -1));
  CHECK(permanent_naive(SquareMatrix{{1.0, 2.0}, {3.0, 4.0}}) == Complex(10.0));
  CHECK(permanent_naive(SquareMatrix::constant(4, 1.0)) == Complex(24.0));
  const SquareMatrix m{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}};
  CHECK(std::abs(permanent_ryser(m) - 450.0) < 1e-12);
  CHECK(std::abs(permanent_naive(m) - 450.0) < 1e-12);
}

TEST_CASE("permanent guards") {
  CHECK_THROWS_AS(permanent_ryser(SquareMatrix(31)), GuardExceeded);
  CHECK_THROWS_AS(permanent_naive(SquareMatrix(10)), GuardExceeded);
  SquareMatrix bad = SquareMatrix::identity(2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(permanent_ryser(bad), InvalidArgument);
  CHECK_THROWS_AS(determinant(bad), InvalidArgument);
}

TEST_CASE("permanent of the all-ones matrix is n!") {
  double factorial = 1.0;
  for (std::size_t n = 1; n <= 12; ++n) {
    factorial *= static_cast<double>(n);
    CHECK(std::abs(permanent_ryser(SquareMatrix::constant(n, 1.0)) - factorial) <= 1e-12 * factorial);
  }
}

TEST_CASE("ryser does not depend on the worker count") {
  auto r = gen::rng(7);
  for (std::size_t n : {1u, 5u, 9u, 13u}) {
    const auto a = gen::matrix(r, n);
    const Complex one = permanent_ryser(a, {1});
    for (std::size_t w : {2u, 3u, 8u}) CHECK(permanent_ryser(a, {w}) == one);
  }
}

TEST_CASE("property: ryser matches the naive permanent") {
  auto r = gen::rng(202);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = gen::matrix(r, gen::index(r, 1, 7));
    CHECK(scaled_residual(permanent_ryser(a), permanent_naive(a)) < 1e-10);
  }
}

TEST_CASE("property: permanent and determinant symmetries") {
  auto r = gen::rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::index(r, 2, 7);
    const auto a = gen::matrix(r, n);
    const std::size_t i = gen::index(r, 0, n - 1);
    const std::size_t j = (i + gen::index(r, 1, n - 1)) % n;
    const Complex per = permanent_ryser(a);
    const Complex det = determinant(a);
    CHECK(scaled_residual(permanent_ryser(permute_rows(a, i, j)), per) < 1e-10);
    CHECK(scaled_residual(permanent_ryser(permute_cols(a, i, j)), per) < 1e-10);
    CHECK(scaled_residual(permanent_ryser(a.transpose()), per) < 1e-10);
    CHECK(scaled_residual(determinant(permute_rows(a, i, j)), -det) < 1e-10);
    CHECK(scaled_residual(determinant(a.transpose()), det) < 1e-10);
  }
}

TEST_CASE("determinant") {
  CHECK(determinant(SquareMatrix::identity(5)) == Complex(1.0));
  CHECK(determinant(SquareMatrix{{1.0, 2.0}, {3.0, 4.0}}) == Complex(-2.0));
  CHECK(determinant(SquareMatrix{{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, {0.0, 1.0, 5.0}}) == Complex(0.0));
  auto r = gen::rng(204);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = gen::matrix(r, 5);
    CHECK(scaled_residual(determinant(a), cofactor_det(a)) < 1e-10);
  }
}

TEST_CASE("gram_matrix") {
  std::vector<Orbital> ortho{Orbital::basis(3, 0), Orbital::basis(3, 1)};
  CHECK(gram_matrix(ortho, ortho) == SquareMatrix::identity(2));
  std::vector<Orbital> bra{Orbital::basis(2, 0)}, ket{Orbital::basis(2, 1)};
  CHECK(gram_matrix(bra, ket) == SquareMatrix{{0.0}});
  CHECK_THROWS_AS(gram_matrix(ortho, bra), DimensionMismatch);
  auto r = gen::rng(205);
  const auto orbs = gen::orbitals(r, 4, 3);
  const auto g = gram_matrix(orbs, orbs);
  CHECK(g.is_hermitian(1e-14));
  CHECK(g(0, 1) == orbs[0].overlap(orbs[1]));
}

TEST_CASE("jacobi eigenvalues match Eigen") {
  auto r = gen::rng(206);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = gen::index(r, 1, 24);
    const auto x = gen::matrix(r, n);
    const SquareMatrix h = x + x.adjoint();
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = h(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    const auto ours = hermitian_eigenvalues(h);
    REQUIRE(ours.size() == n);
    const double scale = std::max(1.0, h.max_abs());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ours[i] - solver.eigenvalues()[i]) < 1e-10 * scale);
  }
}

TEST_CASE("jacobi handles degenerate and diagonal input") {
  CHECK(hermitian_eigenvalues(SquareMatrix::identity(4)) == std::vector<double>(4, 1.0));
  const SquareMatrix pauli_y{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}};
  const auto ev = hermitian_eigenvalues(pauli_y);
  CHECK(std::abs(ev[0] + 1.0) < 1e-14);
  CHECK(std::abs(ev[1] - 1.0) < 1e-14);
}

TEST_CASE("jacobi stays unitary with denormal off-diagonal entries") {
  SquareMatrix h{{0.3, 0.1, Complex(3e-322, 1e-323)}, {0.1, 0.5, 0.0}, {Complex(3e-322, -1e-323), 0.0, 0.2}};
  const auto ev = hermitian_eigenvalues(h);
  double sum = 0.0;
  for (double e : ev) sum += e;
  CHECK(std::abs(sum - 1.0) < 1e-14);
  CHECK(std::abs(ev[0] - 0.2) < 1e-14);
}

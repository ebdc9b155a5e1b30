// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/matrix_kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>

namespace idemrdm {

SquareMatrix::SquareMatrix(std::size_t order) : SquareMatrix(order, std::vector<Complex>(order * order)) {}

SquareMatrix::SquareMatrix(std::size_t order, std::vector<Complex> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order_ == 0) throw InvalidArgument("square matrix must have order >= 1");
  if (entries_.size() != order_ * order_)
    throw DimensionMismatch("square matrix: expected " + std::to_string(order_ * order_) + " entries, got " +
                            std::to_string(entries_.size()));
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : SquareMatrix(rows.size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != order_) throw DimensionMismatch("square matrix: ragged initializer");
    std::copy(row.begin(), row.end(), entries_.begin() + static_cast<std::ptrdiff_t>(r * order_));
    ++r;
  }
}

SquareMatrix SquareMatrix::identity(std::size_t order) {
  SquareMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::constant(std::size_t order, Complex value) {
  return SquareMatrix(order, std::vector<Complex>(order * order, value));
}

SquareMatrix SquareMatrix::transpose() const {
  SquareMatrix t(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SquareMatrix SquareMatrix::adjoint() const {
  SquareMatrix t(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

Complex SquareMatrix::trace() const {
  Complex sum{};
  for (std::size_t i = 0; i < order_; ++i) sum += (*this)(i, i);
  return sum;
}

double SquareMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

bool SquareMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool SquareMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = i; j < order_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
  if (rhs.order_ != order_) throw DimensionMismatch("matrix product: order mismatch");
  SquareMatrix out(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t k = 0; k < order_; ++k) {
      const Complex aik = (*this)(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < order_; ++j) out(i, j) += aik * rhs(k, j);
    }
  return out;
}

SquareMatrix SquareMatrix::operator+(const SquareMatrix& rhs) const {
  if (rhs.order_ != order_) throw DimensionMismatch("matrix sum: order mismatch");
  SquareMatrix out(*this);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
  return out;
}

SquareMatrix SquareMatrix::operator-(const SquareMatrix& rhs) const { return *this + rhs * Complex{-1.0}; }

SquareMatrix SquareMatrix::operator*(Complex factor) const {
  SquareMatrix out(*this);
  for (auto& z : out.entries_) z *= factor;
  return out;
}

namespace {

void require_finite(const SquareMatrix& a, const char* what) {
  if (!a.all_finite()) throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
}

// Sum of the Ryser terms for Gray-code indices [first, last).
// Term for subset S is (-1)^{|S|} prod_i sum_{j in S} a_ij.
Complex ryser_chunk(const SquareMatrix& a, std::uint64_t first, std::uint64_t last) {
  const std::size_t n = a.order();
  std::vector<Complex> row_sums(n, Complex{});
  std::uint64_t gray = first ^ (first >> 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (((gray >> j) & 1U) == 0U) continue;
    for (std::size_t i = 0; i < n; ++i) row_sums[i] += a(i, j);
  }
  double sign = (std::popcount(gray) % 2 == 0) ? 1.0 : -1.0;

  auto product = [&]() {
    Complex p = row_sums[0];
    for (std::size_t i = 1; i < n; ++i) p *= row_sums[i];
    return p;
  };

  Complex sum = (gray == 0) ? Complex{} : sign * product();
  for (std::uint64_t k = first + 1; k < last; ++k) {
    const auto j = static_cast<std::size_t>(std::countr_zero(k));
    gray ^= (std::uint64_t{1} << j);
    if ((gray >> j) & 1U) {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] += a(i, j);
    } else {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] -= a(i, j);
    }
    sign = -sign;
    sum += sign * product();
  }
  return sum;
}

Complex tree_reduce(std::vector<Complex> values) {
  while (values.size() > 1) {
    std::vector<Complex> next((values.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = values[2 * i];
      if (2 * i + 1 < values.size()) next[i] += values[2 * i + 1];
    }
    values = std::move(next);
  }
  return values.empty() ? Complex{} : values.front();
}

}  // namespace

Complex permanent_ryser(const SquareMatrix& a, RyserOptions options) {
  const std::size_t n = a.order();
  if (n > kRyserMaxOrder)
    throw GuardExceeded("permanent_ryser: order " + std::to_string(n) + " exceeds guard " +
                        std::to_string(kRyserMaxOrder));
  require_finite(a, "permanent_ryser");

  const std::uint64_t subsets = std::uint64_t{1} << n;
  const std::uint64_t chunk_count = std::uint64_t{1} << std::min<std::size_t>(n, 6);
  const std::uint64_t chunk_size = subsets / chunk_count;

  std::vector<Complex> partial(chunk_count);
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, chunk_count);
  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunk_count; ++c) partial[c] = ryser_chunk(a, c * chunk_size, (c + 1) * chunk_size);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunk_count; c += workers)
          partial[c] = ryser_chunk(a, c * chunk_size, (c + 1) * chunk_size);
      });
    }
    for (auto& t : pool) t.join();
  }
  const Complex total = tree_reduce(std::move(partial));
  return (n % 2 == 0) ? total : -total;
}

Complex permanent_naive(const SquareMatrix& a) {
  const std::size_t n = a.order();
  if (n > kNaivePermanentMaxOrder)
    throw GuardExceeded("permanent_naive: order " + std::to_string(n) + " exceeds guard " +
                        std::to_string(kNaivePermanentMaxOrder));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex sum{};
  do {
    Complex p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= a(i, perm[i]);
    sum += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

Complex determinant(const SquareMatrix& a) {
  require_finite(a, "determinant");
  const std::size_t n = a.order();
  const double threshold = 1e-14 * a.max_abs();
  if (a.max_abs() == 0.0) return 0.0;

  SquareMatrix lu(a);
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(lu(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best <= threshold) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
      det = -det;
    }
    const Complex diag = lu(col, col);
    det *= diag;
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = lu(r, col) / diag;
      if (factor == Complex{}) continue;
      for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= factor * lu(col, j);
    }
  }
  return det;
}

SquareMatrix gram_matrix(std::span<const Orbital> bra, std::span<const Orbital> ket) {
  if (bra.size() != ket.size())
    throw DimensionMismatch("gram_matrix: bra has " + std::to_string(bra.size()) + " orbitals, ket has " +
                            std::to_string(ket.size()));
  if (bra.empty()) throw InvalidArgument("gram_matrix: empty orbital lists");
  SquareMatrix g(bra.size());
  for (std::size_t i = 0; i < bra.size(); ++i)
    for (std::size_t j = 0; j < ket.size(); ++j) g(i, j) = bra[i].overlap(ket[j]);
  return g;
}

}  // namespace idemrdm

// SPDX-License-Identifier: Apache-2.0
//
// Seeded generators shared by the property tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "idemrdm/fock.hpp"
#include "idemrdm/matrix_kernels.hpp"
#include "idemrdm/orbital.hpp"

namespace gen {

using idemrdm::Complex;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Complex complex(std::mt19937_64& r) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(r);
  return {re, g(r)};
}

inline std::size_t index(std::mt19937_64& r, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(r);
}

inline idemrdm::Orbital orbital(std::mt19937_64& r, std::size_t dim) {
  std::vector<Complex> amps(dim);
  for (auto& z : amps) z = complex(r);
  return idemrdm::Orbital(std::move(amps));
}

inline std::vector<idemrdm::Orbital> orbitals(std::mt19937_64& r, std::size_t dim, std::size_t count) {
  std::vector<idemrdm::Orbital> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(orbital(r, dim));
  return out;
}

inline idemrdm::SquareMatrix matrix(std::mt19937_64& r, std::size_t n) {
  idemrdm::SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = complex(r);
  return m;
}

inline std::set<int> all_orbitals(std::size_t dim) {
  std::set<int> s;
  for (std::size_t i = 0; i < dim; ++i) s.insert(static_cast<int>(i));
  return s;
}

/// Random superposition of up to `terms` basis states with grades in [0, max_grade].
inline idemrdm::GradedVector graded(std::mt19937_64& r, idemrdm::Statistics stats, std::size_t dim,
                                    std::size_t max_grade, std::size_t terms) {
  const idemrdm::SingleParticleSpace space(dim);
  idemrdm::GradedVector v(stats, space);
  for (std::size_t t = 0; t < terms; ++t) {
    const std::size_t n = index(r, 0, max_grade);
    auto occ = idemrdm::enumerate_occupations(all_orbitals(dim), n, stats);
    if (occ.empty()) continue;
    const auto& pick = occ[index(r, 0, occ.size() - 1)];
    v = v + idemrdm::GradedVector::basis_state(stats, space, pick.orbitals(), complex(r));
  }
  return v;
}

/// Random bipartition of 0..dim-1 with both sides non-empty.
inline std::pair<std::set<int>, std::set<int>> split(std::mt19937_64& r, std::size_t dim) {
  std::vector<int> ids(dim);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), r);
  const auto cut = static_cast<std::ptrdiff_t>(index(r, 1, dim - 1));
  return {std::set<int>(ids.begin(), ids.begin() + cut), std::set<int>(ids.begin() + cut, ids.end())};
}

}  // namespace gen

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idemrdm/types.hpp"

namespace idemrdm {

/// Finite single-particle space with orbitals 0..dim-1.
class SingleParticleSpace {
 public:
  explicit SingleParticleSpace(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  bool contains(int orbital) const noexcept {
    return orbital >= 0 && static_cast<std::size_t>(orbital) < dim_;
  }

  friend bool operator==(const SingleParticleSpace&, const SingleParticleSpace&) = default;

 private:
  std::size_t dim_;
};

/// A single-particle ket expanded in the orbital basis. Not necessarily normalized.
class Orbital {
 public:
  explicit Orbital(std::vector<Complex> amplitudes);

  /// The basis orbital e_index.
  static Orbital basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  /// <this|ket>
  Complex overlap(const Orbital& ket) const;
  double norm() const;

  Orbital operator+(const Orbital& other) const;
  Orbital operator*(Complex factor) const;

 private:
  std::vector<Complex> amplitudes_;
};

void require_space(const SingleParticleSpace& space, const Orbital& orbital);

}  // namespace idemrdm

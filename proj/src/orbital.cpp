// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/orbital.hpp"

#include <cmath>
#include <string>

namespace idemrdm {

SingleParticleSpace::SingleParticleSpace(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidArgument("single-particle space must have at least one orbital");
}

Orbital::Orbital(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw InvalidArgument("orbital has no amplitudes");
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw InvalidArgument("orbital amplitude is not finite");
  }
}

Orbital Orbital::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("basis orbital index out of range");
  std::vector<Complex> amps(dim, Complex{});
  amps[index] = 1.0;
  return Orbital(std::move(amps));
}

Complex Orbital::overlap(const Orbital& ket) const {
  if (ket.dim() != dim()) throw DimensionMismatch("orbital overlap: dimension mismatch");
  Complex sum{};
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) sum += std::conj(amplitudes_[i]) * ket.amplitudes_[i];
  return sum;
}

double Orbital::norm() const { return std::sqrt(overlap(*this).real()); }

Orbital Orbital::operator+(const Orbital& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("orbital sum: dimension mismatch");
  std::vector<Complex> out(amplitudes_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.amplitudes_[i];
  return Orbital(std::move(out));
}

Orbital Orbital::operator*(Complex factor) const {
  std::vector<Complex> out(amplitudes_);
  for (auto& a : out) a *= factor;
  return Orbital(std::move(out));
}

void require_space(const SingleParticleSpace& space, const Orbital& orbital) {
  if (orbital.dim() != space.dim()) {
    throw DimensionMismatch("orbital of dimension " + std::to_string(orbital.dim()) +
                            " does not live in a space of dimension " + std::to_string(space.dim()));
  }
}

}  // namespace idemrdm

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

namespace idemrdm {

using Complex = std::complex<double>;

enum class Statistics { Boson, Fermion };

/// +1 for bosons, -1 for fermions.
constexpr double exchange_sign(Statistics stats) noexcept {
  return stats == Statistics::Boson ? 1.0 : -1.0;
}

inline const char* to_string(Statistics stats) noexcept {
  return stats == Statistics::Boson ? "boson" : "fermion";
}

/// Amplitudes below this magnitude are dropped from sparse storage.
inline constexpr double kPruneThreshold = 1e-15;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Absolute tolerance for values of order <= 1, relative otherwise.
inline bool approx_equal(Complex a, Complex b, double tol) noexcept {
  const double scale = std::max(1.0, std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

inline double scaled_residual(Complex a, Complex b) noexcept {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace idemrdm

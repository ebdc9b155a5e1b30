// SPDX-License-Identifier: Apache-2.0
//
// JSON input files.
//
// State file:
//   {
//     "statistics": "fermion",                 // or "boson"
//     "dim": 8,
//     "modes": {"L": [0, 1, 2, 3], "R": [4, 5, 6, 7]},
//     "terms": [{"amplitude": [0.7071067811865476, 0.0], "orbitals": [0, 1, 4]}, ...],
//     "mixture": [{"weight": 0.5, "terms": [...]}, ...]    // instead of "terms"
//   }
// A term's orbital list is read as the ordered product of creation operators,
// so a fermion list in non-ascending order picks up the reordering sign.
//
// Orbital-list file (for `amplitude`):
//   {"statistics": "boson", "dim": 3, "orbitals": [0, [[0.6, 0], [0.8, 0], [0, 0]]]}
// An integer entry i is the basis orbital e_i; an array is a list of [re, im].
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "idemrdm/density_matrix.hpp"
#include "idemrdm/entanglement.hpp"
#include "idemrdm/orbital.hpp"

namespace idemrdm::io {

/// Input violates the file schema. `line` is 1-based, 0 when unknown.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, std::size_t line, std::string reason);

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::size_t line_;
  std::string reason_;
};

/// File could not be read.
class IoError : public Error {
 public:
  using Error::Error;
};

struct Term {
  Complex amplitude;
  std::vector<int> orbitals;
};

struct Component {
  double weight = 1.0;
  std::vector<Term> terms;
};

struct StateFile {
  Statistics statistics = Statistics::Fermion;
  std::size_t dim = 0;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<Component> components;
  /// Component norms before normalization.
  std::vector<double> input_norms;
  std::vector<std::string> warnings;

  SingleParticleSpace space() const { return SingleParticleSpace(dim); }
  Bipartition bipartition() const;
  /// Normalized components.
  std::vector<MixtureComponent> mixture() const;
};

StateFile parse_state_text(const std::string& text);
StateFile parse_state_file(const std::filesystem::path& path);

struct OrbitalListFile {
  Statistics statistics = Statistics::Fermion;
  std::size_t dim = 0;
  std::vector<Orbital> orbitals;
};

OrbitalListFile parse_orbital_list_text(const std::string& text);
OrbitalListFile parse_orbital_list_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes a state back in the state-file schema.
std::string state_to_json(const StateFile& state);

}  // namespace idemrdm::io

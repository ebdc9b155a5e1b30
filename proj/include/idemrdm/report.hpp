// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace idemrdm {

/// 64-bit FNV-1a, continuing from `state`.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

/// Outcome of one CLI command.
///
/// Everything except `wall_seconds` is a function of the inputs, so two runs
/// with the same files and seed serialize identically once timing is left out.
struct Report {
  std::string command;
  std::string inputs_digest;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
  bool pass = true;
  double wall_seconds = 0.0;

  std::string to_json(bool include_timing = true) const;
  /// `key  value` lines with keys padded to a common width.
  std::string to_text(bool include_timing = true) const;
};

/// Digest over file contents in order; each file is length-prefixed.
std::string inputs_digest(const std::vector<std::string>& contents);

}  // namespace idemrdm

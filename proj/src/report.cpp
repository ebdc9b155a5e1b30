// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace idemrdm {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string inputs_digest(const std::vector<std::string>& contents) {
  std::uint64_t h = fnv1a("");
  for (const auto& c : contents) {
    h = fnv1a(std::to_string(c.size()) + ":", h);
    h = fnv1a(c, h);
  }
  return fmt::format("fnv1a:{:016x}", h);
}

std::string Report::to_json(bool include_timing) const {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["inputs_digest"] = inputs_digest;
  for (const auto& [key, value] : results.items()) doc[key] = value;
  if (!warnings.empty()) doc["warnings"] = warnings;
  doc["pass"] = pass;
  if (include_timing) doc["timing"] = {{"wall_seconds", wall_seconds}};
  return doc.dump(2) + "\n";
}

namespace {

std::string scalar_text(const nlohmann::ordered_json& v) {
  if (v.is_number_float()) return fmt::format("{:.12g}", v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string Report::to_text(bool include_timing) const {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("command", command);
  rows.emplace_back("inputs_digest", inputs_digest);
  for (const auto& [key, value] : results.items()) rows.emplace_back(key, scalar_text(value));
  for (const auto& w : warnings) rows.emplace_back("warning", w);
  rows.emplace_back("pass", pass ? "true" : "false");
  if (include_timing) rows.emplace_back("wall_seconds", fmt::format("{:.6f}", wall_seconds));

  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::string out;
  for (const auto& [key, value] : rows) out += fmt::format("{:<{}}  {}\n", key, width, value);
  return out;
}

}  // namespace idemrdm

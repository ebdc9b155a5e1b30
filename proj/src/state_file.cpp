// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/state_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace idemrdm::io {

using json = nlohmann::json;

SchemaError::SchemaError(std::string field, std::size_t line, std::string reason)
    : Error(field + (line ? " (line " + std::to_string(line) + ")" : std::string{}) + ": " + reason),
      field_(std::move(field)),
      line_(line),
      reason_(std::move(reason)) {}

namespace {

// Maps JSON pointer paths ("/terms/1/orbitals") to the line where each value
// starts. Assumes the text already parsed as valid JSON.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {
    skip_ws();
    if (pos_ < text_.size()) value("");
  }

  std::size_t line_of(const std::string& pointer) const {
    auto it = lines_.find(pointer);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& path) {
    lines_[path] = line_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(path + "/" + key);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      std::size_t index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(path + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string();
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}' &&
             !std::isspace(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

struct Context {
  const LineIndex& lines;

  [[noreturn]] void fail(const std::string& pointer, const std::string& reason) const {
    throw SchemaError(pointer.empty() ? "/" : pointer, lines.line_of(pointer), reason);
  }

  const json& member(const json& object, const std::string& pointer, const std::string& key) const {
    if (!object.is_object()) fail(pointer, "expected an object");
    auto it = object.find(key);
    if (it == object.end()) fail(pointer + "/" + key, "missing required field");
    return *it;
  }

  double number(const json& v, const std::string& pointer) const {
    if (!v.is_number()) fail(pointer, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(pointer, "number is not finite");
    return d;
  }

  int orbital_id(const json& v, const std::string& pointer, std::size_t dim) const {
    if (!v.is_number_integer()) fail(pointer, "orbital id must be an integer");
    const auto id = v.get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= dim)
      fail(pointer, "orbital id " + std::to_string(id) + " out of range for dim " + std::to_string(dim));
    return static_cast<int>(id);
  }

  Complex complex(const json& v, const std::string& pointer) const {
    if (!v.is_array() || v.size() != 2) fail(pointer, "expected [re, im]");
    return {number(v[0], pointer + "/0"), number(v[1], pointer + "/1")};
  }

  Statistics statistics(const json& v, const std::string& pointer) const {
    if (v == "fermion") return Statistics::Fermion;
    if (v == "boson") return Statistics::Boson;
    fail(pointer, "statistics must be \"boson\" or \"fermion\"");
  }

  std::size_t dimension(const json& v, const std::string& pointer) const {
    if (!v.is_number_integer() || v.get<long long>() < 1) fail(pointer, "dim must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
  }
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(),
                                                              text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    throw SchemaError("/", line, "invalid JSON");
  }
}

std::vector<Term> parse_terms(const Context& ctx, const json& terms, const std::string& pointer, Statistics stats,
                              std::size_t dim) {
  if (!terms.is_array()) ctx.fail(pointer, "terms must be an array");
  if (terms.empty()) ctx.fail(pointer, "no terms");
  std::vector<Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = pointer + "/" + std::to_string(i);
    Term term;
    term.amplitude = ctx.complex(ctx.member(terms[i], tp, "amplitude"), tp + "/amplitude");
    const json& orbs = ctx.member(terms[i], tp, "orbitals");
    if (!orbs.is_array()) ctx.fail(tp + "/orbitals", "orbitals must be an array");
    for (std::size_t k = 0; k < orbs.size(); ++k)
      term.orbitals.push_back(ctx.orbital_id(orbs[k], tp + "/orbitals/" + std::to_string(k), dim));
    if (stats == Statistics::Fermion) {
      auto sorted = term.orbitals;
      std::sort(sorted.begin(), sorted.end());
      auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      if (dup != sorted.end())
        ctx.fail(tp + "/orbitals", "duplicate orbital " + std::to_string(*dup) + " in a fermion term");
    }
    out.push_back(std::move(term));
  }
  return out;
}

std::vector<int> parse_mode(const Context& ctx, const json& modes, const std::string& key, std::size_t dim) {
  const std::string pointer = "/modes/" + key;
  const json& list = ctx.member(modes, "/modes", key);
  if (!list.is_array()) ctx.fail(pointer, "mode list must be an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < list.size(); ++i)
    out.push_back(ctx.orbital_id(list[i], pointer + "/" + std::to_string(i), dim));
  return out;
}

GradedVector component_vector(const StateFile& file, const Component& c) {
  GradedVector v(file.statistics, file.space());
  for (const auto& t : c.terms) v = v + GradedVector::basis_state(file.statistics, file.space(), t.orbitals, t.amplitude);
  return v;
}

}  // namespace

StateFile parse_state_text(const std::string& text) {
  const json doc = parse_json(text);
  const LineIndex lines(text);
  const Context ctx{lines};
  if (!doc.is_object()) ctx.fail("", "top level must be an object");

  StateFile file;
  file.statistics = ctx.statistics(ctx.member(doc, "", "statistics"), "/statistics");
  file.dim = ctx.dimension(ctx.member(doc, "", "dim"), "/dim");

  const json& modes = ctx.member(doc, "", "modes");
  file.left = parse_mode(ctx, modes, "L", file.dim);
  file.right = parse_mode(ctx, modes, "R", file.dim);
  {
    std::set<int> seen;
    for (int o : file.left)
      if (!seen.insert(o).second) ctx.fail("/modes/L", "orbital " + std::to_string(o) + " listed twice");
    for (int o : file.right)
      if (!seen.insert(o).second) ctx.fail("/modes/R", "orbital " + std::to_string(o) + " appears in both L and R");
    if (seen.size() != file.dim) ctx.fail("/modes", "L and R must together cover every orbital 0..dim-1");
  }

  const bool has_terms = doc.contains("terms");
  const bool has_mixture = doc.contains("mixture");
  if (has_terms && has_mixture) ctx.fail("/mixture", "give either terms or mixture, not both");
  if (!has_terms && !has_mixture) ctx.fail("/terms", "no terms");

  if (has_terms) {
    file.components.push_back({1.0, parse_terms(ctx, doc["terms"], "/terms", file.statistics, file.dim)});
  } else {
    const json& mixture = doc["mixture"];
    if (!mixture.is_array() || mixture.empty()) ctx.fail("/mixture", "mixture must be a non-empty array");
    double total = 0.0;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
      const std::string mp = "/mixture/" + std::to_string(i);
      const double w = ctx.number(ctx.member(mixture[i], mp, "weight"), mp + "/weight");
      if (!(w > 0.0)) ctx.fail(mp + "/weight", "weights must be positive");
      total += w;
      file.components.push_back(
          {w, parse_terms(ctx, ctx.member(mixture[i], mp, "terms"), mp + "/terms", file.statistics, file.dim)});
    }
    if (std::abs(total - 1.0) > 1e-9) ctx.fail("/mixture", "weights sum to " + std::to_string(total) + ", not 1");
  }

  for (std::size_t i = 0; i < file.components.size(); ++i) {
    const double norm = component_vector(file, file.components[i]).norm();
    const std::string where = has_terms ? "/terms" : "/mixture/" + std::to_string(i) + "/terms";
    if (norm == 0.0) ctx.fail(where, "state has zero norm");
    file.input_norms.push_back(norm);
    if (std::abs(norm - 1.0) > 1e-6)
      file.warnings.push_back(where + ": norm " + std::to_string(norm) + " differs from 1; state was normalized");
  }
  return file;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

StateFile parse_state_file(const std::filesystem::path& path) { return parse_state_text(read_file(path)); }

Bipartition StateFile::bipartition() const {
  return Bipartition(space(), std::set<int>(left.begin(), left.end()), std::set<int>(right.begin(), right.end()));
}

std::vector<MixtureComponent> StateFile::mixture() const {
  std::vector<MixtureComponent> out;
  for (const auto& c : components) out.push_back({c.weight, component_vector(*this, c).normalized()});
  return out;
}

OrbitalListFile parse_orbital_list_text(const std::string& text) {
  const json doc = parse_json(text);
  const LineIndex lines(text);
  const Context ctx{lines};
  if (!doc.is_object()) ctx.fail("", "top level must be an object");
  OrbitalListFile file;
  file.statistics = ctx.statistics(ctx.member(doc, "", "statistics"), "/statistics");
  file.dim = ctx.dimension(ctx.member(doc, "", "dim"), "/dim");
  const json& orbs = ctx.member(doc, "", "orbitals");
  if (!orbs.is_array() || orbs.empty()) ctx.fail("/orbitals", "orbitals must be a non-empty array");
  for (std::size_t i = 0; i < orbs.size(); ++i) {
    const std::string p = "/orbitals/" + std::to_string(i);
    if (orbs[i].is_number_integer()) {
      file.orbitals.push_back(Orbital::basis(file.dim, static_cast<std::size_t>(ctx.orbital_id(orbs[i], p, file.dim))));
      continue;
    }
    if (!orbs[i].is_array() || orbs[i].size() != file.dim)
      ctx.fail(p, "orbital must be a basis index or a list of dim [re, im] pairs");
    std::vector<Complex> amps;
    for (std::size_t k = 0; k < orbs[i].size(); ++k) amps.push_back(ctx.complex(orbs[i][k], p + "/" + std::to_string(k)));
    file.orbitals.emplace_back(std::move(amps));
  }
  return file;
}

OrbitalListFile parse_orbital_list_file(const std::filesystem::path& path) {
  return parse_orbital_list_text(read_file(path));
}

std::string state_to_json(const StateFile& state) {
  auto terms_json = [](const std::vector<Term>& terms) {
    json out = json::array();
    for (const auto& t : terms)
      out.push_back({{"amplitude", {t.amplitude.real(), t.amplitude.imag()}}, {"orbitals", t.orbitals}});
    return out;
  };
  json doc;
  doc["statistics"] = to_string(state.statistics);
  doc["dim"] = state.dim;
  doc["modes"] = {{"L", state.left}, {"R", state.right}};
  if (state.components.size() == 1 && state.components.front().weight == 1.0) {
    doc["terms"] = terms_json(state.components.front().terms);
  } else {
    json mixture = json::array();
    for (const auto& c : state.components) mixture.push_back({{"weight", c.weight}, {"terms", terms_json(c.terms)}});
    doc["mixture"] = mixture;
  }
  return doc.dump(2);
}

}  // namespace idemrdm::io

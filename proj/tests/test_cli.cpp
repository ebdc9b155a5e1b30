// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "idemrdm/cli.hpp"
#include "idemrdm/state_file.hpp"

using namespace idemrdm;

namespace {

const std::string kFixtures = IDEMRDM_FIXTURES;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const auto result = cli::run_command(args, out, err);
  return {result.exit_code, out.str(), err.str()};
}

std::string state_with_terms(const std::string& terms, const std::string& modes = R"({"L": [0, 1], "R": [2, 3]})") {
  return R"({
  "statistics": "fermion",
  "dim": 4,
  "modes": )" + modes + R"(,
  "terms": )" + terms + "\n}";
}

}  // namespace

TEST_CASE("three-fermion fixture parses") {
  const auto f = io::parse_state_file(fixture("three_fermion.json"));
  CHECK(f.statistics == Statistics::Fermion);
  CHECK(f.dim == 8);
  REQUIRE(f.components.size() == 1);
  CHECK(f.components[0].terms.size() == 2);
  CHECK(std::abs(f.input_norms[0] - 1.0) < 1e-15);
  CHECK(f.warnings.empty());
  CHECK(std::abs(f.mixture()[0].state.norm() - 1.0) < 1e-15);
}

TEST_CASE("state file schema errors") {
  try {
    io::parse_state_text(state_with_terms("[]"));
    FAIL("expected an error");
  } catch (const io::SchemaError& e) {
    CHECK(e.reason() == "no terms");
    CHECK(e.field() == "/terms");
    CHECK(e.line() == 5);
  }
  try {
    io::parse_state_text(state_with_terms(R"([
    {"amplitude": [1, 0], "orbitals": [0, 0, 2]}
  ])"));
    FAIL("expected an error");
  } catch (const io::SchemaError& e) {
    CHECK(e.reason().find("duplicate orbital") != std::string::npos);
    CHECK(e.line() == 6);
  }
  const std::string term = R"([{"amplitude": [1, 0], "orbitals": [0, 2]}])";
  CHECK_THROWS_AS(io::parse_state_text(state_with_terms(term, R"({"L": [0, 1], "R": [1, 2, 3]})")), io::SchemaError);
  CHECK_THROWS_AS(io::parse_state_text(state_with_terms(term, R"({"L": [0], "R": [2, 3]})")), io::SchemaError);
  CHECK_THROWS_AS(io::parse_state_text(state_with_terms(R"([{"amplitude": [1, 0], "orbitals": [9]}])")),
                  io::SchemaError);
  CHECK_THROWS_AS(io::parse_state_text(state_with_terms(R"([{"amplitude": "1", "orbitals": [0]}])")),
                  io::SchemaError);
  try {
    io::parse_state_text("{\n  \"statistics\": \"fermion\",\n  \"dim\": ,\n}");
    FAIL("expected an error");
  } catch (const io::SchemaError& e) {
    CHECK(e.reason() == "invalid JSON");
    CHECK(e.line() == 3);
  }
}

TEST_CASE("mixture weights must sum to one") {
  const std::string text = R"({
    "statistics": "boson", "dim": 2, "modes": {"L": [0], "R": [1]},
    "mixture": [
      {"weight": 0.5, "terms": [{"amplitude": [1, 0], "orbitals": [0]}]},
      {"weight": 0.4, "terms": [{"amplitude": [1, 0], "orbitals": [1]}]}
    ]})";
  CHECK_THROWS_AS(io::parse_state_text(text), io::SchemaError);
  const auto ok = io::parse_state_file(fixture("boson_mixture.json"));
  CHECK(ok.components.size() == 2);
}

TEST_CASE("unnormalized input is normalized with a warning") {
  const auto f = io::parse_state_text(state_with_terms(R"([{"amplitude": [2, 0], "orbitals": [0, 2]}])"));
  REQUIRE(f.warnings.size() == 1);
  CHECK(std::abs(f.input_norms[0] - 2.0) < 1e-15);
  CHECK(std::abs(f.mixture()[0].state.norm() - 1.0) < 1e-15);
}

TEST_CASE("state files round-trip through the writer") {
  const auto f = io::parse_state_file(fixture("boson_mixture.json"));
  const auto g = io::parse_state_text(io::state_to_json(f));
  CHECK(g.components.size() == f.components.size());
  CHECK(g.left == f.left);
  CHECK(g.components[1].terms[1].amplitude == f.components[1].terms[1].amplitude);
}

TEST_CASE("entropy of the three-fermion state") {
  const auto r = run({"entropy", fixture("three_fermion.json"), "--trace", "R"});
  CHECK(r.code == 0);
  CHECK(r.out == "1.000000\n");
  const auto j = run({"entropy", fixture("three_fermion.json"), "--trace", "L", "--format", "json"});
  CHECK(std::abs(nlohmann::json::parse(j.out)["entropy"].get<double>() - 1.0) < 1e-9);
}

TEST_CASE("rdm of a product state") {
  const auto r = run({"rdm", fixture("product.json"), "--trace", "R"});
  CHECK(r.code == 0);
  CHECK(r.out.find("{0}") != std::string::npos);
  CHECK(r.out.find("1.00000000") != std::string::npos);

  const auto j = run({"rdm", fixture("product.json"), "--trace", "R", "--format", "json"});
  const auto doc = nlohmann::json::parse(j.out);
  const auto rho = cli::density_matrix_from_json(doc["rho"]);
  REQUIRE(rho.size() == 1);
  CHECK(rho.matrix()(0, 0) == Complex(1.0));
}

TEST_CASE("rdm json output round-trips exactly") {
  const auto f = io::parse_state_file(fixture("boson_mixture.json"));
  for (const char* side : {"L", "R"})
    for (bool ssr : {false, true}) {
      std::vector<std::string> args{"rdm", fixture("boson_mixture.json"), "--trace", side, "--format", "json"};
      if (ssr) args.push_back("--ssr");
      const auto r = run(args);
      REQUIRE(r.code == 0);
      const auto parsed = cli::density_matrix_from_json(nlohmann::json::parse(r.out)["rho"]);
      auto expected = reduced_density_matrix(f.mixture(), f.bipartition(), side[0] == 'L' ? Side::Left : Side::Right);
      if (ssr) expected = ssr_project(expected, Statistics::Boson);
      CHECK(parsed.basis() == expected.basis());
      CHECK(parsed.matrix() == expected.matrix());
    }
}

TEST_CASE("rdm csv lists eigenvalues") {
  const auto r = run({"rdm", fixture("three_fermion.json"), "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("index,eigenvalue\n", 0) == 0);
}

TEST_CASE("verify-gns") {
  const auto r = run({"verify-gns", fixture("three_fermion.json"), "--trials", "100", "--seed", "7", "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["pass"].get<bool>());
  CHECK(doc["trials"].get<int>() == 100);
  CHECK(doc["max_residual"].get<double>() <= 1e-10);
}

TEST_CASE("json reports are deterministic without timing") {
  const std::vector<std::string> args{"verify-equivalence", fixture("boson_mixture.json"), "--random", "10",
                                      "--seed", "3", "--format", "json", "--no-timing"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("wall_seconds") == std::string::npos);
  const auto timed = run({"verify-gns", fixture("product.json"), "--format", "json"});
  CHECK(nlohmann::json::parse(timed.out).contains("timing"));
}

TEST_CASE("verify-equivalence") {
  const auto r = run({"verify-equivalence", fixture("three_fermion.json"), "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["state"]["max_rdm_residual"].get<double>() <= 1e-10);
  CHECK(doc["state"]["max_phased_rdm_residual"].get<double>() <= 1e-10);
  const auto rnd = run({"verify-equivalence", "--random", "25", "--seed", "5", "--max-particles", "3"});
  CHECK(rnd.code == 0);
  CHECK(run({"verify-equivalence"}).code == 2);
}

TEST_CASE("a failed check exits with 1") {
  const auto r = run({"verify-gns", fixture("three_fermion.json"), "--trials", "5", "--tolerance", "-1"});
  CHECK(r.code == 1);
}

TEST_CASE("amplitude") {
  const auto r = run({"amplitude", fixture("bra_bosons.json"), fixture("ket_bosons.json"), "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["amplitude"][0].get<double>() - 1.2) < 1e-12);
  CHECK(std::abs(doc["amplitude"][1].get<double>()) < 1e-12);
}

TEST_CASE("bench-permanent emits csv rows") {
  const auto r = run({"bench-permanent", "--min", "3", "--max", "6", "--reps", "1"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,method,seconds,checksum");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 8);
  CHECK(r.out.find("\n6,ryser,") != std::string::npos);
  CHECK(r.out.find("\n6,naive,") != std::string::npos);
}

TEST_CASE("usage and io errors exit with 2") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"entropy", kFixtures + "/missing.json"}).code == 2);
  CHECK(run({"entropy", fixture("three_fermion.json"), "--trace", "X"}).code == 2);
  CHECK(run({"verify-gns", fixture("three_fermion.json"), "--format", "csv"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("IDEMRDM_THREADS caps the worker count") {
  ::setenv("IDEMRDM_THREADS", "1", 1);
  CHECK(cli::worker_count() == 1);
  ::setenv("IDEMRDM_THREADS", "junk", 1);
  CHECK(cli::worker_count() >= 1);
  ::unsetenv("IDEMRDM_THREADS");
}

// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "idemrdm/entanglement.hpp"
#include "idemrdm/matrix_kernels.hpp"
#include "idemrdm/state_file.hpp"
#include "idemrdm/verification.hpp"

namespace idemrdm::cli {

using ojson = nlohmann::ordered_json;

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IDEMRDM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

ojson density_matrix_to_json(const DensityMatrix& rho) {
  ojson basis = ojson::array();
  for (const auto& s : rho.basis()) basis.push_back(s.orbitals());
  ojson matrix = ojson::array();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < rho.size(); ++j) row.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
    matrix.push_back(std::move(row));
  }
  return {{"statistics", to_string(rho.statistics())}, {"basis", basis}, {"matrix", matrix}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& doc) {
  const std::string s = doc.at("statistics").get<std::string>();
  if (s != "boson" && s != "fermion") throw InvalidArgument("density matrix: unknown statistics " + s);
  const Statistics stats = s == "boson" ? Statistics::Boson : Statistics::Fermion;
  std::vector<OccupationState> basis;
  for (const auto& b : doc.at("basis")) basis.emplace_back(stats, b.get<std::vector<int>>());
  const auto& rows = doc.at("matrix");
  if (rows.size() != basis.size()) throw DimensionMismatch("density matrix: matrix order differs from basis size");
  SquareMatrix m(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (rows[i].size() != basis.size()) throw DimensionMismatch("density matrix: ragged row");
    for (std::size_t j = 0; j < basis.size(); ++j)
      m(i, j) = {rows[i][j].at(0).get<double>(), rows[i][j].at(1).get<double>()};
  }
  return DensityMatrix(stats, std::move(basis), std::move(m));
}

namespace {

struct Globals {
  double tolerance = 1e-10;
  std::string format = "text";
  bool no_timing = false;
};

// A handler fills the report; `text` and `csv` override the default renderings.
struct Output {
  Report report;
  std::string text;
  std::string csv;
};

Side parse_side(const std::string& s) { return s == "L" ? Side::Left : Side::Right; }

std::string complex_text(Complex z) {
  if (std::abs(z.imag()) < 5e-13) return fmt::format("{:.8f}", z.real());
  return fmt::format("{:.8f}{:+.8f}i", z.real(), z.imag());
}

std::string eigenvalue_csv(const std::vector<double>& values) {
  std::string out = "index,eigenvalue\n";
  for (std::size_t i = 0; i < values.size(); ++i) out += fmt::format("{},{:.17g}\n", i, values[i]);
  return out;
}

struct LoadedState {
  io::StateFile file;
  std::string contents;
  std::vector<MixtureComponent> mixture;
};

LoadedState load_state(const std::string& path, Report& report) {
  LoadedState s;
  s.contents = io::read_file(path);
  s.file = io::parse_state_text(s.contents);
  s.mixture = s.file.mixture();
  report.inputs_digest = inputs_digest({s.contents});
  report.warnings = s.file.warnings;
  return s;
}

Output amplitude_command(const std::string& bra_path, const std::string& ket_path, const Globals& g) {
  Output o;
  const std::string bra_text = io::read_file(bra_path);
  const std::string ket_text = io::read_file(ket_path);
  o.report.inputs_digest = inputs_digest({bra_text, ket_text});
  const auto bra = io::parse_orbital_list_text(bra_text);
  const auto ket = io::parse_orbital_list_text(ket_text);
  if (bra.statistics != ket.statistics) throw InvalidArgument("bra and ket have different statistics");
  if (bra.dim != ket.dim) throw DimensionMismatch("bra and ket have different dim");

  auto& r = o.report.results;
  r["statistics"] = to_string(bra.statistics);
  r["bra_particles"] = bra.orbitals.size();
  r["ket_particles"] = ket.orbitals.size();
  if (bra.orbitals.size() != ket.orbitals.size()) {
    // Different particle numbers lie in orthogonal grades.
    r["amplitude"] = {0.0, 0.0};
    r["abs"] = 0.0;
    return o;
  }
  const Complex a = transition_amplitude(bra.orbitals, ket.orbitals, bra.statistics);
  r["amplitude"] = {a.real(), a.imag()};
  r["abs"] = std::abs(a);

  // Occupation-basis expansion is exponential; only cross-check small cases.
  const double expansion = std::pow(static_cast<double>(bra.dim), static_cast<double>(bra.orbitals.size()));
  if (expansion <= 1e5) {
    const Complex b = inner_product(from_orbitals(bra.orbitals, bra.statistics), from_orbitals(ket.orbitals, ket.statistics));
    const double residual = scaled_residual(a, b);
    r["cross_check_residual"] = residual;
    o.report.pass = residual <= g.tolerance;
  } else {
    r["cross_check_residual"] = "skipped";
  }
  return o;
}

Output rdm_command(const std::string& path, const std::string& trace, bool ssr, const Globals& g) {
  Output o;
  const auto s = load_state(path, o.report);
  const Side traced = parse_side(trace);
  DensityMatrix rho = reduced_density_matrix(s.mixture, s.file.bipartition(), traced);
  if (ssr) rho = ssr_project(rho, rho.statistics());
  const auto eig = rho.eigenvalues();
  const bool valid = rho.is_valid(1e-12, g.tolerance, g.tolerance);

  auto& r = o.report.results;
  r["traced"] = trace;
  r["kept"] = to_string(opposite(traced));
  r["ssr"] = ssr;
  r["rho"] = density_matrix_to_json(rho);
  r["trace"] = {rho.trace().real(), rho.trace().imag()};
  r["eigenvalues"] = eig;
  r["valid"] = valid;
  o.report.pass = valid;

  std::vector<std::string> labels;
  std::size_t width = 5;
  for (const auto& b : rho.basis()) {
    labels.push_back(b.label());
    width = std::max(width, labels.back().size());
  }
  std::vector<std::vector<std::string>> cells(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i)
    for (std::size_t j = 0; j < rho.size(); ++j) {
      cells[i].push_back(complex_text(rho.matrix()(i, j)));
      width = std::max(width, cells[i].back().size());
    }
  std::string& t = o.text;
  t += fmt::format("rho_{} ({}, traced {}, {} basis state{}{})\n", to_string(opposite(traced)),
                   to_string(rho.statistics()), trace, rho.size(), rho.size() == 1 ? "" : "s", ssr ? ", ssr" : "");
  t += fmt::format("{:<{}}", "", width);
  for (const auto& l : labels) t += fmt::format("  {:>{}}", l, width);
  t += "\n";
  for (std::size_t i = 0; i < rho.size(); ++i) {
    t += fmt::format("{:<{}}", labels[i], width);
    for (const auto& c : cells[i]) t += fmt::format("  {:>{}}", c, width);
    t += "\n";
  }
  t += fmt::format("trace        {}\n", complex_text(rho.trace()));
  t += "eigenvalues ";
  for (double e : eig) t += fmt::format(" {:.10f}", e);
  t += fmt::format("\nvalid        {}\n", valid ? "true" : "false");
  o.csv = eigenvalue_csv(eig);
  return o;
}

Output entropy_command(const std::string& path, const std::string& trace, const Globals& g) {
  Output o;
  const auto s = load_state(path, o.report);
  const DensityMatrix rho = reduced_density_matrix(s.mixture, s.file.bipartition(), parse_side(trace));
  const double entropy = von_neumann_entropy(rho);
  const auto eig = rho.eigenvalues();
  auto& r = o.report.results;
  r["traced"] = trace;
  r["entropy"] = entropy;
  r["eigenvalues"] = eig;
  o.report.pass = rho.is_valid(1e-12, g.tolerance, g.tolerance);
  o.text = fmt::format("{:.6f}\n", entropy);
  o.csv = eigenvalue_csv(eig);
  return o;
}

struct EquivalenceTally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  double rdm = 0.0, phased = 0.0, spectrum = 0.0, entropy = 0.0;
  bool all_valid = true;

  void add(const EquivalenceResult& e, double tol) {
    ++checks;
    if (!e.pass(tol)) ++failures;
    rdm = std::max(rdm, e.rdm_residual);
    phased = std::max(phased, e.phased_rdm_residual);
    spectrum = std::max(spectrum, e.spectrum_residual);
    entropy = std::max(entropy, e.entropy_asymmetry);
    all_valid = all_valid && e.all_valid;
  }
  void merge(const EquivalenceTally& t) {
    checks += t.checks;
    failures += t.failures;
    rdm = std::max(rdm, t.rdm);
    phased = std::max(phased, t.phased);
    spectrum = std::max(spectrum, t.spectrum);
    entropy = std::max(entropy, t.entropy);
    all_valid = all_valid && t.all_valid;
  }
  ojson json() const {
    return {{"checks", checks},          {"failures", failures},          {"max_rdm_residual", rdm},
            {"max_phased_rdm_residual", phased}, {"max_spectrum_residual", spectrum},
            {"max_entropy_asymmetry", entropy},  {"all_valid", all_valid}};
  }
};

Output verify_equivalence_command(const std::string& path, std::size_t random, std::uint64_t seed,
                                  std::size_t max_particles, std::size_t max_dim, std::size_t phase_trials,
                                  const Globals& g) {
  if (path.empty() && random == 0) throw InvalidArgument("verify-equivalence needs STATE.json or --random N");
  Output o;
  auto& r = o.report.results;
  r["tolerance"] = g.tolerance;
  r["seed"] = seed;
  if (!path.empty()) {
    const auto s = load_state(path, o.report);
    const DualState dual = dual_from_mixture(s.mixture);
    std::size_t slots = 0;
    for (const auto& c : dual.dense) slots = std::max(slots, c.state.slots());
    EquivalenceTally tally;
    for (std::size_t t = 0; t < phase_trials; ++t) {
      std::mt19937_64 rng(derive_seed(seed, t));
      const auto phases = fq::PhaseAssignment::random(slots, rng);
      tally.add(check_equivalence(s.file.bipartition(), dual, phases, s.mixture.size() == 1), g.tolerance);
    }
    r["state"] = tally.json();
    o.report.pass = o.report.pass && tally.failures == 0;
  }
  if (random > 0) {
    const RandomInstanceOptions options{max_particles, max_dim, true};
    const std::size_t workers = std::min(worker_count(), random);
    std::vector<EquivalenceTally> partial(workers);
    std::vector<std::string> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < random; i += workers)
            partial[w].add(check_equivalence(random_instance(derive_seed(seed, i), options)), g.tolerance);
        } catch (const std::exception& e) {
          errors[w] = e.what();
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (!e.empty()) throw Error("random instance failed: " + e);
    EquivalenceTally tally;
    for (const auto& p : partial) tally.merge(p);
    ojson j = tally.json();
    j["instances"] = random;
    j["max_particles"] = max_particles;
    j["max_dim"] = max_dim;
    r["random"] = j;
    o.report.pass = o.report.pass && tally.failures == 0;
  }
  return o;
}

Output verify_gns_command(const std::string& path, std::size_t trials, std::uint64_t seed, const Globals& g) {
  Output o;
  const auto s = load_state(path, o.report);
  const GnsReport gns = gns_restriction_check(s.mixture, s.file.bipartition(), trials, seed, g.tolerance);
  auto& r = o.report.results;
  r["max_residual"] = gns.max_residual;
  r["trials"] = gns.trials;
  r["identity_residual"] = gns.identity_residual;
  r["control_residual"] = gns.control_residual;
  o.report.pass = gns.pass;
  return o;
}

SquareMatrix bench_matrix(std::size_t n) {
  std::mt19937_64 rng(derive_seed(0x9e3779b9ULL, n));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = u(rng);
      m(i, j) = {re, u(rng)};
    }
  return m;
}

Output bench_permanent_command(std::size_t min_n, std::size_t max_n, std::size_t reps, const std::string& method,
                               std::size_t naive_max, const Globals& g) {
  if (min_n < 1 || min_n > max_n) throw InvalidArgument("bench-permanent: need 1 <= --min <= --max");
  if (reps < 1) throw InvalidArgument("bench-permanent: --reps must be >= 1");
  Output o;
  const RyserOptions options{worker_count()};
  ojson rows = ojson::array();
  o.csv = "n,method,seconds,checksum\n";
  std::vector<std::pair<std::size_t, double>> ryser_times;
  bool agree = true;
  for (std::size_t n = min_n; n <= max_n; ++n) {
    const SquareMatrix a = bench_matrix(n);
    std::optional<Complex> ryser_value;
    auto run = [&](const std::string& name, auto&& kernel) {
      double best = INFINITY;
      Complex value;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        value = kernel(a);
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      const std::string checksum = fmt::format("{:.12e}", std::abs(value));
      o.csv += fmt::format("{},{},{:.9f},{}\n", n, name, best, checksum);
      rows.push_back({{"n", n}, {"method", name}, {"seconds", best}, {"checksum", checksum}});
      return std::pair{value, best};
    };
    if (method != "naive") {
      auto [v, t] = run("ryser", [&](const SquareMatrix& m) { return permanent_ryser(m, options); });
      ryser_value = v;
      ryser_times.emplace_back(n, t);
    }
    if (method != "ryser" && n <= naive_max) {
      auto [v, t] = run("naive", [](const SquareMatrix& m) { return permanent_naive(m); });
      (void)t;
      if (ryser_value && scaled_residual(*ryser_value, v) > g.tolerance) agree = false;
    }
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ryser_times.size(); ++i)
    if (ryser_times[i - 1].first >= 14 && !(ryser_times[i].second > ryser_times[i - 1].second)) monotone = false;
  auto& r = o.report.results;
  r["rows"] = rows;
  r["workers"] = options.workers;
  r["ryser_matches_naive"] = agree;
  r["monotone_from_14"] = monotone;
  o.report.pass = agree;
  o.text = o.csv;
  return o;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "idemrdm";
  for (const auto& a : args) out += " " + a;
  return out;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced density matrices and entanglement of identical-particle states", "idemrdm"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tolerance", g.tolerance, "Tolerance for every pass/fail check")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_flag("--no-timing", g.no_timing, "Omit wall-clock time from the report");

  std::string path, path2, trace = "R", method = "both";
  bool ssr = false;
  std::size_t random = 0, max_particles = 4, max_dim = 8, phase_trials = 8, trials = 100;
  std::size_t min_n = 4, max_n = 22, reps = 3, naive_max = 9;
  std::uint64_t seed = 0;

  auto* amp = app.add_subcommand("amplitude", "Transition amplitude between two orbital-list files");
  amp->add_option("BRA", path, "Bra orbital list")->required()->check(CLI::ExistingFile);
  amp->add_option("KET", path2, "Ket orbital list")->required()->check(CLI::ExistingFile);

  auto* rdm = app.add_subcommand("rdm", "Reduced density matrix");
  rdm->add_option("STATE", path, "State file")->required()->check(CLI::ExistingFile);
  rdm->add_option("--trace", trace, "Side to trace out")->check(CLI::IsMember({"L", "R"}))->capture_default_str();
  rdm->add_flag("--ssr", ssr, "Project onto superselection sectors");

  auto* ent = app.add_subcommand("entropy", "Von Neumann entropy of the reduced state");
  ent->add_option("STATE", path, "State file")->required()->check(CLI::ExistingFile);
  ent->add_option("--trace", trace, "Side to trace out")->check(CLI::IsMember({"L", "R"}))->capture_default_str();

  auto* eq = app.add_subcommand("verify-equivalence", "Compare the oracle and occupation-basis reduced states");
  eq->add_option("STATE", path, "State file")->check(CLI::ExistingFile);
  eq->add_option("--random", random, "Number of random instances");
  eq->add_option("--seed", seed, "Seed")->capture_default_str();
  eq->add_option("--max-particles", max_particles, "Particle cap for random instances")->capture_default_str();
  eq->add_option("--max-dim", max_dim, "Mode cap for random instances")->capture_default_str();
  eq->add_option("--phase-trials", phase_trials, "Random phase assignments per state")->capture_default_str();

  auto* gns = app.add_subcommand("verify-gns", "Restriction check with random local observables");
  gns->add_option("STATE", path, "State file")->required()->check(CLI::ExistingFile);
  gns->add_option("--trials", trials, "Observables to draw")->capture_default_str();
  gns->add_option("--seed", seed, "Seed")->capture_default_str();

  auto* bench = app.add_subcommand("bench-permanent", "Time permanent kernels, CSV rows n,method,seconds,checksum");
  bench->add_option("--min", min_n, "Smallest order")->capture_default_str();
  bench->add_option("--max", max_n, "Largest order")->capture_default_str();
  bench->add_option("--reps", reps, "Repetitions per order; the best time is kept")->capture_default_str();
  bench->add_option("--method", method, "Kernel")->check(CLI::IsMember({"ryser", "naive", "both"}))
      ->capture_default_str();
  bench->add_option("--naive-max", naive_max, "Largest order for the naive kernel")->capture_default_str();

  std::vector<std::string> argv_storage{"idemrdm"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {code == 0 ? kPass : kUsageError, std::nullopt};
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Output o;
    if (amp->parsed())
      o = amplitude_command(path, path2, g);
    else if (rdm->parsed())
      o = rdm_command(path, trace, ssr, g);
    else if (ent->parsed())
      o = entropy_command(path, trace, g);
    else if (eq->parsed())
      o = verify_equivalence_command(path, random, seed, max_particles, max_dim, phase_trials, g);
    else if (gns->parsed())
      o = verify_gns_command(path, trials, seed, g);
    else
      o = bench_permanent_command(min_n, max_n, reps, method, naive_max, g);
    o.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.report.command = join_args(args);
    if (o.report.inputs_digest.empty()) o.report.inputs_digest = inputs_digest({});

    for (const auto& w : o.report.warnings) err << "warning: " << w << "\n";
    if (g.format == "json") {
      out << o.report.to_json(!g.no_timing);
    } else if (g.format == "csv") {
      if (o.csv.empty()) {
        err << "error: --format csv is only available for bench-permanent, rdm and entropy\n";
        return {kUsageError, std::move(o.report)};
      }
      out << o.csv;
    } else {
      out << (o.text.empty() ? o.report.to_text(!g.no_timing) : o.text);
    }
    const int code = o.report.pass ? kPass : kVerificationFailure;
    return {code, std::move(o.report)};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {kUsageError, std::nullopt};
  }
}

}  // namespace idemrdm::cli

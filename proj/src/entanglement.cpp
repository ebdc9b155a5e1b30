// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "idemrdm/labeled_tensor.hpp"

namespace idemrdm {

void validate_mixture(std::span<const MixtureComponent> mixture, double norm_tol) {
  if (mixture.empty()) throw InvalidArgument("mixture has no components");
  double total = 0.0;
  for (const auto& c : mixture) {
    if (!(c.weight > 0.0)) throw InvalidArgument("mixture weights must be positive");
    if (std::abs(c.state.norm() - 1.0) > norm_tol)
      throw InvalidArgument("state is not normalized (norm " + std::to_string(c.state.norm()) + ")");
    require_compatible(mixture.front().state, c.state);
    total += c.weight;
  }
  if (std::abs(total - 1.0) > norm_tol) throw InvalidArgument("mixture weights do not sum to 1");
}

DensityMatrix reduced_density_matrix(std::span<const MixtureComponent> mixture, const Bipartition& partition,
                                     Side traced) {
  validate_mixture(mixture);
  const Statistics stats = mixture.front().state.statistics();
  if (partition.dim() != mixture.front().state.space().dim())
    throw DimensionMismatch("reduced_density_matrix: bipartition does not match the state's space");

  std::map<OccupationState, std::size_t> index;
  std::vector<OccupationState> labels;
  std::vector<std::pair<double, std::vector<std::pair<std::size_t, Complex>>>> blocks;

  for (const auto& component : mixture) {
    // c(kept, traced) grouped by the traced factor.
    std::map<OccupationState, std::vector<std::pair<std::size_t, Complex>>> by_traced;
    for (const auto& [state, amp] : component.state.terms()) {
      const SplitState s = split(state, partition, stats);
      const OccupationState& kept = traced == Side::Right ? s.left : s.right;
      const OccupationState& gone = traced == Side::Right ? s.right : s.left;
      auto [it, inserted] = index.emplace(kept, labels.size());
      if (inserted) labels.push_back(kept);
      by_traced[gone].emplace_back(it->second, static_cast<double>(s.sign) * amp);
    }
    for (auto& [gone, coeffs] : by_traced) blocks.emplace_back(component.weight, std::move(coeffs));
  }

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<std::size_t> position(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  SquareMatrix rho(labels.size());
  for (const auto& [weight, coeffs] : blocks)
    for (const auto& [i, ci] : coeffs)
      for (const auto& [j, cj] : coeffs) rho(position[i], position[j]) += weight * ci * std::conj(cj);

  std::vector<OccupationState> basis(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) basis[position[i]] = labels[i];
  return DensityMatrix(stats, std::move(basis), std::move(rho));
}

DensityMatrix reduced_density_matrix(const GradedVector& state, const Bipartition& partition, Side traced) {
  const MixtureComponent pure{1.0, state};
  return reduced_density_matrix(std::span<const MixtureComponent>(&pure, 1), partition, traced);
}

DensityMatrix ssr_project(const DensityMatrix& rho, Statistics stats) {
  auto sector = [stats](std::size_t grade) { return stats == Statistics::Boson ? grade : grade % 2; };
  SquareMatrix out(rho.matrix());
  for (std::size_t i = 0; i < rho.size(); ++i)
    for (std::size_t j = 0; j < rho.size(); ++j)
      if (sector(rho.grade(i)) != sector(rho.grade(j))) out(i, j) = 0.0;
  return DensityMatrix(rho.statistics(), rho.basis(), std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double entropy = 0.0;
  for (double lambda : rho.eigenvalues()) {
    if (lambda < -1e-8)
      throw InvalidArgument("von_neumann_entropy: eigenvalue " + std::to_string(lambda) + " is not a valid density");
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

// ---------------------------------------------------------------------------
// Local observables

LocalObservable::LocalObservable(Side side, std::vector<OccupationState> basis, SquareMatrix matrix)
    : side_(side), basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (basis_.size() != matrix_.order()) throw DimensionMismatch("local observable: basis and matrix disagree");
  hermitian_ = matrix_.is_hermitian(1e-12);
}

LocalObservable LocalObservable::identity(Side side, const Bipartition& partition, std::size_t max_grade,
                                          Statistics stats) {
  std::vector<OccupationState> basis;
  for (std::size_t g = 0; g <= max_grade; ++g)
    for (auto& s : enumerate_occupations(partition.orbitals(side), g, stats)) basis.push_back(std::move(s));
  const std::size_t n = basis.size();
  return LocalObservable(side, std::move(basis), SquareMatrix::identity(n));
}

LocalObservable LocalObservable::random_hermitian(Side side, std::vector<OccupationState> basis,
                                                  std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = basis.size();
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(i, j) = Complex{re, im};
    }
  SquareMatrix h = (m + m.adjoint()) * Complex{0.5};
  return LocalObservable(side, std::move(basis), std::move(h));
}

LocalObservable LocalObservable::projector(Side side, const OccupationState& state) {
  return LocalObservable(side, {state}, SquareMatrix::identity(1));
}

std::optional<std::size_t> LocalObservable::index_of(const OccupationState& state) const {
  auto it = std::find(basis_.begin(), basis_.end(), state);
  if (it == basis_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - basis_.begin());
}

Complex trace_product(const DensityMatrix& rho, const LocalObservable& observable) {
  Complex sum{};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto ki = observable.index_of(rho.basis()[i]);
    if (!ki) continue;
    for (std::size_t j = 0; j < rho.size(); ++j) {
      const auto kj = observable.index_of(rho.basis()[j]);
      if (!kj) continue;
      sum += rho.matrix()(i, j) * observable.matrix()(*kj, *ki);
    }
  }
  return sum;
}

LiftedObservable::LiftedObservable(LocalObservable local, Bipartition partition, SingleParticleSpace space,
                                   Statistics stats)
    : local_(std::move(local)), partition_(std::move(partition)), space_(space), stats_(stats) {
  if (partition_.dim() != space_.dim()) throw DimensionMismatch("lift_observable: bipartition does not match space");
  for (const auto& s : local_.basis())
    for (int o : s.orbitals())
      if (partition_.side_of(o) != local_.side())
        throw InvalidArgument("lift_observable: observable basis state " + s.label() + " leaves its subsystem");
}

GradedVector LiftedObservable::apply(const GradedVector& v) const {
  if (v.space() != space_ || v.statistics() != stats_)
    throw DimensionMismatch("lifted observable applied to a vector from another space");
  const Side side = local_.side();
  const SquareMatrix& k = local_.matrix();
  GradedVector::Terms out;
  for (const auto& [state, amp] : v.terms()) {
    const SplitState s = split(state, partition_, stats_);
    const OccupationState& local = side == Side::Left ? s.left : s.right;
    const auto col = local_.index_of(local);
    if (!col) continue;
    for (std::size_t row = 0; row < k.order(); ++row) {
      const Complex kr = k(row, *col);
      if (kr == Complex{}) continue;
      const OccupationState& image = local_.basis()[row];
      const auto [joined, sign] = side == Side::Left ? join(image, s.right, stats_) : join(s.left, image, stats_);
      if (sign == 0) continue;
      out[joined] += amp * kr * static_cast<double>(s.sign * sign);
    }
  }
  return GradedVector(stats_, space_, std::move(out));
}

Complex LiftedObservable::expectation(std::span<const MixtureComponent> mixture) const {
  if (!local_.hermitian()) throw InvalidArgument("expectation value requested for a non-Hermitian observable");
  Complex sum{};
  for (const auto& c : mixture) sum += c.weight * inner_product(c.state, apply(c.state));
  return sum;
}

SquareMatrix LiftedObservable::matrix_on(const std::vector<OccupationState>& basis) const {
  SquareMatrix out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    GradedVector::Terms t;
    t.emplace(basis[j], 1.0);
    const GradedVector image = apply(GradedVector(stats_, space_, std::move(t)));
    for (std::size_t i = 0; i < basis.size(); ++i) out(i, j) = image.amplitude(basis[i]);
  }
  return out;
}

LiftedObservable lift_observable(const LocalObservable& observable, const Bipartition& partition,
                                 const SingleParticleSpace& space, Statistics stats) {
  return LiftedObservable(observable, partition, space, stats);
}

// ---------------------------------------------------------------------------
// Restriction check

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Distinguishable two-particle state on H_A (x) H_B with d_A = d_B = dim.
double distinguishable_control(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const SingleParticleSpace space(dim);
  std::vector<Complex> amps(dim * dim);
  for (auto& z : amps) z = Complex{gauss(rng), gauss(rng)};
  fq::LabeledTensor psi(space, 2, std::move(amps));
  psi = psi * Complex{1.0 / psi.norm()};

  SquareMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = Complex{gauss(rng), gauss(rng)};
  const SquareMatrix k = (m + m.adjoint()) * Complex{0.5};

  const SquareMatrix rho_a = fq::partial_trace_slots(psi, {0});
  Complex restricted{};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) restricted += rho_a(i, j) * k(j, i);

  Complex full{};
  const auto a = psi.amplitudes();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t b = 0; b < dim; ++b) full += std::conj(a[i * dim + b]) * k(i, j) * a[j * dim + b];
  return std::abs(restricted - full);
}

}  // namespace

GnsReport gns_restriction_check(std::span<const MixtureComponent> mixture, const Bipartition& partition,
                                std::size_t trials, std::uint64_t seed, double tolerance) {
  if (trials == 0) throw InvalidArgument("gns_restriction_check: trials must be >= 1");
  validate_mixture(mixture);
  const Statistics stats = mixture.front().state.statistics();
  const SingleParticleSpace& space = mixture.front().state.space();
  const DensityMatrix rho_left = reduced_density_matrix(mixture, partition, Side::Right);

  GnsReport report;
  report.trials = trials;

  // Observables also see a few left states outside the support of rho_L.
  std::vector<OccupationState> basis = rho_left.basis();
  std::size_t max_grade = 0;
  for (const auto& s : basis) max_grade = std::max(max_grade, s.grade());
  std::size_t extras = 0;
  for (std::size_t g = 0; g <= max_grade && extras < 4; ++g)
    for (const auto& s : enumerate_occupations(partition.left(), g, stats)) {
      if (extras >= 4) break;
      if (std::find(basis.begin(), basis.end(), s) != basis.end()) continue;
      basis.push_back(s);
      ++extras;
    }

  {
    const LocalObservable identity(Side::Left, basis, SquareMatrix::identity(basis.size()));
    const Complex lhs = trace_product(rho_left, identity);
    const Complex rhs = lift_observable(identity, partition, space, stats).expectation(mixture);
    report.identity_residual = std::max(std::abs(lhs - rhs), std::abs(lhs - Complex{1.0}));
  }

  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    const LocalObservable k = LocalObservable::random_hermitian(Side::Left, basis, rng);
    const Complex lhs = trace_product(rho_left, k);
    const Complex rhs = lift_observable(k, partition, space, stats).expectation(mixture);
    report.max_residual = std::max(report.max_residual, std::abs(lhs - rhs));
  }

  std::mt19937_64 control_rng(derive_seed(seed, trials));
  report.control_residual = distinguishable_control(std::min<std::size_t>(space.dim(), 4), control_rng);

  report.pass = report.max_residual <= tolerance && report.identity_residual <= tolerance &&
                report.control_residual <= tolerance;
  return report;
}

PairRestrictionResult two_particle_restriction(const std::vector<Complex>& coefficients, const SquareMatrix& alpha,
                                               const Bipartition& partition, Statistics stats) {
  const std::vector<int> left(partition.left().begin(), partition.left().end());
  const std::vector<int> right(partition.right().begin(), partition.right().end());
  const std::size_t nl = left.size();
  const std::size_t nr = right.size();
  if (coefficients.size() != nl * nr) throw DimensionMismatch("two_particle_restriction: coefficient shape mismatch");
  if (alpha.order() != nl) throw DimensionMismatch("two_particle_restriction: alpha must be |L| x |L|");

  double norm = 0.0;
  for (const auto& z : coefficients) norm += std::norm(z);
  norm = std::sqrt(norm);
  if (norm == 0.0) throw InvalidArgument("two_particle_restriction: zero coefficients");
  auto c = [&](std::size_t a, std::size_t mu) { return coefficients[a * nr + mu] / norm; };

  const SingleParticleSpace space(partition.dim());
  GradedVector psi(stats, space);
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t mu = 0; mu < nr; ++mu) {
      const std::vector<Orbital> pair{Orbital::basis(space.dim(), static_cast<std::size_t>(left[a])),
                                      Orbital::basis(space.dim(), static_cast<std::size_t>(right[mu]))};
      psi = psi + from_orbitals(pair, stats) * c(a, mu);
    }

  PairRestrictionResult result{SquareMatrix(nl), 0.0, {}, {}, {}};
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t b = 0; b < nl; ++b) {
      Complex x{};
      for (std::size_t w = 0; w < nr; ++w) x += c(a, w) * std::conj(c(b, w));
      result.overlap_matrix(a, b) = x;
    }
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t b = 0; b < nl; ++b) result.formula += alpha(a, b) * result.overlap_matrix(b, a);

  const DensityMatrix rho_left = reduced_density_matrix(psi, partition, Side::Right);
  std::vector<OccupationState> singles;
  for (int o : left) singles.emplace_back(stats, std::vector<int>{o});
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t b = 0; b < nl; ++b)
      result.rdm_residual =
          std::max(result.rdm_residual, std::abs(rho_left.entry(singles[a], singles[b]) - result.overlap_matrix(a, b)));

  const LocalObservable observable(Side::Left, singles, alpha);
  result.restricted = trace_product(rho_left, observable);
  result.full = inner_product(psi, lift_observable(observable, partition, space, stats).apply(psi));
  return result;
}

}  // namespace idemrdm

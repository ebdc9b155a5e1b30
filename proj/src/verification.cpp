// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace idemrdm {

fq::LabeledTensor to_labeled_tensor(const GradedVector& v) {
  if (v.is_zero()) throw InvalidArgument("to_labeled_tensor: zero vector");
  const auto grades = v.grades();
  if (grades.size() != 1) throw InvalidArgument("to_labeled_tensor: vector mixes particle numbers");
  const std::size_t n = *grades.begin();
  if (n == 0) throw InvalidArgument("to_labeled_tensor: vacuum has no pseudolabels");
  const std::size_t dim = v.space().dim();
  auto out = fq::LabeledTensor::zeros(v.space(), n, v.statistics());
  for (const auto& [state, amp] : v.terms()) {
    std::vector<Orbital> orbitals;
    for (int o : state.orbitals()) orbitals.push_back(Orbital::basis(dim, static_cast<std::size_t>(o)));
    out = out + fq::symmetrize_explicit(orbitals, v.statistics()) * amp;
  }
  return out;
}

DualState dual_from_mixture(const std::vector<MixtureComponent>& mixture) {
  DualState dual;
  for (const auto& c : mixture) {
    dual.sea.push_back(c);
    dual.dense.push_back({c.weight, to_labeled_tensor(c.state)});
  }
  return dual;
}

namespace {

Complex gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// One normalized fixed-N component in both representations.
std::pair<GradedVector, fq::LabeledTensor> random_component(std::mt19937_64& rng, Statistics stats,
                                                            const SingleParticleSpace& space, std::size_t particles) {
  const std::size_t dim = space.dim();
  const bool from_orbital_lists = std::bernoulli_distribution(0.5)(rng);
  if (from_orbital_lists) {
    GradedVector sea(stats, space);
    auto dense = fq::LabeledTensor::zeros(space, particles, stats);
    const std::size_t lists = uniform_index(rng, 1, 2);
    for (std::size_t l = 0; l < lists; ++l) {
      std::vector<Orbital> orbitals;
      for (std::size_t p = 0; p < particles; ++p) {
        std::vector<Complex> amps(dim);
        for (auto& z : amps) z = gaussian_complex(rng);
        orbitals.emplace_back(std::move(amps));
      }
      const Complex beta = gaussian_complex(rng);
      sea = sea + from_orbitals(orbitals, stats) * beta;
      dense = dense + fq::symmetrized_product(orbitals, stats) * beta;
    }
    return {sea.normalized(), dense * Complex{1.0 / dense.norm()}};
  }

  std::set<int> all;
  for (std::size_t i = 0; i < dim; ++i) all.insert(static_cast<int>(i));
  auto occupations = enumerate_occupations(all, particles, stats);
  std::shuffle(occupations.begin(), occupations.end(), rng);
  const std::size_t terms = std::min<std::size_t>(occupations.size(), uniform_index(rng, 1, 4));
  GradedVector::Terms t;
  for (std::size_t i = 0; i < terms; ++i) t.emplace(occupations[i], gaussian_complex(rng));
  const GradedVector sea = GradedVector(stats, space, std::move(t)).normalized();
  return {sea, to_labeled_tensor(sea)};
}

}  // namespace

VerificationInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options) {
  if (options.max_dim < 2 || options.max_particles < 1) throw InvalidArgument("random_instance: options too small");
  std::mt19937_64 rng(seed);
  const Statistics stats = std::bernoulli_distribution(0.5)(rng) ? Statistics::Boson : Statistics::Fermion;
  const std::size_t dim = uniform_index(rng, 2, options.max_dim);
  const SingleParticleSpace space(dim);

  std::vector<int> orbitals(dim);
  std::iota(orbitals.begin(), orbitals.end(), 0);
  std::shuffle(orbitals.begin(), orbitals.end(), rng);
  const std::size_t left_size = uniform_index(rng, 1, dim - 1);
  std::set<int> left(orbitals.begin(), orbitals.begin() + static_cast<std::ptrdiff_t>(left_size));
  std::set<int> right(orbitals.begin() + static_cast<std::ptrdiff_t>(left_size), orbitals.end());
  const Bipartition partition(space, std::move(left), std::move(right));

  const bool mixed = options.allow_mixed && std::bernoulli_distribution(0.5)(rng);
  const std::size_t components = mixed ? uniform_index(rng, 2, 3) : 1;
  const std::size_t max_n = stats == Statistics::Fermion ? std::min(options.max_particles, dim) : options.max_particles;

  std::vector<double> weights(components);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (auto& w : weights) w = unit(rng);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  DualState state;
  std::size_t largest = 0;
  std::string description = std::string(to_string(stats)) + " d=" + std::to_string(dim) + " |L|=" +
                            std::to_string(left_size) + (mixed ? " mixed N=" : " pure N=");
  for (std::size_t c = 0; c < components; ++c) {
    const std::size_t n = uniform_index(rng, 1, max_n);
    largest = std::max(largest, n);
    auto [sea, dense] = random_component(rng, stats, space, n);
    state.sea.push_back({weights[c] / total, std::move(sea)});
    state.dense.push_back({weights[c] / total, std::move(dense)});
    description += (c ? "," : "") + std::to_string(n);
  }
  auto phases = fq::PhaseAssignment::random(largest, rng);
  return VerificationInstance{stats, space, partition, std::move(state), std::move(phases), !mixed, description};
}

double spectrum_distance(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

EquivalenceResult check_equivalence(const Bipartition& partition, const DualState& state,
                                    const fq::PhaseAssignment& phases, bool pure) {
  EquivalenceResult result;
  std::vector<double> entropies;
  for (Side traced : {Side::Right, Side::Left}) {
    const DensityMatrix sea = reduced_density_matrix(state.sea, partition, traced);
    const DensityMatrix plain = fq::partial_trace_explicit(state.dense, partition, traced, fq::PhaseAssignment{});
    const DensityMatrix phased = fq::partial_trace_explicit(state.dense, partition, traced, phases);
    result.rdm_residual = std::max(result.rdm_residual, max_entry_difference(sea, plain));
    result.phased_rdm_residual = std::max(result.phased_rdm_residual, max_entry_difference(sea, phased));
    result.spectrum_residual =
        std::max({result.spectrum_residual, spectrum_distance(plain.eigenvalues(), phased.eigenvalues()),
                  spectrum_distance(sea.eigenvalues(), plain.eigenvalues())});
    const DensityMatrix projected = ssr_project(sea, sea.statistics());
    result.all_valid = result.all_valid && sea.is_valid() && plain.is_valid() && phased.is_valid() &&
                       projected.is_valid();
    entropies.push_back(von_neumann_entropy(sea));
  }
  if (pure) result.entropy_asymmetry = std::abs(entropies[0] - entropies[1]);
  return result;
}

EquivalenceResult check_equivalence(const VerificationInstance& instance) {
  return check_equivalence(instance.partition, instance.state, instance.phases, instance.pure);
}

}  // namespace idemrdm

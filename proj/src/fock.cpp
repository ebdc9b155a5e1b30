// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/fock.hpp"

#include <algorithm>
#include <cmath>

#include "idemrdm/matrix_kernels.hpp"

namespace idemrdm {

OccupationState::OccupationState(Statistics stats, std::vector<int> sorted_orbitals)
    : orbitals_(std::move(sorted_orbitals)) {
  for (std::size_t i = 1; i < orbitals_.size(); ++i) {
    if (orbitals_[i] < orbitals_[i - 1]) throw InvalidArgument("occupation state: orbitals not sorted");
    if (stats == Statistics::Fermion && orbitals_[i] == orbitals_[i - 1])
      throw InvalidArgument("occupation state: fermion orbital " + std::to_string(orbitals_[i]) + " repeated");
  }
  for (int o : orbitals_)
    if (o < 0) throw InvalidArgument("occupation state: negative orbital id");
}

std::pair<OccupationState, int> OccupationState::canonicalize(Statistics stats, std::vector<int> orbitals) {
  int sign = 1;
  // Insertion sort keeps track of the transposition count.
  for (std::size_t i = 1; i < orbitals.size(); ++i) {
    for (std::size_t j = i; j > 0 && orbitals[j - 1] > orbitals[j]; --j) {
      std::swap(orbitals[j - 1], orbitals[j]);
      sign = -sign;
    }
  }
  if (stats == Statistics::Boson) sign = 1;
  if (stats == Statistics::Fermion && std::adjacent_find(orbitals.begin(), orbitals.end()) != orbitals.end())
    return {OccupationState{}, 0};
  return {OccupationState(stats, std::move(orbitals)), sign};
}

std::size_t OccupationState::count(int orbital) const {
  const auto [lo, hi] = std::equal_range(orbitals_.begin(), orbitals_.end(), orbital);
  return static_cast<std::size_t>(hi - lo);
}

std::string OccupationState::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < orbitals_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(orbitals_[i]);
  }
  return out + "}";
}

std::strong_ordering operator<=>(const OccupationState& a, const OccupationState& b) {
  if (auto c = a.grade() <=> b.grade(); c != 0) return c;
  return a.orbitals_ <=> b.orbitals_;
}

GradedVector::GradedVector(Statistics stats, SingleParticleSpace space) : stats_(stats), space_(space) {}

GradedVector::GradedVector(Statistics stats, SingleParticleSpace space, Terms terms)
    : stats_(stats), space_(space), terms_(std::move(terms)) {
  for (const auto& [state, amp] : terms_) {
    // Re-validate keys: the map may have been filled by a caller.
    OccupationState check(stats_, state.orbitals());
    for (int o : state.orbitals())
      if (!space_.contains(o))
        throw InvalidArgument("graded vector: orbital " + std::to_string(o) + " outside space of dimension " +
                              std::to_string(space_.dim()));
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
      throw InvalidArgument("graded vector: non-finite amplitude");
  }
  prune();
}

GradedVector GradedVector::vacuum(Statistics stats, SingleParticleSpace space) {
  Terms t;
  t.emplace(OccupationState{}, 1.0);
  return GradedVector(stats, space, std::move(t));
}

GradedVector GradedVector::basis_state(Statistics stats, SingleParticleSpace space, std::vector<int> orbitals,
                                       Complex amplitude) {
  auto [state, sign] = OccupationState::canonicalize(stats, std::move(orbitals));
  if (sign == 0) throw InvalidArgument("basis state: fermion orbital repeated");
  Terms t;
  t.emplace(std::move(state), amplitude * static_cast<double>(sign));
  return GradedVector(stats, space, std::move(t));
}

std::set<std::size_t> GradedVector::grades() const {
  std::set<std::size_t> out;
  for (const auto& [state, amp] : terms_) out.insert(state.grade());
  return out;
}

Complex GradedVector::amplitude(const OccupationState& state) const {
  auto it = terms_.find(state);
  return it == terms_.end() ? Complex{} : it->second;
}

double GradedVector::norm() const {
  double sum = 0.0;
  for (const auto& [state, amp] : terms_) sum += std::norm(amp);
  return std::sqrt(sum);
}

GradedVector GradedVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  return *this * Complex{1.0 / n};
}

GradedVector GradedVector::operator+(const GradedVector& rhs) const {
  require_compatible(*this, rhs);
  Terms t = terms_;
  for (const auto& [state, amp] : rhs.terms_) t[state] += amp;
  GradedVector out(stats_, space_);
  out.terms_ = std::move(t);
  out.prune();
  return out;
}

GradedVector GradedVector::operator-(const GradedVector& rhs) const { return *this + rhs * Complex{-1.0}; }

GradedVector GradedVector::operator*(Complex factor) const {
  GradedVector out(*this);
  for (auto& [state, amp] : out.terms_) amp *= factor;
  out.prune();
  return out;
}

void GradedVector::prune() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

void require_compatible(const GradedVector& u, const GradedVector& v) {
  if (u.space() != v.space()) throw DimensionMismatch("graded vectors live in different single-particle spaces");
  if (u.statistics() != v.statistics()) throw InvalidArgument("graded vectors have different statistics");
}

std::vector<OccupationState> enumerate_occupations(const std::set<int>& orbitals, std::size_t grade,
                                                   Statistics stats) {
  const std::vector<int> ids(orbitals.begin(), orbitals.end());
  std::vector<OccupationState> out;
  std::vector<int> current;
  // Depth-first over non-decreasing (bosons) or increasing (fermions) index lists.
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (current.size() == grade) {
      out.emplace_back(stats, current);
      return;
    }
    for (std::size_t i = start; i < ids.size(); ++i) {
      current.push_back(ids[i]);
      self(self, stats == Statistics::Fermion ? i + 1 : i);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

namespace {

// Number of occupied orbitals strictly below `orbital`.
std::size_t occupied_below(const OccupationState& s, int orbital) {
  const auto& o = s.orbitals();
  return static_cast<std::size_t>(std::lower_bound(o.begin(), o.end(), orbital) - o.begin());
}

}  // namespace

GradedVector create_apply(const Orbital& phi, const GradedVector& v) {
  require_space(v.space(), phi);
  const Statistics stats = v.statistics();
  GradedVector::Terms out;
  for (const auto& [state, amp] : v.terms()) {
    for (std::size_t i = 0; i < phi.dim(); ++i) {
      const Complex coeff = phi[i];
      if (coeff == Complex{}) continue;
      const int orbital = static_cast<int>(i);
      std::vector<int> next = state.orbitals();
      const auto pos = occupied_below(state, orbital);
      double factor = 1.0;
      if (stats == Statistics::Fermion) {
        if (state.count(orbital) != 0) continue;
        factor = (pos % 2 == 0) ? 1.0 : -1.0;
      } else {
        factor = std::sqrt(static_cast<double>(state.count(orbital) + 1));
      }
      next.insert(next.begin() + static_cast<std::ptrdiff_t>(pos), orbital);
      out[OccupationState(stats, std::move(next))] += coeff * factor * amp;
    }
  }
  return GradedVector(stats, v.space(), std::move(out));
}

GradedVector annihilate_apply(const Orbital& phi, const GradedVector& v) {
  require_space(v.space(), phi);
  const Statistics stats = v.statistics();
  GradedVector::Terms out;
  for (const auto& [state, amp] : v.terms()) {
    const auto& occ = state.orbitals();
    // Each distinct occupied orbital contributes once.
    for (std::size_t k = 0; k < occ.size(); ++k) {
      if (k > 0 && occ[k] == occ[k - 1]) continue;
      const int orbital = occ[k];
      const Complex coeff = std::conj(phi[static_cast<std::size_t>(orbital)]);
      if (coeff == Complex{}) continue;
      double factor = 1.0;
      if (stats == Statistics::Fermion) {
        factor = (k % 2 == 0) ? 1.0 : -1.0;
      } else {
        factor = std::sqrt(static_cast<double>(state.count(orbital)));
      }
      std::vector<int> next = occ;
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(k));
      out[OccupationState(stats, std::move(next))] += coeff * factor * amp;
    }
  }
  return GradedVector(stats, v.space(), std::move(out));
}

GradedVector from_orbitals(std::span<const Orbital> orbitals, Statistics stats) {
  if (orbitals.empty()) throw InvalidArgument("from_orbitals: empty orbital list");
  const SingleParticleSpace space(orbitals.front().dim());
  GradedVector v = GradedVector::vacuum(stats, space);
  for (auto it = orbitals.rbegin(); it != orbitals.rend(); ++it) v = create_apply(*it, v);
  return v;
}

Complex inner_product(const GradedVector& u, const GradedVector& v) {
  require_compatible(u, v);
  Complex sum{};
  const auto& small = u.terms().size() <= v.terms().size() ? u.terms() : v.terms();
  const bool u_small = &small == &u.terms();
  for (const auto& [state, amp] : small) {
    const Complex other = u_small ? v.amplitude(state) : u.amplitude(state);
    sum += u_small ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return sum;
}

Complex transition_amplitude(std::span<const Orbital> bra, std::span<const Orbital> ket, Statistics stats) {
  if (bra.size() != ket.size())
    throw DimensionMismatch("transition_amplitude: bra has " + std::to_string(bra.size()) + " orbitals, ket has " +
                            std::to_string(ket.size()));
  const SquareMatrix gram = gram_matrix(bra, ket);
  return stats == Statistics::Boson ? permanent_ryser(gram) : determinant(gram);
}

}  // namespace idemrdm

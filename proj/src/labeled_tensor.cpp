// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/labeled_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace idemrdm::fq {

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (out > kDenseGuard / base)
      throw GuardExceeded("dense tensor of " + std::to_string(base) + "^" + std::to_string(exponent) +
                          " entries exceeds the guard of " + std::to_string(kDenseGuard));
    out *= base;
  }
  return out;
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

int permutation_sign(const std::vector<std::size_t>& perm) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Calls visit(subset) for every ascending k-subset of 0..n-1.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  if (k > n) return;
  while (true) {
    visit(subset);
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == static_cast<int>(n - k + i - 1)) --i;
    if (i == 0) return;
    ++subset[i - 1];
    for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

std::vector<int> complement(std::size_t n, const std::vector<int>& subset) {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(n); ++s)
    if (!std::binary_search(subset.begin(), subset.end(), s)) out.push_back(s);
  return out;
}

// Symmetrized sum over slot assignments without any prefactor:
// sum_sigma (+-1)^sigma (x)_s orbital_{sigma^-1(s)}.
std::vector<Complex> raw_symmetrized(std::span<const Orbital> orbitals, Statistics stats, std::size_t dim) {
  const std::size_t n = orbitals.size();
  const std::size_t size = checked_power(dim, n);
  std::vector<Complex> out(size, Complex{});
  std::vector<std::size_t> slot_of(n);
  std::iota(slot_of.begin(), slot_of.end(), 0);
  std::vector<std::size_t> orbital_at(n);
  do {
    const double sign = stats == Statistics::Fermion ? permutation_sign(slot_of) : 1.0;
    for (std::size_t i = 0; i < n; ++i) orbital_at[slot_of[i]] = i;
    std::vector<Complex> acc{Complex{1.0}};
    for (std::size_t s = 0; s < n; ++s) {
      const Orbital& orb = orbitals[orbital_at[s]];
      std::vector<Complex> next(acc.size() * dim);
      for (std::size_t f = 0; f < acc.size(); ++f)
        for (std::size_t i = 0; i < dim; ++i) next[f * dim + i] = acc[f] * orb[i];
      acc = std::move(next);
    }
    for (std::size_t f = 0; f < size; ++f) out[f] += sign * acc[f];
  } while (std::next_permutation(slot_of.begin(), slot_of.end()));
  return out;
}

std::size_t common_dim(std::span<const Orbital> orbitals) {
  const std::size_t dim = orbitals.front().dim();
  for (const auto& o : orbitals)
    if (o.dim() != dim) throw DimensionMismatch("orbital list mixes dimensions");
  return dim;
}

double vector_norm(const std::vector<Complex>& v) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return std::sqrt(sum);
}

std::vector<Orbital> basis_orbitals(std::size_t dim, const OccupationState& state) {
  std::vector<Orbital> out;
  for (int o : state.orbitals()) out.push_back(Orbital::basis(dim, static_cast<std::size_t>(o)));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LabeledTensor

LabeledTensor::LabeledTensor(SingleParticleSpace space, std::size_t slots, std::vector<Complex> amplitudes,
                             std::optional<Statistics> symmetry)
    : space_(space), slots_(slots), amplitudes_(std::move(amplitudes)), symmetry_(symmetry) {
  if (amplitudes_.size() != checked_power(space_.dim(), slots_))
    throw DimensionMismatch("labeled tensor: amplitude count does not match dim^slots");
}

LabeledTensor LabeledTensor::zeros(SingleParticleSpace space, std::size_t slots, std::optional<Statistics> symmetry) {
  return LabeledTensor(space, slots, std::vector<Complex>(checked_power(space.dim(), slots)), symmetry);
}

LabeledTensor LabeledTensor::product(std::span<const Orbital> orbitals) {
  if (orbitals.empty()) throw InvalidArgument("product tensor: empty orbital list");
  const std::size_t dim = common_dim(orbitals);
  checked_power(dim, orbitals.size());
  std::vector<Complex> acc{Complex{1.0}};
  for (const auto& orb : orbitals) {
    std::vector<Complex> next(acc.size() * dim);
    for (std::size_t f = 0; f < acc.size(); ++f)
      for (std::size_t i = 0; i < dim; ++i) next[f * dim + i] = acc[f] * orb[i];
    acc = std::move(next);
  }
  return LabeledTensor(SingleParticleSpace(dim), orbitals.size(), std::move(acc));
}

std::size_t LabeledTensor::flat_index(std::span<const int> index) const {
  if (index.size() != slots_) throw DimensionMismatch("labeled tensor: index rank mismatch");
  std::size_t flat = 0;
  for (int i : index) {
    if (!space_.contains(i)) throw InvalidArgument("labeled tensor: index out of range");
    flat = flat * space_.dim() + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<int> LabeledTensor::multi_index(std::size_t flat) const {
  std::vector<int> out(slots_);
  for (std::size_t s = slots_; s-- > 0;) {
    out[s] = static_cast<int>(flat % space_.dim());
    flat /= space_.dim();
  }
  return out;
}

Complex LabeledTensor::at(std::span<const int> index) const { return amplitudes_[flat_index(index)]; }

LabeledTensor LabeledTensor::swap_slots(std::size_t i, std::size_t j) const {
  if (i >= slots_ || j >= slots_) throw InvalidArgument("swap_slots: slot out of range");
  std::vector<Complex> out(amplitudes_.size());
  for (std::size_t f = 0; f < amplitudes_.size(); ++f) {
    auto idx = multi_index(f);
    std::swap(idx[i], idx[j]);
    out[flat_index(idx)] = amplitudes_[f];
  }
  return LabeledTensor(space_, slots_, std::move(out), symmetry_);
}

double LabeledTensor::norm() const { return vector_norm(amplitudes_); }

Complex LabeledTensor::inner(const LabeledTensor& ket) const {
  if (ket.space_ != space_ || ket.slots_ != slots_) throw DimensionMismatch("labeled tensor inner: shape mismatch");
  Complex sum{};
  for (std::size_t f = 0; f < amplitudes_.size(); ++f) sum += std::conj(amplitudes_[f]) * ket.amplitudes_[f];
  return sum;
}

LabeledTensor LabeledTensor::operator+(const LabeledTensor& rhs) const {
  if (rhs.space_ != space_ || rhs.slots_ != slots_) throw DimensionMismatch("labeled tensor sum: shape mismatch");
  std::vector<Complex> out(amplitudes_);
  for (std::size_t f = 0; f < out.size(); ++f) out[f] += rhs.amplitudes_[f];
  const auto sym = symmetry_ == rhs.symmetry_ ? symmetry_ : std::nullopt;
  return LabeledTensor(space_, slots_, std::move(out), sym);
}

LabeledTensor LabeledTensor::operator*(Complex factor) const {
  std::vector<Complex> out(amplitudes_);
  for (auto& z : out) z *= factor;
  return LabeledTensor(space_, slots_, std::move(out), symmetry_);
}

LabeledTensor tensor_product(const LabeledTensor& x, const LabeledTensor& y) {
  if (x.space() != y.space()) throw DimensionMismatch("tensor_product: space mismatch");
  checked_power(x.dim(), x.slots() + y.slots());
  std::vector<Complex> out(x.amplitudes().size() * y.amplitudes().size());
  std::size_t f = 0;
  for (const auto& a : x.amplitudes())
    for (const auto& b : y.amplitudes()) out[f++] = a * b;
  return LabeledTensor(x.space(), x.slots() + y.slots(), std::move(out));
}

LabeledTensor symmetrized_product(std::span<const Orbital> orbitals, Statistics stats) {
  if (orbitals.empty()) throw InvalidArgument("symmetrized_product: empty orbital list");
  const std::size_t dim = common_dim(orbitals);
  auto amps = raw_symmetrized(orbitals, stats, dim);
  const double scale = 1.0 / std::sqrt(factorial(orbitals.size()));
  for (auto& z : amps) z *= scale;
  return LabeledTensor(SingleParticleSpace(dim), orbitals.size(), std::move(amps), stats);
}

LabeledTensor symmetrize_explicit(std::span<const Orbital> orbitals, Statistics stats) {
  LabeledTensor t = symmetrized_product(orbitals, stats);
  double scale = 1.0;
  for (const auto& o : orbitals) scale *= o.norm();
  const double n = t.norm();
  if (n <= 1e-12 * scale) {
    throw InvalidArgument(stats == Statistics::Fermion ? "symmetrize_explicit: fermion orbitals are linearly dependent"
                                                       : "symmetrize_explicit: symmetrized state vanishes");
  }
  return t * Complex{1.0 / n};
}

LabeledTensor elementary_symmetrize(const LabeledTensor& x, std::size_t grade) {
  if (grade > x.slots())
    throw InvalidArgument("elementary_symmetrize: grade " + std::to_string(grade) + " exceeds rank " +
                          std::to_string(x.slots()));
  if (grade != x.slots())
    throw InvalidArgument("elementary_symmetrize: grade " + std::to_string(grade) + " differs from rank " +
                          std::to_string(x.slots()));
  const double weight = 1.0 / factorial(grade);
  std::vector<Complex> out(x.amplitudes().size(), Complex{});
  std::vector<std::size_t> perm(grade);
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto idx = x.multi_index(f);
    auto sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    std::iota(perm.begin(), perm.end(), 0);
    Complex sum{};
    std::vector<int> permuted(grade);
    do {
      for (std::size_t s = 0; s < grade; ++s) permuted[s] = idx[perm[s]];
      sum += x.at(permuted);
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[f] = weight * sum;
  }
  return LabeledTensor(x.space(), x.slots(), std::move(out), Statistics::Boson);
}

LabeledTensor vee_product(const LabeledTensor& v, const LabeledTensor& w) {
  const LabeledTensor vw = tensor_product(v, w);
  return elementary_symmetrize(vw, vw.slots());
}

// ---------------------------------------------------------------------------
// PhaseAssignment

PhaseAssignment PhaseAssignment::random(std::size_t slots, std::mt19937_64& rng) {
  if (slots > 20) throw GuardExceeded("phase assignment: too many pseudolabels");
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  PhaseAssignment out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << slots); ++mask) {
    std::vector<int> subset;
    for (std::size_t s = 0; s < slots; ++s)
      if ((mask >> s) & 1U) subset.push_back(static_cast<int>(s));
    out.angles_[subset] = angle(rng);
  }
  return out;
}

double PhaseAssignment::angle(const std::vector<int>& subset) const {
  auto it = angles_.find(subset);
  return it == angles_.end() ? 0.0 : it->second;
}

void PhaseAssignment::set(std::vector<int> subset, double angle) {
  std::sort(subset.begin(), subset.end());
  angles_[std::move(subset)] = angle;
}

bool PhaseAssignment::all_zero() const {
  return std::all_of(angles_.begin(), angles_.end(), [](const auto& kv) { return kv.second == 0.0; });
}

// ---------------------------------------------------------------------------
// PartialTensor

PartialTensor::PartialTensor(SingleParticleSpace space, std::size_t total_slots, Sectors sectors)
    : space_(space), total_slots_(total_slots), sectors_(std::move(sectors)) {
  for (const auto& [slots, values] : sectors_) {
    if (!std::is_sorted(slots.begin(), slots.end()) ||
        std::adjacent_find(slots.begin(), slots.end()) != slots.end())
      throw InvalidArgument("partial tensor: sector slots must be strictly ascending");
    for (int s : slots)
      if (s < 0 || static_cast<std::size_t>(s) >= total_slots_)
        throw InvalidArgument("partial tensor: sector slot out of range");
    if (values.size() != checked_power(space_.dim(), slots.size()))
      throw DimensionMismatch("partial tensor: sector size does not match dim^rank");
  }
}

double PartialTensor::norm() const {
  double sum = 0.0;
  for (const auto& [slots, values] : sectors_)
    for (const auto& z : values) sum += std::norm(z);
  return std::sqrt(sum);
}

Complex PartialTensor::inner(const PartialTensor& ket) const {
  if (ket.space_ != space_ || ket.total_slots_ != total_slots_)
    throw DimensionMismatch("partial tensor inner: shape mismatch");
  Complex sum{};
  for (const auto& [slots, values] : sectors_) {
    auto it = ket.sectors_.find(slots);
    if (it == ket.sectors_.end()) continue;
    for (std::size_t f = 0; f < values.size(); ++f) sum += std::conj(values[f]) * it->second[f];
  }
  return sum;
}

LabeledTensor PartialTensor::as_full(std::optional<Statistics> symmetry) const {
  std::vector<int> all(total_slots_);
  std::iota(all.begin(), all.end(), 0);
  if (sectors_.size() != 1 || sectors_.begin()->first != all)
    throw InvalidArgument("partial tensor: not supported on every slot");
  return LabeledTensor(space_, total_slots_, sectors_.begin()->second, symmetry);
}

PartialTensor subsystem_basis_states(std::span<const Orbital> sub_orbitals, std::size_t total_slots,
                                     const PhaseAssignment& phases, Statistics stats) {
  const std::size_t n = sub_orbitals.size();
  if (n > total_slots)
    throw InvalidArgument("subsystem_basis_states: " + std::to_string(n) + " particles exceed " +
                          std::to_string(total_slots) + " pseudolabels");
  if (n == 0) throw InvalidArgument("subsystem_basis_states: empty orbital list");
  const std::size_t dim = common_dim(sub_orbitals);
  const std::vector<Complex> local = raw_symmetrized(sub_orbitals, stats, dim);
  PartialTensor::Sectors sectors;
  double total = 0.0;
  for_each_subset(total_slots, n, [&](const std::vector<int>& subset) {
    const Complex phase = std::polar(1.0, phases.angle(subset));
    std::vector<Complex> values(local.size());
    for (std::size_t f = 0; f < local.size(); ++f) {
      values[f] = phase * local[f];
      total += std::norm(values[f]);
    }
    sectors.emplace(subset, std::move(values));
  });
  total = std::sqrt(total);
  if (total <= 1e-12) throw InvalidArgument("subsystem_basis_states: symmetrized state vanishes");
  for (auto& [slots, values] : sectors)
    for (auto& z : values) z /= total;
  return PartialTensor(SingleParticleSpace(dim), total_slots, std::move(sectors));
}

ExplicitSubsystemBasis explicit_subsystem_basis(const SingleParticleSpace& space, const std::set<int>& orbitals,
                                                std::size_t grade, std::size_t total_slots,
                                                const PhaseAssignment& phases, Statistics stats) {
  ExplicitSubsystemBasis basis;
  for (const auto& occ : enumerate_occupations(orbitals, grade, stats)) {
    const auto orbs = basis_orbitals(space.dim(), occ);
    basis.states.emplace_back(occ, subsystem_basis_states(orbs, total_slots, phases, stats));
  }
  return basis;
}

PartialTensor contract(const PartialTensor& bra, const LabeledTensor& ket) {
  if (bra.space() != ket.space() || bra.total_slots() != ket.slots())
    throw DimensionMismatch("contract: bra and ket disagree on shape");
  const std::size_t dim = ket.dim();
  const std::size_t total = ket.slots();
  std::vector<std::size_t> stride(total);
  for (std::size_t s = 0; s < total; ++s) stride[s] = checked_power(dim, total - 1 - s);

  // Flat offsets into `ket` for every local index over an ascending slot list.
  auto offsets = [&](const std::vector<int>& slots) {
    std::vector<std::size_t> out(checked_power(dim, slots.size()), 0);
    for (std::size_t f = 0; f < out.size(); ++f) {
      std::size_t rest = f;
      std::size_t off = 0;
      for (std::size_t p = slots.size(); p-- > 0;) {
        off += (rest % dim) * stride[static_cast<std::size_t>(slots[p])];
        rest /= dim;
      }
      out[f] = off;
    }
    return out;
  };

  const auto amps = ket.amplitudes();
  PartialTensor::Sectors out;
  for (const auto& [slots, values] : bra.sectors()) {
    const auto rest = complement(total, slots);
    const auto bra_off = offsets(slots);
    const auto rest_off = offsets(rest);
    std::vector<Complex> chi(rest_off.size(), Complex{});
    for (std::size_t f = 0; f < values.size(); ++f) {
      if (values[f] == Complex{}) continue;
      const Complex b = std::conj(values[f]);
      for (std::size_t g = 0; g < rest_off.size(); ++g) chi[g] += b * amps[bra_off[f] + rest_off[g]];
    }
    auto& slot = out[rest];
    if (slot.empty()) slot.assign(chi.size(), Complex{});
    for (std::size_t g = 0; g < chi.size(); ++g) slot[g] += chi[g];
  }
  return PartialTensor(ket.space(), total, std::move(out));
}

// ---------------------------------------------------------------------------
// Symmetrized partial trace

namespace {

// Sign of the slot permutation that lists the kept slots and the traced slots
// in the order the kept/traced subsystems take in the L-before-R convention.
double reorder_sign(const std::vector<int>& kept_slots, const std::vector<int>& traced_slots, Side traced) {
  std::size_t inversions = 0;
  for (int k : kept_slots)
    for (int t : traced_slots) {
      if (traced == Side::Right && k > t) ++inversions;
      if (traced == Side::Left && t > k) ++inversions;
    }
  return inversions % 2 == 0 ? 1.0 : -1.0;
}

struct SparseEntry {
  std::size_t flat;
  Complex value;
};

std::vector<SparseEntry> sparse_symmetrized(std::size_t dim, const OccupationState& occ, Statistics stats) {
  if (occ.empty()) return {{0, Complex{1.0}}};
  const auto orbs = basis_orbitals(dim, occ);
  auto dense = raw_symmetrized(orbs, stats, dim);
  const double n = vector_norm(dense);
  std::vector<SparseEntry> out;
  for (std::size_t f = 0; f < dense.size(); ++f)
    if (dense[f] != Complex{}) out.push_back({f, dense[f] / n});
  return out;
}

}  // namespace

DensityMatrix partial_trace_explicit(std::span<const WeightedTensor> rho, const Bipartition& partition, Side traced,
                                     const PhaseAssignment& phases) {
  if (rho.empty()) throw InvalidArgument("partial_trace_explicit: empty mixture");
  const auto stats_opt = rho.front().state.symmetry();
  if (!stats_opt) throw InvalidArgument("partial_trace_explicit: input tensors must be symmetrized");
  const Statistics stats = *stats_opt;
  const std::size_t dim = rho.front().state.dim();
  if (dim != partition.dim()) throw DimensionMismatch("partial_trace_explicit: bipartition does not match space");

  double weight_sum = 0.0;
  for (const auto& component : rho) {
    if (component.state.symmetry() != stats_opt)
      throw InvalidArgument("partial_trace_explicit: mixture components disagree on statistics");
    if (component.state.dim() != dim) throw DimensionMismatch("partial_trace_explicit: mixture spaces differ");
    if (!(component.weight > 0.0)) throw InvalidArgument("partial_trace_explicit: weights must be positive");
    if (std::abs(component.state.norm() - 1.0) > 1e-8)
      throw InvalidArgument("partial_trace_explicit: component is not normalized");
    weight_sum += component.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) throw InvalidArgument("partial_trace_explicit: weights do not sum to 1");

  const auto& kept_orbitals = partition.orbitals(opposite(traced));
  const auto& traced_orbitals = partition.orbitals(traced);

  std::map<OccupationState, std::size_t> index;
  std::vector<OccupationState> labels;
  // Rank-one contributions weight * |v><v| with v indexed by `index`.
  std::vector<std::pair<double, std::vector<std::pair<std::size_t, Complex>>>> updates;

  for (const auto& component : rho) {
    const LabeledTensor& state = component.state;
    const std::size_t total = state.slots();
    for (std::size_t n = 0; n <= total; ++n) {
      const std::size_t m = total - n;
      const auto traced_states = enumerate_occupations(traced_orbitals, n, stats);
      const auto kept_states = enumerate_occupations(kept_orbitals, m, stats);
      if (traced_states.empty() || kept_states.empty()) continue;

      std::vector<std::vector<SparseEntry>> kept_tensors;
      kept_tensors.reserve(kept_states.size());
      for (const auto& k : kept_states) kept_tensors.push_back(sparse_symmetrized(dim, k, stats));
      const double readout_norm = 1.0 / std::sqrt(binomial(total, m));
      const double grade_weight = component.weight * binomial(total, n);

      for (const auto& r : traced_states) {
        // With no traced particles the partial bra is the identity.
        std::vector<int> all_slots(total);
        std::iota(all_slots.begin(), all_slots.end(), 0);
        PartialTensor chi = (n == 0) ? PartialTensor(state.space(), total,
                                                     {{all_slots, std::vector<Complex>(state.amplitudes().begin(),
                                                                                       state.amplitudes().end())}})
                                     : contract(subsystem_basis_states(basis_orbitals(dim, r), total, phases, stats),
                                                state);
        std::vector<std::pair<std::size_t, Complex>> coeffs;
        for (std::size_t ki = 0; ki < kept_states.size(); ++ki) {
          Complex coeff{};
          for (const auto& [kept_slots, values] : chi.sectors()) {
            const auto traced_slots = complement(total, kept_slots);
            const Complex induced =
                std::polar(1.0, -phases.angle(traced_slots)) *
                (stats == Statistics::Fermion ? reorder_sign(kept_slots, traced_slots, traced) : 1.0);
            Complex overlap{};
            for (const auto& e : kept_tensors[ki]) overlap += std::conj(e.value) * values[e.flat];
            coeff += std::conj(induced) * overlap;
          }
          coeff *= readout_norm;
          if (std::abs(coeff) < kPruneThreshold) continue;
          const auto& label = kept_states[ki];
          auto [it, inserted] = index.emplace(label, labels.size());
          if (inserted) labels.push_back(label);
          coeffs.emplace_back(it->second, coeff);
        }
        if (!coeffs.empty()) updates.emplace_back(grade_weight, std::move(coeffs));
      }
    }
  }
  if (labels.empty()) throw InvalidArgument("partial_trace_explicit: state has no support");

  // Order the basis by grade, then lexicographically.
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<std::size_t> position(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  SquareMatrix entries(labels.size());
  for (const auto& [weight, coeffs] : updates)
    for (const auto& [i, ci] : coeffs)
      for (const auto& [j, cj] : coeffs) entries(position[i], position[j]) += weight * ci * std::conj(cj);

  std::vector<OccupationState> basis(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) basis[position[i]] = labels[i];
  return DensityMatrix(stats, std::move(basis), std::move(entries));
}

SquareMatrix partial_trace_slots(const LabeledTensor& state, const std::vector<std::size_t>& kept_slots) {
  const std::size_t dim = state.dim();
  const std::size_t total = state.slots();
  std::vector<bool> kept(total, false);
  for (auto s : kept_slots) {
    if (s >= total || kept[s]) throw InvalidArgument("partial_trace_slots: invalid kept slot list");
    kept[s] = true;
  }
  if (kept_slots.empty()) throw InvalidArgument("partial_trace_slots: nothing kept");
  const std::size_t kept_size = checked_power(dim, kept_slots.size());
  const std::size_t traced_size = checked_power(dim, total - kept_slots.size());
  std::vector<std::size_t> traced_slots;
  for (std::size_t s = 0; s < total; ++s)
    if (!kept[s]) traced_slots.push_back(s);

  // Rearrange amplitudes into a kept x traced matrix.
  std::vector<Complex> psi(kept_size * traced_size);
  for (std::size_t f = 0; f < state.amplitudes().size(); ++f) {
    const auto idx = state.multi_index(f);
    std::size_t row = 0;
    for (auto s : kept_slots) row = row * dim + static_cast<std::size_t>(idx[s]);
    std::size_t col = 0;
    for (auto s : traced_slots) col = col * dim + static_cast<std::size_t>(idx[s]);
    psi[row * traced_size + col] = state.amplitudes()[f];
  }
  SquareMatrix out(kept_size);
  for (std::size_t i = 0; i < kept_size; ++i)
    for (std::size_t j = 0; j < kept_size; ++j) {
      Complex sum{};
      for (std::size_t t = 0; t < traced_size; ++t) sum += psi[i * traced_size + t] * std::conj(psi[j * traced_size + t]);
      out(i, j) = sum;
    }
  return out;
}

CorrespondenceReport sea_correspondence(std::span<const Orbital> orbitals, Statistics stats,
                                        std::span<const std::vector<Orbital>> bras, double tolerance) {
  if (orbitals.empty()) throw InvalidArgument("sea_correspondence: empty orbital list");
  const std::size_t dim = common_dim(orbitals);
  if (orbitals.size() > 5 || dim > 6)
    throw GuardExceeded("sea_correspondence: oracle scale is N <= 5, d <= 6");
  const LabeledTensor ket_dense = symmetrized_product(orbitals, stats);
  const GradedVector ket_sea = from_orbitals(orbitals, stats);
  CorrespondenceReport report;
  for (const auto& bra : bras) {
    if (bra.size() != orbitals.size()) throw DimensionMismatch("sea_correspondence: bra length differs from ket");
    const Complex dense = symmetrized_product(bra, stats).inner(ket_dense);
    const Complex sea = inner_product(from_orbitals(bra, stats), ket_sea);
    report.max_residual = std::max(report.max_residual, scaled_residual(dense, sea));
    ++report.pairs;
  }
  report.pass = report.max_residual <= tolerance;
  return report;
}

CorrespondenceReport sea_correspondence(std::span<const Orbital> orbitals, Statistics stats, double tolerance) {
  if (orbitals.empty()) throw InvalidArgument("sea_correspondence: empty orbital list");
  const std::size_t dim = common_dim(orbitals);
  if (orbitals.size() > 5 || dim > 6)
    throw GuardExceeded("sea_correspondence: oracle scale is N <= 5, d <= 6");
  std::set<int> all;
  for (std::size_t i = 0; i < dim; ++i) all.insert(static_cast<int>(i));
  std::vector<std::vector<Orbital>> bras;
  for (const auto& occ : enumerate_occupations(all, orbitals.size(), stats)) bras.push_back(basis_orbitals(dim, occ));
  bras.emplace_back(orbitals.begin(), orbitals.end());
  return sea_correspondence(orbitals, stats, bras, tolerance);
}

}  // namespace idemrdm::fq

// SPDX-License-Identifier: Apache-2.0
#include "idemrdm/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace idemrdm {

Bipartition::Bipartition(const SingleParticleSpace& space, std::set<int> left, std::set<int> right)
    : dim_(space.dim()), left_(std::move(left)), right_(std::move(right)) {
  for (int o : left_)
    if (!space.contains(o)) throw InvalidArgument("bipartition: left orbital " + std::to_string(o) + " out of range");
  for (int o : right_) {
    if (!space.contains(o)) throw InvalidArgument("bipartition: right orbital " + std::to_string(o) + " out of range");
    if (left_.count(o)) throw InvalidArgument("bipartition: orbital " + std::to_string(o) + " is in both L and R");
  }
  if (left_.size() + right_.size() != dim_) throw InvalidArgument("bipartition: L and R do not cover every orbital");
}

Side Bipartition::side_of(int orbital) const {
  if (left_.count(orbital)) return Side::Left;
  if (right_.count(orbital)) return Side::Right;
  throw InvalidArgument("bipartition: orbital " + std::to_string(orbital) + " is not assigned");
}

SplitState split(const OccupationState& state, const Bipartition& partition, Statistics stats) {
  std::vector<int> left;
  std::vector<int> right;
  std::size_t crossings = 0;
  for (int o : state.orbitals()) {
    if (partition.side_of(o) == Side::Left) {
      left.push_back(o);
      crossings += right.size();
    } else {
      right.push_back(o);
    }
  }
  const int sign = (stats == Statistics::Fermion && crossings % 2 == 1) ? -1 : 1;
  return {OccupationState(stats, std::move(left)), OccupationState(stats, std::move(right)), sign};
}

std::pair<OccupationState, int> join(const OccupationState& left, const OccupationState& right, Statistics stats) {
  std::vector<int> all = left.orbitals();
  all.insert(all.end(), right.orbitals().begin(), right.orbitals().end());
  return OccupationState::canonicalize(stats, std::move(all));
}

DensityMatrix::DensityMatrix(Statistics stats, std::vector<OccupationState> basis, SquareMatrix entries)
    : stats_(stats), basis_(std::move(basis)), entries_(std::move(entries)) {
  if (basis_.size() != entries_.order())
    throw DimensionMismatch("density matrix: basis has " + std::to_string(basis_.size()) + " labels, matrix order " +
                            std::to_string(entries_.order()));
  std::vector<OccupationState> sorted = basis_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("density matrix: repeated basis label");
}

std::optional<std::size_t> DensityMatrix::index_of(const OccupationState& state) const {
  auto it = std::find(basis_.begin(), basis_.end(), state);
  if (it == basis_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - basis_.begin());
}

Complex DensityMatrix::entry(const OccupationState& row, const OccupationState& col) const {
  const auto r = index_of(row);
  const auto c = index_of(col);
  if (!r || !c) return Complex{};
  return entries_(*r, *c);
}

std::vector<double> DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(entries_); }

bool DensityMatrix::is_valid(double hermitian_tol, double eigen_tol, double trace_tol) const {
  if (!entries_.is_hermitian(hermitian_tol)) return false;
  if (std::abs(trace() - Complex{1.0}) > trace_tol) return false;
  const auto ev = eigenvalues();
  return ev.empty() || ev.front() >= -eigen_tol;
}

double max_entry_difference(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<OccupationState> labels = a.basis();
  for (const auto& s : b.basis())
    if (!a.index_of(s)) labels.push_back(s);
  double worst = 0.0;
  for (const auto& r : labels)
    for (const auto& c : labels) worst = std::max(worst, std::abs(a.entry(r, c) - b.entry(r, c)));
  return worst;
}

std::vector<double> hermitian_eigenvalues(const SquareMatrix& h, JacobiOptions options) {
  const std::size_t n = h.order();
  SquareMatrix a(h);
  // Symmetrize so that rounding noise in the input cannot stall the sweeps.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  double scale = 0.0;
  for (const auto& z : a.entries()) scale += std::norm(z);
  scale = std::max(1.0, std::sqrt(scale));

  auto off_diagonal = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) sum += 2.0 * std::norm(a(i, j));
    return std::sqrt(sum);
  };

  for (int sweep = 0; sweep < options.max_sweeps && off_diagonal() > options.tolerance * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        // Tiny pivots are already converged; dividing by them loses |phase| = 1.
        if (r <= std::numeric_limits<double>::min() * 1e16) continue;
        // Rotate column q by the phase of a_pq so the pivot becomes real, then
        // apply the real Jacobi rotation: U = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
        const Complex phase = std::polar(1.0, std::arg(apq));
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace idemrdm

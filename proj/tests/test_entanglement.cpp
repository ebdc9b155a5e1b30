// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "idemrdm/entanglement.hpp"

using namespace idemrdm;

namespace {

const Statistics F = Statistics::Fermion;
const Statistics B = Statistics::Boson;

Bipartition halves(std::size_t dim, std::size_t cut) {
  std::set<int> l, r;
  for (std::size_t i = 0; i < dim; ++i) (i < cut ? l : r).insert(static_cast<int>(i));
  return Bipartition(SingleParticleSpace(dim), l, r);
}

GradedVector ket(Statistics s, std::size_t dim, std::vector<int> orbs, Complex amp = 1.0) {
  return GradedVector::basis_state(s, SingleParticleSpace(dim), std::move(orbs), amp);
}

GradedVector three_fermion() {
  const double h = 1.0 / std::sqrt(2.0);
  return ket(F, 8, {0, 1, 4}, h) + ket(F, 8, {0, 2, 5}, h);
}

OccupationState occ(Statistics s, std::vector<int> orbs) { return OccupationState(s, std::move(orbs)); }

GradedVector relabel(const GradedVector& v, const std::vector<int>& map) {
  GradedVector out(v.statistics(), v.space());
  for (const auto& [state, amp] : v.terms()) {
    std::vector<int> orbs;
    for (int o : state.orbitals()) orbs.push_back(map[static_cast<std::size_t>(o)]);
    out = out + GradedVector::basis_state(v.statistics(), v.space(), orbs, amp);
  }
  return out;
}

}  // namespace

TEST_CASE("bipartitions are validated") {
  const SingleParticleSpace s(4);
  CHECK_THROWS_AS(Bipartition(s, {0, 1}, {1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(Bipartition(s, {0}, {1, 2}), InvalidArgument);
  CHECK_THROWS_AS(Bipartition(s, {0, 1}, {2, 7}), InvalidArgument);
  CHECK(Bipartition(s, {0, 3}, {1, 2}).side_of(3) == Side::Left);
}

TEST_CASE("split follows the L-before-R sign") {
  const Bipartition p(SingleParticleSpace(4), {1, 3}, {0, 2});
  const auto sp = split(occ(F, {0, 1, 3}), p, F);
  CHECK(sp.left == occ(F, {1, 3}));
  CHECK(sp.right == occ(F, {0}));
  CHECK(sp.sign == 1);  // 0 sits before both L orbitals: two crossings
  const auto sp2 = split(occ(F, {0, 1, 2}), p, F);
  CHECK(sp2.sign == -1);
  const auto [joined, sign] = join(sp2.left, sp2.right, F);
  CHECK(joined == occ(F, {0, 1, 2}));
  CHECK(sign == sp2.sign);
  CHECK(split(occ(B, {0, 1, 1}), p, B).sign == 1);
}

TEST_CASE("three-fermion reduced state") {
  const Bipartition p = halves(8, 4);
  const auto rho = reduced_density_matrix(three_fermion(), p, Side::Right);
  REQUIRE(rho.size() == 2);
  CHECK(rho.basis()[0] == occ(F, {0, 1}));
  CHECK(rho.basis()[1] == occ(F, {0, 2}));
  CHECK(std::abs(rho.matrix()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(rho.matrix()(1, 1) - 0.5) < 1e-15);
  CHECK(std::abs(rho.matrix()(0, 1)) < 1e-15);
  CHECK(std::abs(von_neumann_entropy(rho) - 1.0) < 1e-9);
  const auto rho_r = reduced_density_matrix(three_fermion(), p, Side::Left);
  CHECK(std::abs(von_neumann_entropy(rho_r) - 1.0) < 1e-9);
}

TEST_CASE("reduced_density_matrix examples") {
  const Bipartition p = halves(2, 1);
  const auto pure = reduced_density_matrix(ket(F, 2, {0, 1}), p, Side::Right);
  REQUIRE(pure.size() == 1);
  CHECK(std::abs(pure.matrix()(0, 0) - 1.0) < 1e-15);
  CHECK(von_neumann_entropy(pure) == 0.0);

  const double h = 1.0 / std::sqrt(2.0);
  const auto bell = ket(F, 4, {0, 3}, h) + ket(F, 4, {1, 2}, h);
  const auto rho = reduced_density_matrix(bell, halves(4, 2), Side::Right);
  REQUIRE(rho.size() == 2);
  CHECK(rho.basis()[0] == occ(F, {0}));
  CHECK(rho.basis()[1] == occ(F, {1}));
  CHECK(std::abs(rho.matrix()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(rho.matrix()(1, 1) - 0.5) < 1e-15);
  CHECK(std::abs(rho.matrix()(0, 1)) < 1e-15);

  CHECK_THROWS_AS(reduced_density_matrix(ket(F, 2, {0}, 2.0), p, Side::Right), InvalidArgument);
  CHECK_THROWS_AS(reduced_density_matrix(ket(F, 3, {0}), p, Side::Right), DimensionMismatch);
}

TEST_CASE("mixtures are validated") {
  const Bipartition p = halves(2, 1);
  std::vector<MixtureComponent> bad_weights{{0.5, ket(F, 2, {0})}, {0.4, ket(F, 2, {1})}};
  CHECK_THROWS_AS(reduced_density_matrix(bad_weights, p, Side::Right), InvalidArgument);
  std::vector<MixtureComponent> negative{{1.5, ket(F, 2, {0})}, {-0.5, ket(F, 2, {1})}};
  CHECK_THROWS_AS(reduced_density_matrix(negative, p, Side::Right), InvalidArgument);
  std::vector<MixtureComponent> ok{{0.5, ket(F, 2, {0})}, {0.5, ket(F, 2, {1})}};
  const auto rho = reduced_density_matrix(ok, p, Side::Right);
  CHECK(rho.is_valid());
  CHECK(std::abs(von_neumann_entropy(rho) - 1.0) < 1e-12);
}

TEST_CASE("ssr_project") {
  const DensityMatrix block(F, {occ(F, {0}), occ(F, {1})}, SquareMatrix{{0.5, 0.1}, {0.1, 0.5}});
  CHECK(ssr_project(block, F).matrix() == block.matrix());

  const DensityMatrix odd(F, {occ(F, {0}), occ(F, {0, 1, 2})}, SquareMatrix{{0.5, 0.5}, {0.5, 0.5}});
  CHECK(ssr_project(odd, F).matrix() == odd.matrix());
  const DensityMatrix mixed_parity(F, {occ(F, {0}), occ(F, {0, 1})}, SquareMatrix{{0.5, 0.5}, {0.5, 0.5}});
  CHECK(ssr_project(mixed_parity, F).matrix()(0, 1) == Complex(0.0));

  const DensityMatrix boson(B, {occ(B, {0}), occ(B, {0, 0})}, SquareMatrix{{0.5, 0.5}, {0.5, 0.5}});
  const auto projected = ssr_project(boson, B);
  CHECK(projected.matrix()(0, 1) == Complex(0.0));
  CHECK(projected.matrix()(1, 0) == Complex(0.0));
  CHECK(projected.trace() == boson.trace());
}

TEST_CASE("von_neumann_entropy") {
  const DensityMatrix half(F, {occ(F, {0}), occ(F, {1})}, SquareMatrix{{0.5, 0.0}, {0.0, 0.5}});
  CHECK(std::abs(von_neumann_entropy(half) - 1.0) < 1e-15);
  const DensityMatrix pure(F, {occ(F, {0}), occ(F, {1})}, SquareMatrix{{0.5, 0.5}, {0.5, 0.5}});
  CHECK(std::abs(von_neumann_entropy(pure)) < 1e-12);
  const DensityMatrix bad(F, {occ(F, {0}), occ(F, {1})}, SquareMatrix{{1.1, 0.0}, {0.0, -0.1}});
  CHECK_THROWS_AS(von_neumann_entropy(bad), InvalidArgument);
}

TEST_CASE("lift_observable examples") {
  const Bipartition p = halves(4, 2);
  const SingleParticleSpace space(4);
  const auto id = lift_observable(LocalObservable::identity(Side::Left, p, 2, F), p, space, F);
  auto r = gen::rng(401);
  const auto v = gen::graded(r, F, 4, 4, 6);
  CHECK((id.apply(v) - v).norm() < 1e-14);

  const auto proj = lift_observable(LocalObservable::projector(Side::Left, occ(F, {0})), p, space, F);
  std::vector<MixtureComponent> state{{1.0, ket(F, 4, {0, 2})}};
  CHECK(std::abs(proj.expectation(state) - 1.0) < 1e-15);

  std::vector<OccupationState> basis{occ(F, {}), occ(F, {0}), occ(F, {1}), occ(F, {0, 1})};
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = LocalObservable::random_hermitian(Side::Left, basis, r);
    std::vector<MixtureComponent> rnd{{1.0, gen::graded(r, F, 4, 4, 6).normalized()}};
    CHECK(std::abs(lift_observable(k, p, space, F).expectation(rnd).imag()) < 1e-12);
  }

  const LocalObservable skew(Side::Left, {occ(F, {0}), occ(F, {1})}, SquareMatrix{{0.0, 1.0}, {-1.0, 0.0}});
  CHECK_FALSE(skew.hermitian());
  CHECK_THROWS_AS(lift_observable(skew, p, space, F).expectation(state), InvalidArgument);
}

TEST_CASE("restriction check on the three-fermion state") {
  std::vector<MixtureComponent> state{{1.0, three_fermion()}};
  const auto report = gns_restriction_check(state, halves(8, 4), 100, 7);
  CHECK(report.pass);
  CHECK(report.trials == 100);
  CHECK(report.max_residual <= 1e-10);
  CHECK(report.identity_residual <= 1e-12);
  CHECK(report.control_residual <= 1e-10);
  CHECK_THROWS_AS(gns_restriction_check(state, halves(8, 4), 0, 7), InvalidArgument);
}

TEST_CASE("restriction check is seed-deterministic") {
  std::vector<MixtureComponent> state{{1.0, three_fermion()}};
  const auto a = gns_restriction_check(state, halves(8, 4), 30, 99);
  const auto b = gns_restriction_check(state, halves(8, 4), 30, 99);
  CHECK(a.max_residual == b.max_residual);
}

TEST_CASE("two-particle restriction reproduces the overlap formula") {
  auto r = gen::rng(402);
  for (Statistics s : {F, B}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = gen::index(r, 2, 7);
      const auto [l, rt] = gen::split(r, d);
      const Bipartition p(SingleParticleSpace(d), l, rt);
      std::vector<Complex> c(l.size() * rt.size());
      for (auto& z : c) z = gen::complex(r);
      const auto x = gen::matrix(r, l.size());
      const SquareMatrix alpha = x + x.adjoint();
      const auto result = two_particle_restriction(c, alpha, p, s);
      CHECK(result.rdm_residual <= 1e-10);
      CHECK(std::abs(result.formula - result.restricted) <= 1e-10);
      CHECK(std::abs(result.restricted - result.full) <= 1e-10);
    }
  }
}

TEST_CASE("property: reduced states are valid and pure-state entropies are symmetric") {
  auto r = gen::rng(403);
  for (int trial = 0; trial < 150; ++trial) {
    const Statistics s = trial % 2 ? F : B;
    const std::size_t d = gen::index(r, 2, 6);
    const auto [l, rt] = gen::split(r, d);
    const Bipartition p(SingleParticleSpace(d), l, rt);
    const auto v = gen::graded(r, s, d, 4, 6);
    if (v.is_zero()) continue;
    const auto psi = v.normalized();
    const auto rho_l = reduced_density_matrix(psi, p, Side::Right);
    const auto rho_r = reduced_density_matrix(psi, p, Side::Left);
    CHECK(rho_l.is_valid());
    CHECK(rho_r.is_valid());
    CHECK(std::abs(von_neumann_entropy(rho_l) - von_neumann_entropy(rho_r)) <= 1e-9);

    const auto projected = ssr_project(rho_l, s);
    CHECK(projected.is_valid());
    CHECK(std::abs(projected.trace() - rho_l.trace()) < 1e-12);
    for (double e : projected.eigenvalues()) CHECK(e <= 1.0 + 1e-10);
  }
}

TEST_CASE("property: entropy is invariant under relabeling within each side") {
  auto r = gen::rng(404);
  for (int trial = 0; trial < 80; ++trial) {
    const Statistics s = trial % 2 ? F : B;
    const std::size_t d = gen::index(r, 2, 6);
    const auto [l, rt] = gen::split(r, d);
    const Bipartition p(SingleParticleSpace(d), l, rt);
    std::vector<int> map(d);
    for (const auto* side : {&l, &rt}) {
      std::vector<int> from(side->begin(), side->end()), to = from;
      std::shuffle(to.begin(), to.end(), r);
      for (std::size_t i = 0; i < from.size(); ++i) map[static_cast<std::size_t>(from[i])] = to[i];
    }
    const auto v = gen::graded(r, s, d, 3, 5);
    if (v.is_zero()) continue;
    const auto psi = v.normalized();
    const double before = von_neumann_entropy(reduced_density_matrix(psi, p, Side::Right));
    const double after = von_neumann_entropy(reduced_density_matrix(relabel(psi, map), p, Side::Right));
    CHECK(std::abs(before - after) <= 1e-9);
  }
}

TEST_CASE("property: restriction check over random mixtures") {
  auto r = gen::rng(405);
  for (int trial = 0; trial < 30; ++trial) {
    const Statistics s = trial % 2 ? F : B;
    const std::size_t d = gen::index(r, 2, 5);
    const auto [l, rt] = gen::split(r, d);
    const Bipartition p(SingleParticleSpace(d), l, rt);
    std::vector<MixtureComponent> mixture;
    const std::size_t k = gen::index(r, 1, 3);
    for (std::size_t i = 0; i < k; ++i) {
      GradedVector v = gen::graded(r, s, d, 3, 4);
      while (v.is_zero()) v = gen::graded(r, s, d, 3, 4);
      mixture.push_back({1.0 / static_cast<double>(k), v.normalized()});
    }
    const auto report = gns_restriction_check(mixture, p, 20, derive_seed(405, static_cast<std::uint64_t>(trial)));
    CHECK(report.pass);
    CHECK(report.max_residual <= 1e-10);
  }
}

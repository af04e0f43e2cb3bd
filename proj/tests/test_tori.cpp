#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctt/tori.hpp"

using namespace ctt;

namespace {

TowerPtr qp(int p, int M) { return Tower::base(make_base(Kind::mixed, p, 1, M)); }
TowerPtr laurent(int p, int M, int f = 1) { return Tower::base(make_base(Kind::equal, p, f, M)); }

TowerPtr sqrt_pi(const TowerPtr& t) {
  return t->with_eisenstein({t->neg(t->top(), t->uniformizer()), t->zero(t->top())});
}

bool all_zero(const FgAbelianGroup& g, const IVec& x) { return g.is_zero(x); }

}  // namespace

TEST_CASE("split G_m points equal the unit quotient") {
  auto F = laurent(3, 6);
  auto P = torus_points(split_torus(F, F), Rat(2));
  CHECK(P.level == 2);
  CHECK(P.points.abstract().str() == "Z x Z/6");
  CHECK(P.points.abstract().str() == unit_quotient(F, 2).group.str());
  CHECK(P.exact);
  // Kottwitz of the uniformizer is 1
  IVec pi = project(P.G, F->uniformizer());
  CHECK(P.kottwitz(pi) == IVec{1});
  CHECK(P.kottwitz_target.abstract().str() == "Z");
  // all three filtrations coincide for r > 0
  for (int s = 1; s <= 2; ++s) {
    auto naive = naive_filtration(P, Rat(s));
    CHECK(standard_filtration(P, Rat(s)).equals(naive));
    CHECK(congruent_filtration(P, Rat(s)).equals(naive));
  }
  CHECK(naive_filtration(P, Rat(1)).order() == 3);  // (1 + t F_3[t]) / (1 + t^2)
}

TEST_CASE("Weil restriction along a tame quadratic") {
  auto F = laurent(3, 6);
  auto E = sqrt_pi(F);
  auto R = weil_restriction(F, E);
  CHECK(R.lattice.rank == 2);
  CHECK(R.lattice.action[1] == Mat::from_rows({{0, 1}, {1, 0}}));
  auto P = torus_points(R, Rat(1));
  CHECK(P.level == 2);
  // R(F) = E^x, naive level e r = 2
  CHECK(P.points.abstract().str() == unit_quotient(E, 2).group.str());
  CHECK(P.points.abstract().str() == "Z x Z/6");
  // Kottwitz of pi_E is 1 in the coinvariants Z
  IVec e0(P.inclusion.source.ambient(), 0);
  e0[0] = 1;
  IVec t = P.inclusion.apply(e0);
  CHECK(P.coinvariants.str() == "Z");
  CHECK(P.coinvariants.equal(P.kottwitz(t), IVec{1, 0}));
  CHECK(weakly_induced(R));
  // weil_restrict of split G_m over E reproduces the catalog lattice
  auto R2 = weil_restrict(split_torus(E, E), F);
  CHECK(R2.tag == CatalogTag::weil_restriction);
  CHECK(R2.lattice.action[1] == R.lattice.action[1]);
}

TEST_CASE("induced lattices") {
  auto F = laurent(3, 4);
  auto U3 = extend_unramified(F, 3);
  auto R = weil_restrict(split_torus(U3, U3), F);
  CHECK(R.lattice.rank == 3);
  CHECK(R.lattice.order() == 3);
  for (const auto& A : R.lattice.action) {
    // permutation matrices
    for (size_t j = 0; j < 3; ++j) {
      int ones = 0;
      for (size_t i = 0; i < 3; ++i) ones += A(i, j) == 1 ? 1 : (A(i, j) == 0 ? 0 : 100);
      CHECK(ones == 1);
    }
  }
  // transitivity: Res_{E1/F} Res_{E2/E1} G_m = Res_{E2/F} G_m as permutation lattices
  auto E1 = extend_unramified(laurent(7, 3), 2);
  auto E2 = E1->with_eisenstein({E1->neg(E1->top(), E1->uniformizer()), E1->zero(E1->top())});
  auto F0 = laurent(7, 3);
  auto inner = weil_restrict(split_torus(E2, E2), E1);
  auto twice = weil_restrict(inner, F0);
  auto once = weil_restrict(split_torus(E2, E2), F0);
  REQUIRE(twice.lattice.rank == 4);
  REQUIRE(once.lattice.rank == 4);
  for (size_t s = 0; s < once.lattice.order(); ++s) {
    Int tr1 = 0, tr2 = 0;
    for (size_t i = 0; i < 4; ++i) {
      tr1 += once.lattice.action[s](i, i);
      tr2 += twice.lattice.action[s](i, i);
    }
    CHECK(tr1 == tr2);
  }
}

TEST_CASE("diagonal and norm lattice maps") {
  auto F = laurent(3, 6);
  auto E = sqrt_pi(F);
  auto dn = diagonal_and_norm(split_torus(F, E), E);
  CHECK(dn.diagonal_dual == Mat::from_rows({{1, 1}}));
  CHECK(dn.norm_dual == Mat::from_rows({{1}, {1}}));
  CHECK(dn.diagonal_dual * dn.norm_dual == Mat::from_rows({{2}}));
  // corrupted action is refused
  std::vector<Automorphism> gamma;
  auto skel = galois_skeleton(F, E, gamma);
  CHECK_THROWS_AS(general_torus(F, E, {{1, Mat::from_rows({{1, 1}, {0, 1}})}}), std::invalid_argument);
  CHECK_FALSE(is_equivariant(dn.res.lattice, split_torus(F, E).lattice, Mat::from_rows({{1, 0}})));
}

TEST_CASE("norm one torus of the unramified quadratic over F_3((t))") {
  auto F = laurent(3, 4);
  auto E = extend_unramified(F, 2);
  auto T = norm_one(F, E);
  CHECK(T.lattice.rank == 1);
  auto P = torus_points(T, Rat(1));
  CHECK(P.points.abstract().is_finite());
  // brute force: residues x in F_9^x with x * x^3 = 1
  int brute = 0;
  for (uint64_t c = 1; c < 9; ++c) {
    Vec x = E->from_class(c, 1);
    if (E->class_index(E->pow(x, 4), 1) == 1) {
      ++brute;
      CHECK(P.points.contains(project(P.G, x)));
    } else {
      CHECK_FALSE(P.points.contains(project(P.G, x)));
    }
  }
  CHECK(brute == 4);
  CHECK(P.points.order() == 4);
  // Kottwitz target: Frobenius acts by -1 on Z, invariants vanish
  CHECK(P.coinvariants.str() == "Z");
  CHECK(P.kottwitz_target.order() == 1);
  CHECK(default_stage_degree(T) == 2);
  for (const auto& x : P.enumerate(2, 10000)) CHECK(all_zero(P.coinvariants, P.kottwitz(x)));
}

TEST_CASE("norm one of a ramified quadratic: bounded part strictly contains the Iwahori") {
  auto F = laurent(3, 6);
  auto E = sqrt_pi(F);
  auto P = torus_points(norm_one(F, E), Rat(1));
  CHECK(P.coinvariants.str() == "Z/2");
  auto bounded = bounded_part(P);
  auto iw = iwahori_subgroup(P);
  CHECK(bounded.contains(iw));
  CHECK_FALSE(iw.contains(bounded));
  CHECK(bounded.order() == 2 * iw.order());
  // pi_E / sigma(pi_E) = -1 has nontrivial Kottwitz value
  IVec minus_one = project(P.G, E->from_int(E->top(), -1));
  CHECK(P.points.contains(minus_one));
  CHECK_FALSE(all_zero(P.coinvariants, P.kottwitz(minus_one)));
  CHECK(weakly_induced(P.spec));
}

TEST_CASE("filtration chain, naive level zero and Kottwitz properties") {
  auto F = laurent(3, 8);
  auto E = sqrt_pi(F);
  std::vector<TorusSpec> specs{split_torus(F, F), split_torus(F, E), weil_restriction(F, E), norm_one(F, E)};
  for (const auto& T : specs) {
    CAPTURE(T.label);
    auto P = torus_points(T, Rat(3));
    auto elems = P.enumerate(2, 10000);
    auto b = naive_filtration(P, Rat(0));
    for (const auto& x : elems) {
      bool vz = true;
      for (auto v : P.valuations(x)) vz = vz && v == 0;
      CHECK(b.contains(x) == vz);
    }
    for (int s = 1; s <= 3; ++s) {
      auto nv = naive_filtration(P, Rat(s));
      auto st = standard_filtration(P, Rat(s));
      CHECK(nv.contains(st));
      CHECK(st.equals(nv));
      CHECK(congruent_filtration(P, Rat(s)).equals(st));
      for (const auto& g : nv.gens) CHECK(all_zero(P.coinvariants, P.kottwitz(g)));
    }
    // Kottwitz is a homomorphism
    for (size_t i = 0; i < elems.size(); i += 7)
      for (size_t j = 0; j < elems.size(); j += 5) {
        IVec sum = P.kottwitz(P.tuples.add(elems[i], elems[j]));
        CHECK(P.coinvariants.equal(sum, P.coinvariants.add(P.kottwitz(elems[i]), P.kottwitz(elems[j]))));
      }
  }
}

TEST_CASE("naive filtration is compatible with enlarging the splitting field") {
  auto F = laurent(3, 8);
  auto E = sqrt_pi(F);
  auto PF = torus_points(split_torus(F, F), Rat(3));
  auto PE = torus_points(split_torus(F, E), Rat(3));
  auto inc = unit_inclusion(PF.G, PE.G);
  for (const auto& x : PF.enumerate(2, 10000)) {
    IVec y = inc.apply(x);
    CHECK(PE.points.contains(y));
    for (int s = 1; s <= 3; ++s) CHECK(naive_filtration(PF, Rat(s)).contains(x) == naive_filtration(PE, Rat(s)).contains(y));
  }
}

TEST_CASE("weakly induced predicate") {
  auto Q2 = qp(2, 10);
  auto E = sqrt_pi(Q2);  // wild
  CHECK_FALSE(weakly_induced(norm_one(Q2, E)));
  CHECK(weakly_induced(weil_restriction(Q2, E)));
  CHECK(weakly_induced(split_torus(Q2, Q2)));
  auto P = torus_points(norm_one(Q2, E), Rat(1));
  CHECK_THROWS_WITH_AS(congruent_filtration(P, Rat(1)), doctest::Contains("not weakly induced"), std::invalid_argument);
  // -1 = pi_E / sigma(pi_E) is 1 modulo p_E^2, but has Kottwitz value 1 in Z/2
  CHECK_FALSE(P.kottwitz_defined);
  CHECK_THROWS_AS(P.kottwitz(P.points.gens[0]), std::invalid_argument);
  CHECK(bounded_part(P).contains(iwahori_subgroup(P)));
  auto P2 = torus_points(norm_one(Q2, E), Rat(2));
  CHECK(P2.kottwitz_defined);
  IVec minus_one = project(P2.G, E->from_int(E->top(), -1));
  CHECK_FALSE(P2.coinvariants.is_zero(P2.kottwitz(minus_one)));
}

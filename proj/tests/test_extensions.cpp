#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ctt/extensions.hpp"

using namespace ctt;

namespace {

TowerPtr qp(int p, int M) { return Tower::base(make_base(Kind::mixed, p, 1, M)); }
TowerPtr laurent(int p, int M, int f = 1) { return Tower::base(make_base(Kind::equal, p, f, M)); }

// x^d - a*pi over the top of t
TowerPtr binomial(const TowerPtr& t, int d, int64_t a = 1) {
  std::vector<Vec> poly(static_cast<size_t>(d), t->zero(t->top()));
  Vec pi = t->uniformizer();
  Vec c = t->mul(pi, t->from_int(t->top(), a));
  poly[0] = t->sub(t->zero(t->top()), c);
  return t->with_eisenstein(poly);
}

bool same_pl(const PiecewiseLinear& a, const PiecewiseLinear& b) { return a.xs == b.xs && a.slopes == b.slopes; }

}  // namespace

TEST_CASE("galois group of Q_2(sqrt 2) and its ramification") {
  auto E = binomial(qp(2, 8), 2, 1);  // x^2 - 2
  auto G = galois_group(*E, 0, 1);
  REQUIRE(G.size() == 2);
  auto h = ramification_breaks(E);
  // sigma(pi) - pi = -2 pi has valuation 3: lower break 2
  REQUIRE(h.breaks.size() == 1);
  CHECK(h.breaks[0].first == 2);
  CHECK(h.breaks[0].second == 2);
  CHECK(h.e == 2);
  CHECK(h.different_val == 3);
  CHECK(different_from_derivative(E, 1) == 3);
  CHECK(h.psi(Rat(3)) == 4);
  CHECK(h.phi(Rat(4)) == 3);
  CHECK(h.upper_breaks()[0] == 2);
  CHECK(l_one(h, 3) == 4);
  CHECK_THROWS_AS(l_one(h, 2), std::invalid_argument);
  CHECK_FALSE(at_most_l_ramified(h, 2));
  CHECK(lleq(Rat(2), 3, h));
  CHECK_FALSE(lleq(Rat(5, 2), 3, h));
}

TEST_CASE("tame ramification has phi(r) = r/e") {
  auto E = binomial(laurent(7, 6), 3);  // x^3 - t, F_7 has cube roots of unity
  auto G = galois_group(*E, E->top() - 1, E->top());
  CHECK(G.size() == 3);
  auto h = ramification_breaks(E);
  CHECK(h.e == 3);
  CHECK(same_pl(h.phi, PiecewiseLinear::linear(Rat(1, 3))));
  CHECK(h.different_val == 2);
  CHECK(different_from_derivative(E, E->top()) == 2);
  CHECK(l_one(h, 2) == 6);
  for (int l = 1; l < 6; ++l) CHECK(l_one(h, l) == 3 * l);
  // cubic over F_3((t)) is not Galois: no cube roots of unity, wild
  CHECK_THROWS_AS(galois_group(*binomial(laurent(5, 6), 3), 1, 2), std::invalid_argument);
}

TEST_CASE("unramified steps: Frobenius and trivial Herbrand data") {
  auto U = extend_unramified(qp(3, 5), 2);
  auto G = galois_group(*U, 0, 1);
  CHECK(G.size() == 2);
  auto fr = frobenius(*U, 1);
  CHECK(is_ring_endomorphism(*U, fr));
  CHECK_FALSE(is_inertia(*U, fr));
  CHECK(same_aut(compose(*U, fr, fr), identity_aut(*U, 1)));
  auto h = ramification_breaks(U);
  CHECK(h.e == 1);
  CHECK(h.breaks.empty());
  CHECK(h.different_val == 0);
  CHECK(l_one(h, 3) == 3);
  auto tab = composition_table(*U, G);
  CHECK(tab.size() == 2);
}

TEST_CASE("piecewise linear inverse and composition") {
  PiecewiseLinear f{{Rat(2)}, {Rat(1), Rat(1, 2)}};
  auto g = f.inverse();
  for (int x = 0; x < 10; ++x) CHECK(g(f(Rat(x))) == x);
  auto ff = f.compose(f);
  for (int x = 0; x < 10; ++x) CHECK(ff(Rat(x)) == f(f(Rat(x))));
}

TEST_CASE("transitivity of Herbrand functions in towers") {
  struct Case {
    const char* name;
    TowerPtr t;
  };
  std::vector<Case> cases;
  {
    auto u = extend_unramified(laurent(3, 6), 2);
    cases.push_back({"F3((t)) unram2 then x^2-t", binomial(u, 2)});
  }
  {
    auto u = extend_unramified(laurent(7, 4), 2);
    cases.push_back({"F7((t)) unram2 then x^3-t", binomial(u, 3)});
  }
  cases.push_back({"F7((t)) x^2-t then x^3-pi", binomial(binomial(laurent(7, 3), 2), 3)});
  cases.push_back({"Q2 sqrt2 then unram2", extend_unramified(binomial(qp(2, 8), 2), 2)});
  for (auto& c : cases) {
    CAPTURE(c.name);
    const int top = c.t->top();
    const int base = c.t->base_top();
    auto whole = ramification_breaks(c.t, base, top);
    auto outer = ramification_breaks(c.t, base, top - 1);
    auto inner = ramification_breaks(c.t, top - 1, top);
    auto comp = compose_herbrand(outer, inner);
    CHECK(same_pl(whole.phi, comp.phi));
    CHECK(same_pl(whole.psi, comp.psi));
    CHECK(whole.e == comp.e);
    CHECK(whole.different_val == comp.different_val);
    CHECK(whole.breaks == comp.breaks);
    CHECK(galois_group(*c.t, base, top).size() == static_cast<size_t>(c.t->e() * c.t->f() / c.t->base_field().f));
  }
}

TEST_CASE("certifying close pairs") {
  auto Q3 = qp(3, 6);
  auto L3 = laurent(3, 6);
  CHECK_NOTHROW(certify_close(Q3, L3, 1));
  CHECK_THROWS_WITH_AS(certify_close(Q3, L3, 2), doctest::Contains("differ at level 2"), std::invalid_argument);
  auto R = binomial(Q3, 2);  // Q_3(sqrt 3)
  auto c = certify_close(R, L3, 2);
  CHECK(c.level == 2);
  CHECK_THROWS_AS(certify_close(R, L3, 3), std::invalid_argument);
  CHECK_THROWS_WITH_AS(certify_close(Q3, laurent(3, 6, 2), 1), doctest::Contains("residue field mismatch"),
                       std::invalid_argument);
  CHECK_THROWS_AS(certify_close(Q3, qp(5, 4), 1), std::invalid_argument);
  // pi image must have valuation one
  CHECK_THROWS_AS(certify_close(R, L3, 2, L3->mul(L3->uniformizer(), L3->uniformizer())), std::invalid_argument);
}

TEST_CASE("transport is a ring isomorphism and inverts") {
  auto R = binomial(qp(3, 6), 2);
  auto L3 = laurent(3, 6);
  for (int l = 1; l <= 2; ++l) {
    auto c = certify_close(R, L3, l);
    auto back = invert(c);
    const uint64_t n = R->class_count(l);
    std::set<uint64_t> seen;
    for (uint64_t i = 0; i < n; ++i) {
      Vec x = R->from_class(i, l);
      uint64_t tx = transport_class(c, x, l);
      seen.insert(tx);
      CHECK(transport_class(back, L3->from_class(tx, l), l) == i);
      for (uint64_t j = 0; j < n; ++j) {
        Vec y = R->from_class(j, l);
        Vec tx_ = transport(c, x, l), ty = transport(c, y, l);
        CHECK(transport_class(c, R->add(x, y), l) == L3->class_index(L3->add(tx_, ty), l));
        CHECK(transport_class(c, R->mul(x, y), l) == L3->class_index(L3->mul(tx_, ty), l));
      }
    }
    CHECK(seen.size() == n);
  }
}

TEST_CASE("transferring extensions across a close pair") {
  auto R = binomial(qp(3, 6), 2);
  auto L3 = laurent(3, 6);
  auto c = certify_close(R, L3, 2);
  StepSpec s;
  s.kind = StepKind::eisenstein;
  s.degree = 2;
  s.poly = {R->neg(R->top(), R->uniformizer()), R->zero(R->top())};  // x^2 - pi
  auto r = transfer_extension(c, s);
  CHECK(r.l1 == 4);
  CHECK(r.cert.level == 4);
  CHECK(r.E2->kind() == Kind::equal);
  CHECK(r.E2->e() == 2);
  CHECK(same_pl(r.herbrand.phi, r.herbrand2.phi));

  auto c1 = certify_close(R, L3, 1);
  StepSpec bad = s;
  bad.poly[0] = R->neg(R->top(), R->mul(R->from_int(R->top(), 3), R->uniformizer()));  // x^2 - 3 pi
  CHECK_THROWS_WITH_AS(transfer_extension(c1, bad), doctest::Contains("not determined at level 1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(transfer_extension(c1, s), std::invalid_argument);

  StepSpec u;
  u.kind = StepKind::unramified;
  u.degree = 2;
  auto ru = transfer_extension(c, u);
  CHECK(ru.l1 == 2);
  CHECK(ru.E->f() == 2);
  CHECK(ru.E2->f() == 2);
}

TEST_CASE("transfer of a wild quadratic over Q_2 to F_2((t))") {
  // Q_2(sqrt 2) ~ F_2((t)) at level 2 since 2 = pi^2 * unit
  auto R = binomial(qp(2, 10), 2);
  auto L2 = laurent(2, 10);
  auto c = certify_close(R, L2, 2);
  StepSpec s;
  s.kind = StepKind::eisenstein;
  s.degree = 2;
  s.poly = {R->neg(R->top(), R->uniformizer()), R->zero(R->top())};
  // x^2 - pi over Q_2(sqrt 2) has upper break >= 2: not at most 2-ramified
  CHECK_THROWS_AS(transfer_extension(c, s), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ctt/truncated_arith.hpp"

using namespace ctt;

namespace {

// independent oracle: extended Euclid over the integers
int64_t egcd_inverse(int64_t a, int64_t m) {
  int64_t r0 = m, r1 = a % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    int64_t qq = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - qq * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - qq * s1);
  }
  REQUIRE(r0 == 1);
  return ((s0 % m) + m) % m;
}

TowerPtr sqrt_p(int p, int M) {
  auto b = Tower::base(make_base(Kind::mixed, p, 1, M));
  // x^2 - p
  return b->with_eisenstein({b->from_int(0, -p), b->zero(0)});
}

TowerPtr laurent(int p, int f, int M) { return Tower::base(make_base(Kind::equal, p, f, M)); }

Vec random_elem(const Tower& t, std::mt19937_64& rng) {
  Vec v(t.dim(t.top()));
  std::uniform_int_distribution<int64_t> d(0, t.modulus() - 1);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("make_base validation") {
  CHECK_THROWS_AS(make_base(Kind::mixed, 4, 1, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_base(Kind::equal, 3, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_base(Kind::equal, 3, 1, 0), std::invalid_argument);
  auto b = make_base(Kind::equal, 3, 1, 8);
  CHECK(b.p == 3);
  CHECK(b.M == 8);
  auto t = Tower::base(make_base(Kind::mixed, 2, 1, 8));
  CHECK(t->modulus() == 256);
  CHECK(t->precision() == 8);
}

TEST_CASE("inverse of 3 mod 2^8") {
  auto t = Tower::base(make_base(Kind::mixed, 2, 1, 8));
  Vec x = t->from_int(0, 3);
  CHECK(t->inv(x)[0] == egcd_inverse(3, 256));
  CHECK(t->inv(x)[0] == 171);
  for (int64_t a = 1; a < 256; a += 2) CHECK(t->inv(t->from_int(0, a))[0] == egcd_inverse(a, 256));
  CHECK_THROWS_AS(t->inv(t->from_int(0, 2)), std::invalid_argument);
}

TEST_CASE("laurent polynomial identity and non-unit") {
  auto t = laurent(3, 1, 8);
  Vec tt = t->uniformizer();
  Vec a = t->add(t->one(), tt);
  Vec b = t->sub(t->one(), tt);
  Vec expect = t->sub(t->one(), t->mul(tt, tt));
  CHECK(t->mul(a, b) == expect);
  CHECK_THROWS_AS(t->inv(tt), std::invalid_argument);
}

TEST_CASE("valuations") {
  auto t = sqrt_p(3, 6);
  Vec pi = t->uniformizer();
  CHECK(t->valuation(t->pow(pi, 3)) == 3);
  CHECK(t->valuation(t->from_int(1, 3)) == 2);
  CHECK(t->valuation(t->zero(1)) == t->precision());
  CHECK(t->precision() == 12);
  // divide-by-pi oracle for p
  Vec x = t->from_int(1, 3);
  int n = 0;
  while (t->val(1, x) >= 1 && n < 20) {
    x = t->div_pi(1, x);
    ++n;
  }
  CHECK(n == 2);
  CHECK(t->val(1, x) == 0);
}

TEST_CASE("truncate examples") {
  auto t = sqrt_p(3, 6);
  Vec pi = t->uniformizer();
  Vec x = t->add(t->add(t->one(), pi), t->pow(pi, 5));
  auto d = t->truncate(x, 2);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == Digit{1});
  CHECK(d[1] == Digit{1});
  auto d3 = t->truncate(t->from_int(1, 3), 2);
  CHECK(d3[0] == Digit{0});
  CHECK(d3[1] == Digit{0});
  CHECK_THROWS_AS(t->truncate(x, static_cast<int>(t->precision()) + 1), std::invalid_argument);
  // p = pi^2 : digits (0,0,1)
  auto d4 = t->truncate(t->from_int(1, 3), 3);
  CHECK(d4[2] == Digit{1});
  // -1 = 2 + 2*3 + 2*9 + ... in the pi-digit expansion: 2 + 2 pi^2 + ...
  auto dm = t->truncate(t->from_int(1, -1), 4);
  CHECK(dm[0] == Digit{2});
  CHECK(dm[1] == Digit{0});
  CHECK(dm[2] == Digit{2});
  CHECK(dm[3] == Digit{0});
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(7);
  std::vector<TowerPtr> towers = {sqrt_p(3, 5), laurent(3, 2, 6), sqrt_p(2, 6), Tower::base(make_base(Kind::mixed, 5, 2, 4))};
  for (auto& t : towers) {
    for (int it = 0; it < 60; ++it) {
      Vec a = random_elem(*t, rng), b = random_elem(*t, rng), c = random_elem(*t, rng);
      CHECK(t->mul(t->mul(a, b), c) == t->mul(a, t->mul(b, c)));
      CHECK(t->mul(a, t->add(b, c)) == t->add(t->mul(a, b), t->mul(a, c)));
      CHECK(t->mul(a, b) == t->mul(b, a));
      if (t->valuation(a) == 0) CHECK(t->mul(a, t->inv(a)) == t->one());
      int64_t va = t->valuation(a), vb = t->valuation(b);
      if (va + vb < t->precision()) CHECK(t->valuation(t->mul(a, b)) == va + vb);
    }
  }
}

TEST_CASE("truncate is a ring homomorphism, exhaustively for small towers") {
  std::vector<TowerPtr> towers = {sqrt_p(3, 3), laurent(2, 2, 4), sqrt_p(2, 3)};
  for (auto& t : towers) {
    for (int l = 1; l <= 3; ++l) {
      uint64_t n = t->class_count(l);
      for (uint64_t a = 0; a < n; ++a) {
        Vec x = t->from_class(a, l);
        CHECK(t->class_index(x, l) == a);  // round trip
        for (uint64_t b = 0; b < n; ++b) {
          Vec y = t->from_class(b, l);
          // shift representatives by pi^l to exercise well-definedness
          Vec y2 = t->add(y, t->pow(t->uniformizer(), static_cast<uint64_t>(l)));
          CHECK(t->class_index(t->add(x, y2), l) == t->class_index(t->add(x, y), l));
          CHECK(t->class_index(t->mul(x, y2), l) == t->class_index(t->mul(x, y), l));
        }
      }
    }
  }
}

TEST_CASE("residue field extension of the base") {
  auto t = Tower::base(make_base(Kind::mixed, 2, 2, 8));
  CHECK(t->q() == 4);
  CHECK(t->f() == 2);
  // the chosen residue polynomial is x^2 + x + 1
  const auto& L = t->layer(t->top());
  REQUIRE(L.residue_poly.size() == 2);
  CHECK(L.residue_poly[0] == Digit{1});
  CHECK(L.residue_poly[1] == Digit{1});
  Vec y = t->gen(t->top());
  CHECK(t->valuation(t->pow(y, 3)) == 0);
  CHECK(t->truncate(t->pow(y, 3), 1)[0] == Digit{1, 0});
  CHECK(residue_irreducible(*t, 0, {{1}, {1}}));
  CHECK_FALSE(residue_irreducible(*t, 0, {{1}, {0}}));
}

TEST_CASE("truncated triple") {
  auto t = sqrt_p(3, 4);
  auto T = truncated_triple(t, 2);
  CHECK(T.size() == 9);
  CHECK(T.uniformizer_class() == 3);
  CHECK(T.mul(T.uniformizer_class(), T.uniformizer_class()) == 0);
  CHECK(T.add(1, 2) == 0);
  CHECK_THROWS_AS(truncated_triple(t, 9), std::invalid_argument);
}

TEST_CASE("element wrapper refuses mixed towers") {
  auto a = element(sqrt_p(3, 4), 2);
  auto b = element(sqrt_p(3, 4), 2);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK((a * a.inv()) == element(a.tower, 1));
}

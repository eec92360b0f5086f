#include <doctest.h>

#include <random>

#include "stacked/ring.hpp"

using namespace stacked;

namespace {

Element rnd(const RingPtr& r, std::mt19937_64& g, long b) {
  switch (r->kind()) {
    case Ring::Kind::Integers:
      return r->from_int(Int(-b + (long)(g() % (2 * b + 1))));
    case Ring::Kind::Residue:
      return r->from_int(Int((long)(g() % 1000)));
    case Ring::Kind::Quadratic:
      return r->make_quad(Int(-b + (long)(g() % (2 * b + 1))),
                          Int(-b + (long)(g() % (2 * b + 1))));
    case Ring::Kind::Product: {
      std::vector<Element> t;
      for (auto& f : r->factors()) t.push_back(rnd(f, g, b));
      return r->make_tuple(t);
    }
  }
  throw std::logic_error("");
}

}  // namespace

TEST_CASE("descriptor construction and validation") {
  CHECK(Ring::integers()->to_string() == "Z");
  CHECK(Ring::residue(12)->to_string() == "Z/12");
  CHECK(Ring::quadratic(-5)->to_string() == "Q[-5]");
  CHECK_THROWS_AS(Ring::residue(1), DomainError);
  CHECK_THROWS_AS(Ring::quadratic(12), DomainError);   // not squarefree
  CHECK_THROWS_AS(Ring::quadratic(1), DomainError);
  CHECK_THROWS_AS(Ring::quadratic(-5, false), DomainError);  // non-maximal
  auto p = Ring::product({Ring::integers(),
                          Ring::product({Ring::residue(6), Ring::integers()})});
  CHECK(p->factors().size() == 3);  // nesting flattened
  CHECK_THROWS_AS(Ring::product({Ring::integers()}), DomainError);
}

TEST_CASE("arithmetic examples") {
  auto Q5 = Ring::quadratic(-5);
  CHECK(Q5->mul(Q5->make_quad(1, 1), Q5->make_quad(1, -1)) == Q5->from_int(6));
  auto Z12 = Ring::residue(12);
  CHECK(arith(ArithOp::Add, Z12->from_int(7), Z12->from_int(8)) ==
        Z12->from_int(3));
  auto ZZ = Ring::product({Ring::integers(), Ring::integers()});
  Element a = ZZ->element_parse("(2, 3)");
  Element b = ZZ->element_parse("(0, 4)");
  CHECK(ZZ->mul(a, b) == ZZ->element_parse("(0, 12)"));
}

TEST_CASE("ring laws on sampled elements") {
  std::mt19937_64 g(23);
  std::vector<RingPtr> rings = {
      Ring::integers(), Ring::residue(12), Ring::quadratic(-5),
      Ring::quadratic(5), Ring::quadratic(-7),
      Ring::product({Ring::residue(6), Ring::integers()})};
  for (auto& r : rings) {
    for (int t = 0; t < 30; ++t) {
      Element x = rnd(r, g, 9), y = rnd(r, g, 9), z = rnd(r, g, 9);
      CHECK(r->add(x, y) == r->add(y, x));
      CHECK(r->mul(x, y) == r->mul(y, x));
      CHECK(r->add(r->add(x, y), z) == r->add(x, r->add(y, z)));
      CHECK(r->mul(r->mul(x, y), z) == r->mul(x, r->mul(y, z)));
      CHECK(r->mul(x, r->add(y, z)) == r->add(r->mul(x, y), r->mul(x, z)));
      CHECK(r->add(x, r->neg(x)).is_zero());
      CHECK(r->mul(x, r->one()) == x);
    }
  }
}

TEST_CASE("units and zero divisors") {
  auto Z12 = Ring::residue(12);
  CHECK(is_unit(Z12->from_int(11)));
  CHECK(!is_unit(Z12->from_int(4)));
  auto ZZ = Ring::product({Ring::integers(), Ring::integers()});
  CHECK(!is_unit(ZZ->element_parse("(1, 2)")));
  auto Q5 = Ring::quadratic(-5);
  CHECK(!is_unit(Q5->make_quad(2, 1)));  // norm 9
  CHECK(is_unit(Q5->from_int(-1)));
  CHECK(is_zero_divisor(Z12->from_int(4)));
  CHECK(is_zero_divisor(ZZ->element_parse("(1, 0)")));
  CHECK(!is_zero_divisor(Ring::integers()->from_int(3)));
  // units have exact inverses
  std::mt19937_64 g(29);
  for (int t = 0; t < 40; ++t) {
    Element x = rnd(Z12, g, 0);
    if (!is_unit(x)) continue;
    auto inv = Z12->inverse_of_unit(x);
    REQUIRE(inv);
    CHECK(Z12->mul(x, *inv) == Z12->one());
  }
  // quadratic conj/norm: N(xy) = N(x)N(y)
  for (int t = 0; t < 40; ++t) {
    Element x = rnd(Q5, g, 9), y = rnd(Q5, g, 9);
    CHECK(Q5->norm(Q5->mul(x, y)) == Q5->norm(x) * Q5->norm(y));
    CHECK(Q5->mul(x, Q5->conj(x)) == Q5->from_int(Q5->norm(x)));
  }
  // same laws in the d = 1 mod 4 parametrisation
  auto Q13 = Ring::quadratic(13);
  for (int t = 0; t < 40; ++t) {
    Element x = rnd(Q13, g, 9), y = rnd(Q13, g, 9);
    CHECK(Q13->norm(Q13->mul(x, y)) == Q13->norm(x) * Q13->norm(y));
    CHECK(Q13->mul(x, Q13->conj(x)) == Q13->from_int(Q13->norm(x)));
  }
}

TEST_CASE("idempotent classification on Z x Z by exhaustive search") {
  auto ZZ = Ring::product({Ring::integers(), Ring::integers()});
  std::vector<Element> found;
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      Element e = ZZ->make_tuple({Ring::integers()->from_int(a),
                                  Ring::integers()->from_int(b)});
      if (ZZ->is_idempotent_value(e)) found.push_back(e);
    }
  CHECK(found.size() == 4);  // exactly the 0/1 masks
  CHECK(ZZ->idempotents().size() == 4);
}

TEST_CASE("annihilator idempotents") {
  auto Z = Ring::integers();
  CHECK(annihilator_idempotent({Z->from_int(5)}).value() == Z->zero());
  CHECK(annihilator_idempotent({Z->zero()}).value() == Z->one());
  auto Z6 = Ring::residue(6);
  CHECK(annihilator_idempotent({Z6->from_int(2)}).value() == Z6->from_int(3));
  auto ZZ = Ring::product({Z, Z});
  CHECK(annihilator_idempotent({ZZ->element_parse("(1, 0)")}).value() ==
        ZZ->element_parse("(0, 1)"));
  // the result annihilates the generators, exhaustively on Z/12
  auto Z12 = Ring::residue(12);
  for (long a = 0; a < 12; ++a) {
    Element f = annihilator_idempotent({Z12->from_int(a)}).value();
    CHECK(Z12->mul(f, Z12->from_int(a)).is_zero());
    // maximality: any idempotent killing a divides f
    for (const Element& e : Z12->idempotents())
      if (Z12->mul(e, Z12->from_int(a)).is_zero()) CHECK(Z12->mul(e, f) == e);
  }
}

TEST_CASE("bezout data") {
  auto Z = Ring::integers();
  BezoutData b = bezout_data(Z->from_int(4), Z->from_int(6));
  CHECK(b.d == Z->from_int(2));
  CHECK(b.a1 == Z->from_int(2));
  CHECK(b.b1 == Z->from_int(3));
  CHECK(Z->add(Z->mul(b.u, Z->from_int(4)), Z->mul(b.v, Z->from_int(6))) == b.d);
  // zero ideal
  BezoutData z0 = bezout_data(Z->zero(), Z->zero());
  CHECK(z0.d.is_zero());
  CHECK(z0.a1.is_zero());
  // postconditions on random residue pairs
  auto Z12 = Ring::residue(12);
  std::mt19937_64 g(31);
  for (int t = 0; t < 100; ++t) {
    Element a = Z12->from_int(Int((long)(g() % 12)));
    Element bb = Z12->from_int(Int((long)(g() % 12)));
    BezoutData r = bezout_data(a, bb);
    CHECK(Z12->mul(r.a1, r.d) == a);
    CHECK(Z12->mul(r.b1, r.d) == bb);
    CHECK(Z12->add(Z12->mul(r.u, a), Z12->mul(r.v, bb)) == r.d);
  }
  CHECK_THROWS_AS(bezout_data(Ring::quadratic(-5)->from_int(2),
                              Ring::quadratic(-5)->from_int(3)),
                  DomainError);
}

TEST_CASE("unit shift") {
  auto Z12 = Ring::residue(12);
  Element c = unit_shift(Z12->from_int(2), Z12->from_int(3));
  CHECK(c == Z12->from_int(1));  // first hit in enumeration order: 2+3 = 5
  CHECK(Z12->is_unit(Z12->add(Z12->from_int(2), Z12->mul(c, Z12->from_int(3)))));
  // trivial case on any ring
  auto Q5 = Ring::quadratic(-5);
  CHECK(unit_shift(Q5->one(), Q5->from_int(7)).is_zero());
  // componentwise on finite products
  auto P = Ring::product({Ring::residue(12), Ring::residue(5)});
  Element a1 = P->element_parse("(2, 1)");
  Element b1 = P->element_parse("(3, 0)");
  Element cc = unit_shift(a1, b1);
  CHECK(cc == P->element_parse("(1, 0)"));
  CHECK(P->is_unit(P->add(a1, P->mul(cc, b1))));
  // precondition violations are reported
  CHECK_THROWS_AS(unit_shift(Z12->from_int(2), Z12->from_int(4)),
                  PreconditionError);
  CHECK_THROWS_AS(unit_shift(Ring::integers()->from_int(2),
                             Ring::integers()->from_int(5)),
                  DomainError);  // not local-global
}

TEST_CASE("orthogonalize idempotents") {
  auto Z = Ring::integers();
  // singleton
  auto [e1, b1] = orthogonalize_idempotents({Idempotent(Z->one())}, {Z->one()});
  CHECK(e1.size() == 1);
  CHECK(e1[0].value() == Z->one());
  // Z x Z example
  auto ZZ = Ring::product({Z, Z});
  Element e11 = ZZ->element_parse("(1, 1)");
  Element e01 = ZZ->element_parse("(0, 1)");
  auto [es, bs] = orthogonalize_idempotents(
      {Idempotent(e11), Idempotent(e01)},
      {ZZ->element_parse("(1, 0)"), ZZ->element_parse("(0, 1)")});
  REQUIRE(es.size() == 2);
  CHECK(es[0].value() == ZZ->element_parse("(1, 0)"));
  CHECK(es[1].value() == ZZ->element_parse("(0, 1)"));
  CHECK(ZZ->mul(es[0].value(), es[1].value()).is_zero());
  Element sum = ZZ->zero();
  for (std::size_t i = 0; i < es.size(); ++i)
    sum = ZZ->add(sum, ZZ->mul(bs[i], es[i].value()));
  CHECK(sum == ZZ->one());
  // rejected when the coefficients do not resolve 1
  auto Z12 = Ring::residue(12);
  CHECK_THROWS_AS(
      orthogonalize_idempotents(
          {Idempotent(Z12->from_int(4)), Idempotent(Z12->from_int(4))},
          {Z12->one(), Z12->one()}),
      PreconditionError);
  // 4 + 9 = 13 = 1 mod 12: a valid family
  auto [es2, bs2] = orthogonalize_idempotents(
      {Idempotent(Z12->from_int(4)), Idempotent(Z12->from_int(9))},
      {Z12->one(), Z12->one()});
  Element s2 = Z12->zero();
  for (std::size_t i = 0; i < es2.size(); ++i) {
    s2 = Z12->add(s2, Z12->mul(bs2[i], es2[i].value()));
    for (std::size_t j = i + 1; j < es2.size(); ++j)
      CHECK(Z12->mul(es2[i].value(), es2[j].value()).is_zero());
  }
  CHECK(s2 == Z12->one());
}

TEST_CASE("idempotent constructor rejects non-idempotents") {
  auto Z12 = Ring::residue(12);
  CHECK_THROWS_AS(Idempotent(Z12->from_int(3)), PreconditionError);
  CHECK_NOTHROW(Idempotent(Z12->from_int(9)));
}

TEST_CASE("finite enumeration is a bijection") {
  auto P = Ring::product({Ring::residue(4), Ring::residue(3)});
  CHECK(P->size() == 12);
  std::set<std::vector<Int>> seen;
  for (Int i = 0; i < 12; ++i) seen.insert(P->element_at(i).flatten());
  CHECK(seen.size() == 12);
}

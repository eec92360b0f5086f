#include <doctest.h>

#include <random>

#include "stacked/ideal.hpp"

using namespace stacked;

namespace {

Element rnd_q5(const RingPtr& r, std::mt19937_64& g, long b) {
  return r->make_quad(Int(-b + (long)(g() % (2 * b + 1))),
                      Int(-b + (long)(g() % (2 * b + 1))));
}

FinGenIdeal rnd_ideal_q5(const RingPtr& r, std::mt19937_64& g, long b) {
  for (;;) {
    FinGenIdeal i = FinGenIdeal::normalize(r, {rnd_q5(r, g, b), rnd_q5(r, g, b)});
    if (!i.is_zero()) return i;
  }
}

}  // namespace

TEST_CASE("normalization examples") {
  auto Z = Ring::integers();
  FinGenIdeal i = FinGenIdeal::normalize(Z, {Z->from_int(4), Z->from_int(6)});
  CHECK(i.int_gen() == 2);
  auto Q5 = Ring::quadratic(-5);
  FinGenIdeal p2 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(2), Q5->make_quad(1, 1)});
  CHECK(p2.quad_basis().a == 2);
  CHECK(p2.quad_basis().c == 1);
  CHECK(p2.norm() == 2);  // index-2 sublattice
  auto ZZ = Ring::product({Z, Z});
  FinGenIdeal pz = FinGenIdeal::normalize(
      ZZ, {ZZ->element_parse("(2, 0)"), ZZ->element_parse("(0, 3)")});
  CHECK(pz.component_ideals()[0].int_gen() == 2);
  CHECK(pz.component_ideals()[1].int_gen() == 3);
  // normalize is idempotent: re-normalizing the canonical generators is stable
  FinGenIdeal again = FinGenIdeal::normalize(Q5, p2.nf_gens());
  CHECK(again == p2);
}

TEST_CASE("sums, products, intersections") {
  auto Z = Ring::integers();
  FinGenIdeal i4 = FinGenIdeal::principal(Z->from_int(4));
  FinGenIdeal i6 = FinGenIdeal::principal(Z->from_int(6));
  CHECK(ideal_sum(i4, i6) == FinGenIdeal::principal(Z->from_int(2)));
  CHECK(ideal_intersect(i4, i6) == FinGenIdeal::principal(Z->from_int(12)));
  auto Q5 = Ring::quadratic(-5);
  FinGenIdeal p2 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(2), Q5->make_quad(1, 1)});
  CHECK(ideal_product(p2, p2) == FinGenIdeal::principal(Q5->from_int(2)));
  FinGenIdeal p3 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(3), Q5->make_quad(1, 1)});
  FinGenIdeal p3b =
      FinGenIdeal::normalize(Q5, {Q5->from_int(3), Q5->make_quad(1, -1)});
  CHECK(ideal_product(p3, p3b) == FinGenIdeal::principal(Q5->from_int(3)));
}

TEST_CASE("dedekind laws on random triples") {
  std::mt19937_64 g(37);
  auto Q5 = Ring::quadratic(-5);
  for (int t = 0; t < 40; ++t) {
    FinGenIdeal a = rnd_ideal_q5(Q5, g, 5);
    FinGenIdeal b = rnd_ideal_q5(Q5, g, 5);
    CHECK(ideal_sum(a, b).contains_ideal(a));
    FinGenIdeal ab = ideal_product(a, b);
    FinGenIdeal meet = ideal_intersect(a, b);
    CHECK(meet.contains_ideal(ab));
    CHECK(ideal_product(meet, ideal_sum(a, b)) == ab);  // Dedekind identity
    CHECK(ab.norm() == a.norm() * b.norm());            // norm multiplicativity
  }
}

TEST_CASE("content") {
  auto Z = Ring::integers();
  CHECK(content(Z, {{Z->from_int(3), Z->from_int(0), Z->from_int(6)}}) ==
        FinGenIdeal::principal(Z->from_int(3)));
  CHECK(content(Z, {{Z->from_int(2), Z->from_int(6)},
                    {Z->from_int(4), Z->from_int(8)}}) ==
        FinGenIdeal::principal(Z->from_int(2)));
}

TEST_CASE("faithfulness and completion") {
  auto Z6 = Ring::residue(6);
  FinGenIdeal i2 = FinGenIdeal::principal(Z6->from_int(2));
  CHECK(!is_faithful(i2));
  CHECK(faithful_completion(i2).is_unit_ideal());
  auto Q5 = Ring::quadratic(-5);
  FinGenIdeal p2 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(2), Q5->make_quad(1, 1)});
  auto w = is_faithful(p2);
  REQUIRE(w);
  CHECK(*w == Q5->from_int(2));
  auto Z = Ring::integers();
  CHECK(faithful_completion(FinGenIdeal::zero_ideal(Z)).is_unit_ideal());
  auto ZZ = Ring::product({Z, Z});
  FinGenIdeal dead = FinGenIdeal::normalize(ZZ, {ZZ->element_parse("(2, 0)")});
  CHECK(!is_faithful(dead));
  FinGenIdeal completed = faithful_completion(dead);
  CHECK(completed.component_ideals()[0].int_gen() == 2);
  CHECK(completed.component_ideals()[1].is_unit_ideal());
  // completion leaves faithful ideals alone
  std::mt19937_64 g(41);
  for (int t = 0; t < 30; ++t) {
    FinGenIdeal a = rnd_ideal_q5(Q5, g, 5);
    CHECK(faithful_completion(a) == a);
  }
}

TEST_CASE("inverses") {
  auto Z = Ring::integers();
  FractionalIdeal inv = ideal_inverse(FinGenIdeal::principal(Z->from_int(2)));
  CHECK(inv.num().is_unit_ideal());
  CHECK(inv.den() == Z->from_int(2));
  auto Q5 = Ring::quadratic(-5);
  std::mt19937_64 g(43);
  for (int t = 0; t < 40; ++t) {
    FinGenIdeal a = rnd_ideal_q5(Q5, g, 6);
    FractionalIdeal ainv = ideal_inverse(a);  // I * I^{-1} = R checked inside
    CHECK(ideal_product(a, ainv.num()) ==
          FinGenIdeal::principal(ainv.den()));
  }
  auto ZZ = Ring::product({Z, Z});
  CHECK_THROWS_AS(
      ideal_inverse(FinGenIdeal::normalize(ZZ, {ZZ->element_parse("(2, 0)")})),
      DomainError);
}

TEST_CASE("principality") {
  auto Q5 = Ring::quadratic(-5);
  FinGenIdeal p2 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(2), Q5->make_quad(1, 1)});
  CHECK(!is_principal(p2));  // x^2 + 5y^2 = 2 has no solution
  auto Z = Ring::integers();
  CHECK(*is_principal(FinGenIdeal::principal(Z->from_int(3))) ==
        Z->from_int(3));
  // P2 * conj(P3) = (1 - w)
  FinGenIdeal p3b =
      FinGenIdeal::normalize(Q5, {Q5->from_int(3), Q5->make_quad(1, -1)});
  FinGenIdeal prod = ideal_product(p2, p3b);
  auto gen = is_principal(prod);
  REQUIRE(gen);
  CHECK(prod == FinGenIdeal::principal(Q5->make_quad(1, -1)));
  Int n = Q5->norm(*gen);
  CHECK(n == 6);
  // real quadratic: (2, sqrt(2)) is principal in Z[sqrt 2], generated by sqrt 2
  auto Q2 = Ring::quadratic(2);
  FinGenIdeal r2 =
      FinGenIdeal::normalize(Q2, {Q2->from_int(2), Q2->make_quad(0, 1)});
  auto g2 = is_principal(r2);
  REQUIRE(g2);
  CHECK(FinGenIdeal::principal(*g2) == r2);
  // class number of Q(sqrt 10) is 2: (2, sqrt 10) is not principal
  auto Q10 = Ring::quadratic(10);
  FinGenIdeal np =
      FinGenIdeal::normalize(Q10, {Q10->from_int(2), Q10->make_quad(0, 1)});
  CHECK(!is_principal(np));
}

TEST_CASE("module isomorphism of ideals") {
  auto Q5 = Ring::quadratic(-5);
  FinGenIdeal p2 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(2), Q5->make_quad(1, 1)});
  FinGenIdeal p3 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(3), Q5->make_quad(1, 1)});
  auto w = is_isomorphic(p2, p3);
  REQUIRE(w);
  CHECK(ideal_scale(p2, w->num) == ideal_scale(p3, w->den));
  CHECK(!is_isomorphic(p2, FinGenIdeal::unit_ideal(Q5)));
  auto Z = Ring::integers();
  auto wz = is_isomorphic(FinGenIdeal::principal(Z->from_int(4)),
                          FinGenIdeal::principal(Z->from_int(9)));
  REQUIRE(wz);
  CHECK(wz->num == Z->from_int(9));
  CHECK(wz->den == Z->from_int(4));
  CHECK_THROWS_AS(is_isomorphic(FinGenIdeal::zero_ideal(Z),
                                FinGenIdeal::principal(Z->from_int(2))),
                  DomainError);
}

TEST_CASE("quotient representatives") {
  auto Q5 = Ring::quadratic(-5);
  FinGenIdeal p2 =
      FinGenIdeal::normalize(Q5, {Q5->from_int(2), Q5->make_quad(1, 1)});
  QuotientReps reps(p2);
  CHECK(reps.count() == 2);
  std::mt19937_64 g(47);
  for (int t = 0; t < 40; ++t) {
    Element x = rnd_q5(Q5, g, 20);
    Element r = reps.reduce(x);
    CHECK(reps.reduce(r) == r);
    CHECK(p2.contains(Q5->sub(x, r)));
  }
  for (Int i = 0; i < reps.count(); ++i)
    CHECK(reps.reduce(reps.rep_at(i)) == reps.rep_at(i));
}

TEST_CASE("membership witnesses") {
  auto Q5 = Ring::quadratic(-5);
  std::mt19937_64 g(53);
  for (int t = 0; t < 30; ++t) {
    FinGenIdeal a = rnd_ideal_q5(Q5, g, 6);
    // ideal elements are exactly expressible over the original generators
    Element probe = Q5->mul(rnd_q5(Q5, g, 4), a.gens()[0]);
    auto c = a.express(probe);
    REQUIRE(c);
    Element back = Q5->zero();
    for (std::size_t i = 0; i < a.gens().size(); ++i)
      back = Q5->add(back, Q5->mul((*c)[i], a.gens()[i]));
    CHECK(back == probe);
  }
}

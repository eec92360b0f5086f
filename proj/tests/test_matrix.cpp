#include <doctest.h>

#include <random>

#include "stacked/io.hpp"
#include "stacked/matrix.hpp"

using namespace stacked;

namespace {

// test-local classical row HNF by repeated subtraction; deliberately a
// different algorithm from the library kernel
ZMat naive_hnf(ZMat a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
    for (;;) {
      // find the row >= r with the smallest nonzero |entry| in column c
      std::size_t best = a.rows;
      for (std::size_t i = r; i < a.rows; ++i) {
        if (a.at(i, c) == 0) continue;
        if (best == a.rows || abs(a.at(i, c)) < abs(a.at(best, c))) best = i;
      }
      if (best == a.rows) break;
      if (best != r)
        for (std::size_t j = 0; j < a.cols; ++j)
          std::swap(a.at(r, j), a.at(best, j));
      bool done = true;
      for (std::size_t i = r + 1; i < a.rows; ++i) {
        if (a.at(i, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.at(i, c).get_mpz_t(), a.at(r, c).get_mpz_t());
        for (std::size_t j = 0; j < a.cols; ++j) a.at(i, j) -= q * a.at(r, j);
        if (a.at(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a.at(r, c) == 0) continue;
    if (a.at(r, c) < 0)
      for (std::size_t j = 0; j < a.cols; ++j) a.at(r, j) = -a.at(r, j);
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a.at(i, c).get_mpz_t(), a.at(r, c).get_mpz_t());
      for (std::size_t j = 0; j < a.cols; ++j) a.at(i, j) -= q * a.at(r, j);
    }
    ++r;
  }
  return a;
}

}  // namespace

TEST_CASE("multiplication and determinant examples") {
  auto Z12 = Ring::residue(12);
  RingMatrix a = parse_matrix(Z12, "2,0;3,4");
  RingMatrix id = RingMatrix::identity(Z12, 2);
  CHECK(mat_mul(id, a) == a);
  CHECK(determinant(a) == Z12->from_int(8));
  CHECK(!mat_is_invertible(a));
  RingMatrix b = parse_matrix(Z12, "1,1;0,11");
  CHECK(determinant(b) == Z12->from_int(11));
  CHECK(mat_is_invertible(b));
  RingMatrix binv = mat_inverse(b);
  CHECK(mat_mul(b, binv) == id);
}

TEST_CASE("determinant has consistent routes at the 4x4 / 5x5 boundary") {
  std::mt19937_64 g(59);
  auto Z = Ring::integers();
  for (int t = 0; t < 20; ++t) {
    RingMatrix a(Z, 5, 5);
    ZMat z(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        long v = -6 + (long)(g() % 13);
        a.at(i, j) = Z->from_int(v);
        z.at(i, j) = v;
      }
    CHECK(determinant(a).as_int() == z_det(z));
  }
  auto Q5 = Ring::quadratic(-5);
  for (int t = 0; t < 10; ++t) {
    RingMatrix a(Q5, 5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        a.at(i, j) = Q5->make_quad(Int(-2 + (long)(g() % 5)),
                                   Int(-2 + (long)(g() % 5)));
    // expansion along the first row must agree with bareiss
    Element by_cofactor = Q5->zero();
    for (std::size_t j = 0; j < 5; ++j) {
      RingMatrix sub(Q5, 4, 4);
      for (std::size_t i = 1; i < 5; ++i) {
        std::size_t cc = 0;
        for (std::size_t c = 0; c < 5; ++c) {
          if (c == j) continue;
          sub.at(i - 1, cc++) = a.at(i, c);
        }
      }
      Element term = Q5->mul(a.at(0, j), determinant(sub));
      by_cofactor = (j % 2 == 0) ? Q5->add(by_cofactor, term)
                                 : Q5->sub(by_cofactor, term);
    }
    CHECK(determinant(a) == by_cofactor);
  }
}

TEST_CASE("hermite reduction examples") {
  auto Z = Ring::integers();
  RingMatrix a = parse_matrix(Z, "4;6");
  HermiteResult h = hermite_reduce(a);
  CHECK(mat_mul(h.p, a) == h.t);
  CHECK(h.t.at(0, 0) == Z->from_int(2));
  CHECK(h.t.at(1, 0).is_zero());
  CHECK(mat_is_invertible(h.p));

  auto Z12 = Ring::residue(12);
  RingMatrix b = parse_matrix(Z12, "2,0;3,4");
  HermiteResult hb = hermite_reduce(b);
  CHECK(mat_mul(hb.p, b) == hb.t);
  CHECK(hb.t.at(0, 0) == Z12->one());  // 2 and 3 generate the unit ideal
  CHECK(mat_is_invertible(hb.p));

  RingMatrix zero(Z, 3, 2);
  HermiteResult hz = hermite_reduce(zero);
  CHECK(hz.t.is_zero());
  CHECK(hz.p == RingMatrix::identity(Z, 3));

  CHECK_THROWS_AS(hermite_reduce(RingMatrix(Ring::quadratic(-5), 2, 2)),
                  DomainError);
}

TEST_CASE("hermite agrees with the classical oracle on random matrices") {
  std::mt19937_64 g(61);
  auto Z = Ring::integers();
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + g() % 5, c = 1 + g() % 5;
    RingMatrix a(Z, r, c);
    ZMat z(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        long v = -50 + (long)(g() % 101);
        a.at(i, j) = Z->from_int(v);
        z.at(i, j) = v;
      }
    HermiteResult h = hermite_reduce(a);
    CHECK(mat_mul(h.p, a) == h.t);
    CHECK(mat_is_invertible(h.p));
    ZMat oracle = naive_hnf(z);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        CHECK(h.t.at(i, j).as_int() == oracle.at(i, j));
  }
}

TEST_CASE("hermite over products is componentwise exact") {
  auto P = Ring::product({Ring::integers(), Ring::residue(12)});
  std::mt19937_64 g(67);
  for (int t = 0; t < 20; ++t) {
    RingMatrix a(P, 3, 2);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        a.at(i, j) = P->make_tuple(
            {Ring::integers()->from_int(Int(-9 + (long)(g() % 19))),
             Ring::residue(12)->from_int(Int((long)(g() % 12)))});
    HermiteResult h = hermite_reduce(a);
    CHECK(mat_mul(h.p, a) == h.t);
    CHECK(mat_is_invertible(h.p));
  }
}

TEST_CASE("matrix content") {
  auto Z = Ring::integers();
  CHECK(content_of_matrix(parse_matrix(Z, "2,4;6,8")) ==
        FinGenIdeal::principal(Z->from_int(2)));
  auto Z12 = Ring::residue(12);
  CHECK(content_of_matrix(parse_matrix(Z12, "2,0;3,4")).is_unit_ideal());
  CHECK(content_of_matrix(RingMatrix(Z, 2, 2)).is_zero());
}

TEST_CASE("span membership and expression") {
  std::mt19937_64 g(71);
  std::vector<RingPtr> rings = {Ring::integers(), Ring::residue(12),
                                Ring::quadratic(-5),
                                Ring::product({Ring::integers(), Ring::residue(6)})};
  for (auto& r : rings) {
    for (int t = 0; t < 15; ++t) {
      std::vector<std::vector<Element>> gens;
      std::size_t n = 2 + g() % 2;
      for (int k = 0; k < 3; ++k) {
        std::vector<Element> v;
        for (std::size_t i = 0; i < n; ++i) {
          if (r->kind() == Ring::Kind::Quadratic)
            v.push_back(r->make_quad(Int(-4 + (long)(g() % 9)),
                                     Int(-4 + (long)(g() % 9))));
          else
            v.push_back(r->from_int(Int(-9 + (long)(g() % 19))));
        }
        gens.push_back(v);
      }
      // a random combination must be recognised and re-expressed exactly
      std::vector<Element> x(n, r->zero());
      for (const auto& gen : gens) {
        Element c = r->from_int(Int(-3 + (long)(g() % 7)));
        x = vec_add(x, vec_scale(c, gen));
      }
      CHECK(span_contains(r, gens, x));
      auto coeffs = span_express(r, gens, x);
      REQUIRE(coeffs);
      std::vector<Element> back(n, r->zero());
      for (std::size_t k = 0; k < gens.size(); ++k)
        back = vec_add(back, vec_scale((*coeffs)[k], gens[k]));
      CHECK(back == x);
    }
  }
}

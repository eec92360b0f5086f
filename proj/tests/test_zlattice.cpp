#include <doctest.h>

#include <random>

#include "stacked/zlattice.hpp"

using namespace stacked;

namespace {

ZMat random_zmat(std::mt19937_64& g, std::size_t r, std::size_t c, long b) {
  ZMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m.at(i, j) = Int(-b + static_cast<long>(g() % (2 * b + 1)));
  return m;
}

}  // namespace

TEST_CASE("row_hnf transform identity and canonicity") {
  std::mt19937_64 g(7);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + g() % 4, c = 1 + g() % 4;
    ZMat a = random_zmat(g, r, c, 20);
    RowHnf h = row_hnf(a);
    CHECK(z_mul(h.u, a) == h.h);
    Int du = z_det(h.u);
    CHECK((du == 1 || du == -1));
    // HNF of the HNF is itself
    RowHnf h2 = row_hnf(h.h);
    CHECK(h2.h == h.h);
    // every original row is in the span, with an exact expression
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Int> row;
      for (std::size_t j = 0; j < c; ++j) row.push_back(a.at(i, j));
      CHECK(hnf_contains(h, row));
      auto coeff = hnf_express(h, row);
      REQUIRE(coeff);
      std::vector<Int> back(c, 0);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t j = 0; j < c; ++j) back[j] += (*coeff)[k] * a.at(k, j);
      CHECK(back == row);
    }
  }
}

TEST_CASE("left kernel") {
  std::mt19937_64 g(11);
  for (int t = 0; t < 40; ++t) {
    std::size_t r = 1 + g() % 4, c = 1 + g() % 3;
    ZMat a = random_zmat(g, r, c, 10);
    ZMat k = z_left_kernel(a);
    CHECK(z_is_zero(z_mul(k, a)));
    RowHnf h = row_hnf(a);
    CHECK(k.rows == r - h.pivots.size());
  }
}

TEST_CASE("lattice intersection") {
  // (4) and (6) inside Z: intersection (12)
  ZMat a(1, 1), b(1, 1);
  a.at(0, 0) = 4;
  b.at(0, 0) = 6;
  ZMat i = z_lattice_intersect(a, b);
  REQUIRE(i.rows == 1);
  CHECK(i.at(0, 0) == 12);
  // a 2d example: even lattice with diagonal lattice
  ZMat l1(2, 2), l2(2, 2);
  l1.at(0, 0) = 2;
  l1.at(1, 1) = 1;  // 2Z x Z
  l2.at(0, 0) = 1;
  l2.at(0, 1) = 1;
  l2.at(1, 1) = 3;  // spanned by (1,1), (0,3)
  ZMat m = z_lattice_intersect(l1, l2);
  RowHnf h = row_hnf(m);
  // members must lie in both lattices
  for (std::size_t r = 0; r < m.rows; ++r) {
    std::vector<Int> row{m.at(r, 0), m.at(r, 1)};
    CHECK(hnf_contains(row_hnf(l1), row));
    CHECK(hnf_contains(row_hnf(l2), row));
  }
  CHECK(h.pivots.size() == 2);
}

TEST_CASE("smith form transforms and divisibility") {
  std::mt19937_64 g(13);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + g() % 4, c = 1 + g() % 4;
    ZMat a = random_zmat(g, r, c, 15);
    Snf s = smith_form(a);
    CHECK(z_mul(z_mul(s.p, a), s.q) == s.d);
    Int dp = z_det(s.p), dq = z_det(s.q);
    CHECK((dp == 1 || dp == -1));
    CHECK((dq == 1 || dq == -1));
    std::size_t n = std::min(r, c);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < c; ++j)
        if (j != k) CHECK(s.d.at(k, j) == 0);
      CHECK(s.d.at(k, k) >= 0);
      if (k + 1 < n && s.d.at(k, k) != 0)
        CHECK(s.d.at(k + 1, k + 1) % s.d.at(k, k) == 0);
      if (k + 1 < n && s.d.at(k, k) == 0) CHECK(s.d.at(k + 1, k + 1) == 0);
    }
  }
}

TEST_CASE("bareiss determinant vs 2x2/3x3 formulas") {
  std::mt19937_64 g(17);
  for (int t = 0; t < 50; ++t) {
    ZMat a = random_zmat(g, 3, 3, 9);
    Int d = a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1)) -
            a.at(0, 1) * (a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0)) +
            a.at(0, 2) * (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0));
    CHECK(z_det(a) == d);
  }
}

TEST_CASE("unimodular inverse") {
  ZMat u(3, 3);
  u.at(0, 0) = 1; u.at(0, 1) = 2; u.at(0, 2) = 3;
  u.at(1, 1) = 1; u.at(1, 2) = -4;
  u.at(2, 2) = 1;
  ZMat inv = z_inverse_unimodular(u);
  CHECK(z_mul(u, inv) == ZMat::identity(3));
  CHECK(z_mul(inv, u) == ZMat::identity(3));
}

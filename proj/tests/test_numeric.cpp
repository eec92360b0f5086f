#include <doctest.h>

#include "stacked/numeric.hpp"

using namespace stacked;

TEST_CASE("ext_gcd identities") {
  for (long a = -12; a <= 12; ++a)
    for (long b = -12; b <= 12; ++b) {
      ExtGcd e = ext_gcd(Int(a), Int(b));
      CHECK(e.g == gcd(Int(a), Int(b)));
      CHECK(e.u * a + e.v * b == e.g);
      CHECK(e.g >= 0);
    }
}

TEST_CASE("integer square roots") {
  CHECK(isqrt(Int(0)) == 0);
  CHECK(isqrt(Int(35)) == 5);
  CHECK(isqrt(Int(36)) == 6);
  CHECK(perfect_sqrt(Int(49)) == Int(7));
  CHECK(!perfect_sqrt(Int(50)));
  CHECK(!perfect_sqrt(Int(-4)));
}

TEST_CASE("factorization and squarefree") {
  auto f = factorize(Int(360));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<Int, unsigned>{2, 3});
  CHECK(f[1] == std::pair<Int, unsigned>{3, 2});
  CHECK(f[2] == std::pair<Int, unsigned>{5, 1});
  CHECK(is_squarefree(Int(30)));
  CHECK(is_squarefree(Int(-5)));
  CHECK(!is_squarefree(Int(12)));
  CHECK(!is_squarefree(Int(0)));
}

TEST_CASE("modular inverse and unit lifts") {
  CHECK(*mod_inverse(Int(5), Int(12)) == 5);
  CHECK(!mod_inverse(Int(4), Int(12)));
  // lift 2 (a unit mod 3) to a unit mod 12 congruent to 2 mod 3
  Int t = lift_to_unit(Int(2), Int(12), Int(3));
  CHECK(gcd(t, Int(12)) == 1);
  CHECK(mod_floor(t, Int(3)) == 2);
}

TEST_CASE("pell units") {
  auto [x, y] = pell_unit(Int(2));
  CHECK(x * x - 2 * y * y == Int(-1));  // 1 + sqrt(2)
  auto [x3, y3] = pell_unit(Int(3));
  CHECK(x3 * x3 - 3 * y3 * y3 == 1);
  auto [xl, yl] = pell_unit(Int(163));
  Int t = xl * xl - 163 * yl * yl;
  CHECK((t == 1 || t == -1));
  CHECK(yl > 0);
}

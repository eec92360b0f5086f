#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace stacked {

using Int = mpz_class;

// Exact integer helpers on top of GMP. Everything here is deterministic and
// allocation-light; these are the primitives the lattice and ring layers use.

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

// g = gcd(a, b) >= 0 with g = u*a + v*b.
struct ExtGcd {
  Int g, u, v;
};
ExtGcd ext_gcd(const Int& a, const Int& b);

// Quotient/remainder with 0 <= r < |m| (floor semantics for positive m).
Int mod_floor(const Int& a, const Int& m);

// Exact division; aborts if b does not divide a.
Int div_exact(const Int& a, const Int& b);

bool divides(const Int& a, const Int& b);  // a | b (a != 0, or b == 0)

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);
std::optional<Int> perfect_sqrt(const Int& n);  // exact square root if square

// Trial-division factorisation, smallest prime first: {(p, e), ...}.
// Intended for desk-scale moduli and discriminants.
std::vector<std::pair<Int, unsigned>> factorize(const Int& n);

bool is_squarefree(const Int& n);

// Modular inverse of a mod m (m >= 2); nullopt if gcd(a, m) != 1.
std::optional<Int> mod_inverse(const Int& a, const Int& m);

// Some unit t' of Z/m with t' == t mod (m/g), for g | m and gcd(t, m/g) = 1.
// Used to normalise associates in residue rings.
Int lift_to_unit(const Int& t, const Int& m, const Int& m_over_g);

// Fundamental solution of x^2 - d y^2 = +-1 (x, y > 0) by the continued
// fraction expansion of sqrt(d); d > 1 and not a perfect square.
std::pair<Int, Int> pell_unit(const Int& d);

}  // namespace stacked

#include "stacked/numeric.hpp"

#include <cassert>
#include <stdexcept>

namespace stacked {

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

ExtGcd ext_gcd(const Int& a, const Int& b) {
  ExtGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.u.get_mpz_t(), r.v.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return r;
}

Int mod_floor(const Int& a, const Int& m) {
  assert(m != 0);
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int div_exact(const Int& a, const Int& b) {
  assert(b != 0);
  assert(a % b == 0);
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

bool divides(const Int& a, const Int& b) {
  if (a == 0) return b == 0;
  return b % a == 0;
}

Int isqrt(const Int& n) {
  assert(n >= 0);
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Int> perfect_sqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t())) return isqrt(n);
  return std::nullopt;
}

std::vector<std::pair<Int, unsigned>> factorize(const Int& n_in) {
  Int n = abs(n_in);
  if (n <= 1) return {};
  std::vector<std::pair<Int, unsigned>> out;
  Int p = 2;
  while (p * p <= n) {
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) {
        n = div_exact(n, p);
        ++e;
      }
      out.emplace_back(p, e);
    }
    p += (p == 2) ? 1 : 2;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

std::optional<Int> mod_inverse(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    return std::nullopt;
  return r;
}

Int lift_to_unit(const Int& t, const Int& m, const Int& m_over_g) {
  assert(m % m_over_g == 0);
  assert(gcd(t, m_over_g) == 1);
  // t + k*(m/g) runs over all residues == t mod m/g; one of the first m/gcd
  // candidates is prime to m.
  Int cand = mod_floor(t, m);
  for (Int k = 0; k < m; ++k) {
    if (gcd(cand, m) == 1) return cand;
    cand = mod_floor(cand + m_over_g, m);
  }
  throw std::logic_error("lift_to_unit: no unit lift found");
}

std::pair<Int, Int> pell_unit(const Int& d) {
  assert(d > 1 && !perfect_sqrt(d));
  // Continued fraction of sqrt(d); convergents p/q until p^2 - d q^2 = +-1.
  Int a0 = isqrt(d);
  Int P = 0, Q = 1, a = a0;
  Int p_prev = 1, p_cur = a0;
  Int q_prev = 0, q_cur = 1;
  for (int iter = 0; iter < 100000; ++iter) {
    Int t = p_cur * p_cur - d * q_cur * q_cur;
    if (t == 1 || t == -1) return {p_cur, q_cur};
    P = a * Q - P;
    Q = div_exact(d - P * P, Q);
    a = (P + a0) / Q;
    Int p_next = a * p_cur + p_prev;
    Int q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
  }
  throw std::logic_error("pell_unit: period not found");
}

}  // namespace stacked

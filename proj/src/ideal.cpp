#include "stacked/ideal.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace stacked {

namespace {

// Coordinate rows of the Z-lattice spanned by an ideal's generators.
// Quadratic generators contribute g and w*g so the span is w-closed.
ZMat quad_gen_rows(const RingPtr& ring, const std::vector<Element>& gens) {
  ZMat rows(2 * gens.size(), 2);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const QuadCoord& g = gens[i].as_quad();
    Element wg = ring->mul(gens[i], ring->make_quad(0, 1));
    const QuadCoord& w = wg.as_quad();
    rows.at(2 * i, 0) = g.a;
    rows.at(2 * i, 1) = g.b;
    rows.at(2 * i + 1, 0) = w.a;
    rows.at(2 * i + 1, 1) = w.b;
  }
  return rows;
}

QuadBasis quad_basis_from_rows(const ZMat& rows) {
  // HNF with the coordinate columns swapped (w first) yields the classical
  // basis {a, b + c*w}: first pivot minimises the w-coefficient, the second
  // row is the pure rational integer a, and b is reduced mod a.
  ZMat sw(rows.rows, 2);
  for (std::size_t i = 0; i < rows.rows; ++i) {
    sw.at(i, 0) = rows.at(i, 1);
    sw.at(i, 1) = rows.at(i, 0);
  }
  RowHnf h = row_hnf(sw);
  if (h.pivots.empty()) return QuadBasis{0, 0, 0};
  if (h.pivots.size() == 1) {
    // rank-1 lattice: only possible for w-closed spans when it is zero in
    // one coordinate; ideals are rank 0 or 2, but stay defensive.
    if (h.pivots[0] == 1) return QuadBasis{h.h.at(0, 1), 0, 0};
    throw PreconditionError("quadratic ideal lattice of rank 1");
  }
  Int c = h.h.at(0, 0), b = h.h.at(0, 1), a = h.h.at(1, 1);
  return QuadBasis{a, b, c};
}

std::vector<Element> quad_basis_elements(const RingPtr& ring,
                                         const QuadBasis& qb) {
  if (qb.is_zero()) return {ring->zero()};
  return {ring->make_quad(qb.a, 0), ring->make_quad(qb.b, qb.c)};
}

Int residue_canonical(const Int& g_lift, const Int& n) {
  Int g = gcd(g_lift, n);
  return (g == n) ? Int(0) : g;
}

}  // namespace

// ---------------------------------------------------------------------------
// FinGenIdeal construction

FinGenIdeal FinGenIdeal::normalize(const RingPtr& ring,
                                   std::vector<Element> gens) {
  if (gens.empty()) throw PreconditionError("ideal needs at least one generator");
  for (const Element& g : gens)
    if (!g.ring()->equals(*ring)) throw PreconditionError("ring mismatch");

  FinGenIdeal out;
  out.ring_ = ring;
  out.gens_ = std::move(gens);
  switch (ring->kind()) {
    case Ring::Kind::Integers: {
      Int g = 0;
      for (const Element& e : out.gens_) g = gcd(g, e.as_int());
      out.nf_ = g;
      out.nf_gens_ = {ring->from_int(g)};
      break;
    }
    case Ring::Kind::Residue: {
      Int g = ring->modulus();
      for (const Element& e : out.gens_) g = gcd(g, e.as_int());
      g = residue_canonical(g, ring->modulus());
      out.nf_ = g;
      out.nf_gens_ = {ring->from_int(g)};
      break;
    }
    case Ring::Kind::Quadratic: {
      QuadBasis qb = quad_basis_from_rows(quad_gen_rows(ring, out.gens_));
      out.nf_ = qb;
      out.nf_gens_ = quad_basis_elements(ring, qb);
      break;
    }
    case Ring::Kind::Product: {
      std::vector<FinGenIdeal> comps;
      const auto& fs = ring->factors();
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<Element> cg;
        for (const Element& e : out.gens_) cg.push_back(e.as_tuple()[i]);
        comps.push_back(FinGenIdeal::normalize(fs[i], std::move(cg)));
      }
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (const Element& g : comps[i].nf_gens()) {
          std::vector<Element> t;
          for (std::size_t k = 0; k < fs.size(); ++k)
            t.push_back(k == i ? g : fs[k]->zero());
          out.nf_gens_.push_back(ring->make_tuple(std::move(t)));
        }
      out.nf_ = std::move(comps);
      break;
    }
  }
  return out;
}

FinGenIdeal FinGenIdeal::principal(const Element& g) {
  return normalize(g.ring(), {g});
}

FinGenIdeal FinGenIdeal::zero_ideal(const RingPtr& ring) {
  return normalize(ring, {ring->zero()});
}

FinGenIdeal FinGenIdeal::unit_ideal(const RingPtr& ring) {
  return normalize(ring, {ring->one()});
}

bool FinGenIdeal::is_zero() const {
  if (std::holds_alternative<Int>(nf_)) return int_gen() == 0;
  if (std::holds_alternative<QuadBasis>(nf_)) return quad_basis().is_zero();
  for (const FinGenIdeal& c : component_ideals())
    if (!c.is_zero()) return false;
  return true;
}

bool FinGenIdeal::is_unit_ideal() const {
  if (std::holds_alternative<Int>(nf_)) return int_gen() == 1;
  if (std::holds_alternative<QuadBasis>(nf_)) {
    const QuadBasis& q = quad_basis();
    return q.a == 1 && q.c == 1;
  }
  for (const FinGenIdeal& c : component_ideals())
    if (!c.is_unit_ideal()) return false;
  return true;
}

bool FinGenIdeal::operator==(const FinGenIdeal& o) const {
  if (!ring_->equals(*o.ring_)) return false;
  return nf_ == o.nf_;
}

bool FinGenIdeal::contains(const Element& x) const {
  switch (ring_->kind()) {
    case Ring::Kind::Integers:
      return divides(int_gen(), x.as_int());
    case Ring::Kind::Residue: {
      Int g = int_gen() == 0 ? ring_->modulus() : int_gen();
      return x.as_int() % g == 0;
    }
    case Ring::Kind::Quadratic: {
      const QuadBasis& q = quad_basis();
      const QuadCoord& v = x.as_quad();
      if (q.is_zero()) return x.is_zero();
      if (v.b % q.c != 0) return false;
      Int t = div_exact(v.b, q.c);
      return (v.a - t * q.b) % q.a == 0;
    }
    case Ring::Kind::Product: {
      const auto& comps = component_ideals();
      for (std::size_t i = 0; i < comps.size(); ++i)
        if (!comps[i].contains(x.as_tuple()[i])) return false;
      return true;
    }
  }
  return false;
}

bool FinGenIdeal::contains_ideal(const FinGenIdeal& other) const {
  for (const Element& g : other.nf_gens())
    if (!contains(g)) return false;
  return true;
}

std::optional<std::vector<Element>> FinGenIdeal::express(
    const Element& x) const {
  std::size_t k = gens_.size();
  switch (ring_->kind()) {
    case Ring::Kind::Integers: {
      ZMat rows(k, 1);
      for (std::size_t i = 0; i < k; ++i) rows.at(i, 0) = gens_[i].as_int();
      RowHnf h = row_hnf(rows);
      auto c = hnf_express(h, {x.as_int()});
      if (!c) return std::nullopt;
      std::vector<Element> out;
      for (std::size_t i = 0; i < k; ++i) out.push_back(ring_->from_int((*c)[i]));
      return out;
    }
    case Ring::Kind::Residue: {
      ZMat rows(k + 1, 1);
      for (std::size_t i = 0; i < k; ++i) rows.at(i, 0) = gens_[i].as_int();
      rows.at(k, 0) = ring_->modulus();
      RowHnf h = row_hnf(rows);
      auto c = hnf_express(h, {x.as_int()});
      if (!c) return std::nullopt;
      std::vector<Element> out;
      for (std::size_t i = 0; i < k; ++i) out.push_back(ring_->from_int((*c)[i]));
      return out;
    }
    case Ring::Kind::Quadratic: {
      ZMat rows = quad_gen_rows(ring_, gens_);
      RowHnf h = row_hnf(rows);
      auto c = hnf_express(h, {x.as_quad().a, x.as_quad().b});
      if (!c) return std::nullopt;
      std::vector<Element> out;
      for (std::size_t i = 0; i < k; ++i)
        out.push_back(ring_->make_quad((*c)[2 * i], (*c)[2 * i + 1]));
      return out;
    }
    case Ring::Kind::Product: {
      const auto& fs = ring_->factors();
      std::vector<std::vector<Element>> per_comp;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<Element> cg;
        for (const Element& e : gens_) cg.push_back(e.as_tuple()[i]);
        FinGenIdeal ci = FinGenIdeal::normalize(fs[i], cg);
        auto c = ci.express(x.as_tuple()[i]);
        if (!c) return std::nullopt;
        per_comp.push_back(std::move(*c));
      }
      std::vector<Element> out;
      for (std::size_t g = 0; g < k; ++g) {
        std::vector<Element> t;
        for (std::size_t i = 0; i < fs.size(); ++i) t.push_back(per_comp[i][g]);
        out.push_back(ring_->make_tuple(std::move(t)));
      }
      return out;
    }
  }
  return std::nullopt;
}

Int FinGenIdeal::norm() const {
  switch (ring_->kind()) {
    case Ring::Kind::Integers:
      return abs(int_gen());
    case Ring::Kind::Residue:
      // index |R/I|: R/(g) has g elements for a canonical divisor g
      return int_gen() == 0 ? ring_->modulus() : int_gen();
    case Ring::Kind::Quadratic: {
      const QuadBasis& q = quad_basis();
      if (q.is_zero()) return 0;
      return q.a * q.c;
    }
    case Ring::Kind::Product: {
      Int n = 1;
      for (const FinGenIdeal& c : component_ideals()) n *= c.norm();
      return n;
    }
  }
  return 0;
}

std::string FinGenIdeal::to_string() const {
  std::string s = "ideal(";
  for (std::size_t i = 0; i < nf_gens_.size(); ++i) {
    if (i) s += ", ";
    s += ring_->element_to_string(nf_gens_[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// FractionalIdeal

FractionalIdeal::FractionalIdeal(FinGenIdeal num, Element den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.ring()->is_zero_divisor(den_))
    throw PreconditionError("fractional ideal denominator is a zero-divisor");
}

bool FractionalIdeal::operator==(const FractionalIdeal& o) const {
  return ideal_scale(num_, o.den_) == ideal_scale(o.num_, den_);
}

std::string FractionalIdeal::to_string() const {
  return num_.to_string() + "/" + den_.ring()->element_to_string(den_);
}

// ---------------------------------------------------------------------------
// Arithmetic

FinGenIdeal ideal_sum(const FinGenIdeal& i, const FinGenIdeal& j) {
  if (!i.ring()->equals(*j.ring())) throw PreconditionError("ring mismatch");
  std::vector<Element> gens = i.nf_gens();
  gens.insert(gens.end(), j.nf_gens().begin(), j.nf_gens().end());
  return FinGenIdeal::normalize(i.ring(), std::move(gens));
}

FinGenIdeal ideal_product(const FinGenIdeal& i, const FinGenIdeal& j) {
  if (!i.ring()->equals(*j.ring())) throw PreconditionError("ring mismatch");
  std::vector<Element> gens;
  for (const Element& a : i.nf_gens())
    for (const Element& b : j.nf_gens()) gens.push_back(i.ring()->mul(a, b));
  return FinGenIdeal::normalize(i.ring(), std::move(gens));
}

FinGenIdeal ideal_scale(const FinGenIdeal& i, const Element& s) {
  std::vector<Element> gens;
  for (const Element& a : i.nf_gens()) gens.push_back(i.ring()->mul(a, s));
  return FinGenIdeal::normalize(i.ring(), std::move(gens));
}

FinGenIdeal ideal_intersect(const FinGenIdeal& i, const FinGenIdeal& j) {
  if (!i.ring()->equals(*j.ring())) throw PreconditionError("ring mismatch");
  const RingPtr& ring = i.ring();
  switch (ring->kind()) {
    case Ring::Kind::Integers: {
      Int g = lcm(i.int_gen(), j.int_gen());
      return FinGenIdeal::principal(ring->from_int(g));
    }
    case Ring::Kind::Residue: {
      const Int& n = ring->modulus();
      Int a = i.int_gen() == 0 ? n : i.int_gen();
      Int b = j.int_gen() == 0 ? n : j.int_gen();
      return FinGenIdeal::principal(ring->from_int(lcm(a, b)));
    }
    case Ring::Kind::Quadratic: {
      if (i.is_zero() || j.is_zero()) return FinGenIdeal::zero_ideal(ring);
      ZMat a = quad_gen_rows(ring, i.nf_gens());
      ZMat b = quad_gen_rows(ring, j.nf_gens());
      ZMat m = z_lattice_intersect(a, b);
      std::vector<Element> gens;
      for (std::size_t r = 0; r < m.rows; ++r)
        gens.push_back(ring->make_quad(m.at(r, 0), m.at(r, 1)));
      if (gens.empty()) gens.push_back(ring->zero());
      return FinGenIdeal::normalize(ring, std::move(gens));
    }
    case Ring::Kind::Product: {
      const auto& fs = ring->factors();
      std::vector<Element> gens;
      for (std::size_t k = 0; k < fs.size(); ++k) {
        FinGenIdeal ck =
            ideal_intersect(i.component_ideals()[k], j.component_ideals()[k]);
        for (const Element& g : ck.nf_gens()) {
          std::vector<Element> t;
          for (std::size_t f = 0; f < fs.size(); ++f)
            t.push_back(f == k ? g : fs[f]->zero());
          gens.push_back(ring->make_tuple(std::move(t)));
        }
      }
      return FinGenIdeal::normalize(ring, std::move(gens));
    }
  }
  throw std::logic_error("unreachable");
}

FinGenIdeal content(const RingPtr& ring,
                    const std::vector<std::vector<Element>>& vectors) {
  std::vector<Element> gens;
  for (const auto& v : vectors)
    for (const Element& e : v) gens.push_back(e);
  if (gens.empty()) gens.push_back(ring->zero());
  return FinGenIdeal::normalize(ring, std::move(gens));
}

// ---------------------------------------------------------------------------
// Faithfulness / completion

std::optional<Element> is_faithful(const FinGenIdeal& i) {
  const RingPtr& ring = i.ring();
  switch (ring->kind()) {
    case Ring::Kind::Integers:
      if (i.int_gen() == 0) return std::nullopt;
      return ring->from_int(i.int_gen());
    case Ring::Kind::Residue:
      if (i.int_gen() == 1) return ring->one();
      return std::nullopt;
    case Ring::Kind::Quadratic:
      if (i.is_zero()) return std::nullopt;
      return ring->from_int(i.quad_basis().a);
    case Ring::Kind::Product: {
      std::vector<Element> w;
      const auto& comps = i.component_ideals();
      for (std::size_t k = 0; k < comps.size(); ++k) {
        auto c = is_faithful(comps[k]);
        if (!c) return std::nullopt;
        w.push_back(*c);
      }
      return ring->make_tuple(std::move(w));
    }
  }
  return std::nullopt;
}

FinGenIdeal faithful_completion(const FinGenIdeal& i) {
  const RingPtr& ring = i.ring();
  Element f = annihilator_idempotent(i.nf_gens()).value();
  Element eps = ring->sub(ring->one(), f);
  std::vector<Element> gens;
  for (const Element& g : i.nf_gens()) gens.push_back(ring->mul(g, eps));
  gens.push_back(f);
  return FinGenIdeal::normalize(ring, std::move(gens));
}

bool is_invertible(const FinGenIdeal& i) {
  const RingPtr& ring = i.ring();
  switch (ring->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Quadratic:
      return !i.is_zero();
    case Ring::Kind::Residue:
      return i.is_unit_ideal();
    case Ring::Kind::Product: {
      for (const FinGenIdeal& c : i.component_ideals())
        if (!is_invertible(c)) return false;
      return true;
    }
  }
  return false;
}

FractionalIdeal ideal_inverse(const FinGenIdeal& i) {
  const RingPtr& ring = i.ring();
  if (!is_invertible(i)) throw DomainError("ideal is not invertible");
  FractionalIdeal out = [&]() -> FractionalIdeal {
    switch (ring->kind()) {
      case Ring::Kind::Integers:
        return {FinGenIdeal::unit_ideal(ring), ring->from_int(abs(i.int_gen()))};
      case Ring::Kind::Residue:
        return {FinGenIdeal::unit_ideal(ring), ring->one()};
      case Ring::Kind::Quadratic: {
        // I * conj(I) = (norm I), so conj(I)/norm(I) inverts I; strip the
        // rational content to keep the representation small.
        std::vector<Element> cg;
        for (const Element& g : i.nf_gens()) cg.push_back(ring->conj(g));
        FinGenIdeal conj_ideal = FinGenIdeal::normalize(ring, std::move(cg));
        Int den = i.norm();
        const QuadBasis& q = conj_ideal.quad_basis();
        Int t = gcd(gcd(q.a, gcd(q.b, q.c)), den);
        QuadBasis rq{div_exact(q.a, t), div_exact(q.b, t), div_exact(q.c, t)};
        FinGenIdeal num = FinGenIdeal::normalize(
            ring, {ring->make_quad(rq.a, 0), ring->make_quad(rq.b, rq.c)});
        return {num, ring->from_int(div_exact(den, t))};
      }
      case Ring::Kind::Product: {
        const auto& fs = ring->factors();
        std::vector<std::vector<Element>> comp_gens(fs.size());
        std::vector<Element> dens;
        std::size_t max_gens = 0;
        for (std::size_t k = 0; k < fs.size(); ++k) {
          FractionalIdeal ck = ideal_inverse(i.component_ideals()[k]);
          comp_gens[k] = ck.num().nf_gens();
          dens.push_back(ck.den());
          max_gens = std::max(max_gens, comp_gens[k].size());
        }
        std::vector<Element> gens;
        for (std::size_t k = 0; k < fs.size(); ++k)
          for (const Element& g : comp_gens[k]) {
            std::vector<Element> t;
            for (std::size_t f = 0; f < fs.size(); ++f)
              t.push_back(f == k ? g : fs[f]->zero());
            gens.push_back(ring->make_tuple(std::move(t)));
          }
        return {FinGenIdeal::normalize(ring, std::move(gens)),
                ring->make_tuple(std::move(dens))};
      }
    }
    throw std::logic_error("unreachable");
  }();
  // post-check I * num = (den)
  FinGenIdeal prod = ideal_product(i, out.num());
  if (prod != FinGenIdeal::principal(out.den()))
    throw DomainError("ideal inverse post-check failed");
  return out;
}

// ---------------------------------------------------------------------------
// Principality

namespace {

// All principal-generator candidates for a quadratic ideal of norm m are
// associates of an element with bounded coordinates:
//  - imaginary d: the norm form is positive definite, so |N(g)| = m pins
//    the w-coordinate to y^2 <= m/|d| (resp. 4m/|d| when d = 1 mod 4).
//  - real d: with eps = p + q*sqrt(d) the Pell unit of Z[sqrt(d)] (a unit of
//    the maximal order), any generator has an associate whose embeddings
//    satisfy sqrt(m) <= |g| < sqrt(m)*eps and |conj(g)| <= sqrt(m), giving
//    |y| <= sqrt(m)(eps+1)/(2 sqrt(d)) (doubled in the d = 1 mod 4 basis).
// Exhausting the window is therefore a proof of non-principality.
std::optional<Element> quad_principal(const FinGenIdeal& ideal) {
  const RingPtr& ring = ideal.ring();
  const Int& d = ring->quad_d();
  if (ideal.is_zero()) return ring->zero();
  Int m = ideal.norm();
  bool one_mod4 = mod_floor(d, 4) == 1;

  auto try_candidate = [&](const Int& x, const Int& y) -> std::optional<Element> {
    Element g = ring->make_quad(x, y);
    Int n = ring->norm(g);
    if ((n == m || n == -m) && ideal.contains(g)) return g;
    return std::nullopt;
  };

  if (d < 0) {
    Int absd = -d;
    if (!one_mod4) {
      // x^2 + |d| y^2 = m
      Int ymax = isqrt(m / absd);
      for (Int y = 0; y <= ymax; ++y) {
        auto x = perfect_sqrt(m - absd * y * y);
        if (!x) continue;
        for (const Int& sx : {*x, Int(-*x)})
          for (const Int& sy : {y, Int(-y)}) {
            if (auto g = try_candidate(sx, sy)) return g;
            if (y == 0) break;
          }
      }
    } else {
      // (2x+y)^2 + |d| y^2 = 4m
      Int ymax = isqrt(4 * m / absd);
      for (Int y = -ymax; y <= ymax; ++y) {
        auto s = perfect_sqrt(4 * m - absd * y * y);
        if (!s) continue;
        if (mod_floor(*s - y, 2) != 0) continue;
        for (const Int& ss : {*s, Int(-*s)}) {
          Int x = div_exact(ss - y, 2);
          if (auto g = try_candidate(x, y)) return g;
          if (*s == 0) break;
        }
      }
    }
    return std::nullopt;
  }

  // real quadratic
  auto [p, q] = pell_unit(d);
  Int e_bound = p + q * (isqrt(d) + 1) + 1;  // integer upper bound for eps
  Int sqm = isqrt(m) + 1;
  Int root_d = isqrt(d);
  if (!one_mod4) {
    Int ymax = (sqm * (e_bound + 1)) / (2 * root_d) + 1;
    for (Int y = 0; y <= ymax; ++y) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        Int rhs = (sgn == 0) ? Int(m + d * y * y) : Int(-m + d * y * y);
        if (rhs < 0) continue;
        auto x = perfect_sqrt(rhs);
        if (!x) continue;
        for (const Int& sx : {*x, Int(-*x)}) {
          if (auto g = try_candidate(sx, y)) return g;
          if (*x == 0) break;
        }
      }
    }
  } else {
    Int ymax = (sqm * (e_bound + 1)) / root_d + 1;
    for (Int y = -ymax; y <= ymax; ++y) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        Int rhs = (sgn == 0) ? Int(4 * m + d * y * y) : Int(-4 * m + d * y * y);
        if (rhs < 0) continue;
        auto s = perfect_sqrt(rhs);
        if (!s) continue;
        if (mod_floor(*s - y, 2) != 0) continue;
        for (const Int& ss : {*s, Int(-*s)}) {
          Int x = div_exact(ss - y, 2);
          if (auto g = try_candidate(x, y)) return g;
          if (*s == 0) break;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Element> is_principal(const FinGenIdeal& i) {
  const RingPtr& ring = i.ring();
  switch (ring->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Residue:
      return ring->from_int(i.int_gen());
    case Ring::Kind::Quadratic:
      return quad_principal(i);
    case Ring::Kind::Product: {
      std::vector<Element> t;
      const auto& comps = i.component_ideals();
      for (const FinGenIdeal& c : comps) {
        auto g = is_principal(c);
        if (!g) return std::nullopt;
        t.push_back(*g);
      }
      return ring->make_tuple(std::move(t));
    }
  }
  return std::nullopt;
}

std::optional<IsoWitness> is_isomorphic(const FinGenIdeal& i,
                                        const FinGenIdeal& j) {
  if (!i.ring()->equals(*j.ring())) throw PreconditionError("ring mismatch");
  if (!is_invertible(i) || !is_invertible(j))
    throw DomainError("is_isomorphic requires invertible ideals");
  const RingPtr& ring = i.ring();
  auto check = [&](const IsoWitness& w) {
    return ideal_scale(i, w.num) == ideal_scale(j, w.den);
  };
  switch (ring->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Residue: {
      // nonzero ideals of Z are all isomorphic; invertible residue ideals
      // are the unit ideal
      IsoWitness w{ring->from_int(j.int_gen()), ring->from_int(i.int_gen())};
      if (!check(w)) throw DomainError("iso witness check failed");
      return w;
    }
    case Ring::Kind::Quadratic: {
      // I ~ J iff I*conj(J) is principal; from I*conj(J) = (g) and
      // conj(J)*J = (N(J)) we get N(J)*I = g*J.
      std::vector<Element> gens;
      for (const Element& a : i.nf_gens())
        for (const Element& b : j.nf_gens())
          gens.push_back(ring->mul(a, ring->conj(b)));
      FinGenIdeal k = FinGenIdeal::normalize(ring, std::move(gens));
      auto g = is_principal(k);
      if (!g) return std::nullopt;
      IsoWitness w{ring->from_int(j.norm()), *g};
      if (!check(w)) throw DomainError("iso witness check failed");
      return w;
    }
    case Ring::Kind::Product: {
      std::vector<Element> nums, dens;
      const auto& ci = i.component_ideals();
      const auto& cj = j.component_ideals();
      for (std::size_t k = 0; k < ci.size(); ++k) {
        auto w = is_isomorphic(ci[k], cj[k]);
        if (!w) return std::nullopt;
        nums.push_back(w->num);
        dens.push_back(w->den);
      }
      IsoWitness w{ring->make_tuple(std::move(nums)),
                   ring->make_tuple(std::move(dens))};
      if (!check(w)) throw DomainError("iso witness check failed");
      return w;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// QuotientReps

QuotientReps::QuotientReps(const FinGenIdeal& ideal)
    : ideal_(ideal), ring_(ideal.ring()) {
  switch (ring_->kind()) {
    case Ring::Kind::Integers:
      if (ideal_.int_gen() == 0)
        throw PreconditionError("quotient by the zero ideal is infinite");
      count_ = ideal_.int_gen();
      break;
    case Ring::Kind::Residue:
      count_ = ideal_.int_gen() == 0 ? ring_->modulus() : ideal_.int_gen();
      break;
    case Ring::Kind::Quadratic: {
      if (ideal_.is_zero())
        throw PreconditionError("quotient by the zero ideal is infinite");
      count_ = ideal_.norm();
      break;
    }
    case Ring::Kind::Product:
      throw PreconditionError("QuotientReps handles connected rings only");
  }
}

Element QuotientReps::rep_at(const Int& idx) const {
  switch (ring_->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Residue:
      return ring_->from_int(idx);
    case Ring::Kind::Quadratic: {
      const QuadBasis& q = ideal_.quad_basis();
      Int i = mod_floor(idx, q.a);
      Int j = mod_floor(idx / q.a, q.c);
      return ring_->make_quad(i, j);
    }
    default:
      throw std::logic_error("unreachable");
  }
}

Element QuotientReps::reduce(const Element& x) const {
  switch (ring_->kind()) {
    case Ring::Kind::Integers:
      return ring_->from_int(mod_floor(x.as_int(), count_));
    case Ring::Kind::Residue: {
      return ring_->from_int(mod_floor(x.as_int(), count_));
    }
    case Ring::Kind::Quadratic: {
      const QuadBasis& q = ideal_.quad_basis();
      const QuadCoord& v = x.as_quad();
      Int j = mod_floor(v.b, q.c);
      Int t = div_exact(v.b - j, q.c);
      Int i = mod_floor(v.a - t * q.b, q.a);
      return ring_->make_quad(i, j);
    }
    default:
      throw std::logic_error("unreachable");
  }
}

}  // namespace stacked

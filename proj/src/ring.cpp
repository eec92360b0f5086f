#include "stacked/ring.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace stacked {

// ---------------------------------------------------------------------------
// Element

Element::Element(RingPtr ring, Payload payload)
    : ring_(std::move(ring)), v_(std::move(payload)) {}

bool Element::is_zero() const {
  if (std::holds_alternative<Int>(v_)) return as_int() == 0;
  if (std::holds_alternative<QuadCoord>(v_))
    return as_quad().a == 0 && as_quad().b == 0;
  for (const Element& c : as_tuple())
    if (!c.is_zero()) return false;
  return true;
}

bool Element::operator==(const Element& o) const {
  if (std::holds_alternative<Int>(v_) && std::holds_alternative<Int>(o.v_))
    return as_int() == o.as_int();
  if (std::holds_alternative<QuadCoord>(v_) &&
      std::holds_alternative<QuadCoord>(o.v_))
    return as_quad() == o.as_quad();
  if (std::holds_alternative<std::vector<Element>>(v_) &&
      std::holds_alternative<std::vector<Element>>(o.v_))
    return as_tuple() == o.as_tuple();
  return false;
}

std::vector<Int> Element::flatten() const {
  std::vector<Int> out;
  if (std::holds_alternative<Int>(v_)) {
    out.push_back(as_int());
  } else if (std::holds_alternative<QuadCoord>(v_)) {
    out.push_back(as_quad().a);
    out.push_back(as_quad().b);
  } else {
    for (const Element& c : as_tuple()) {
      auto f = c.flatten();
      out.insert(out.end(), f.begin(), f.end());
    }
  }
  return out;
}

bool Element::operator<(const Element& o) const {
  return flatten() < o.flatten();
}

bool same_ring(const Element& x, const Element& y) {
  return x.ring() && y.ring() && x.ring()->equals(*y.ring());
}

void require_same_ring(const Element& x, const Element& y) {
  if (!same_ring(x, y)) throw PreconditionError("ring mismatch");
}

// ---------------------------------------------------------------------------
// Ring construction

RingPtr Ring::integers() {
  auto r = std::shared_ptr<Ring>(new Ring());
  r->kind_ = Kind::Integers;
  r->init_components();
  return r;
}

RingPtr Ring::residue(const Int& n) {
  if (n < 2) throw DomainError("residue modulus must be >= 2");
  auto r = std::shared_ptr<Ring>(new Ring());
  r->kind_ = Kind::Residue;
  r->n_ = n;
  r->init_components();
  return r;
}

RingPtr Ring::quadratic(const Int& d, bool maximal_order) {
  if (!maximal_order)
    throw DomainError("only maximal quadratic orders are supported");
  if (d == 0 || d == 1 || !is_squarefree(d))
    throw DomainError("quadratic parameter must be squarefree, not 0 or 1");
  auto r = std::shared_ptr<Ring>(new Ring());
  r->kind_ = Kind::Quadratic;
  r->d_ = d;
  r->init_components();
  return r;
}

RingPtr Ring::product(const std::vector<RingPtr>& factors) {
  std::vector<RingPtr> flat;
  for (const RingPtr& f : factors) {
    if (!f) throw DomainError("null product factor");
    if (f->kind() == Kind::Product)
      flat.insert(flat.end(), f->factors().begin(), f->factors().end());
    else
      flat.push_back(f);
  }
  if (flat.size() < 2) throw DomainError("product needs at least two factors");
  auto r = std::shared_ptr<Ring>(new Ring());
  r->kind_ = Kind::Product;
  r->factors_ = std::move(flat);
  r->init_components();
  return r;
}

void Ring::init_components() {
  RingPtr self = shared_from_this();
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      components_.push_back({one(), self});
      break;
    case Kind::Residue: {
      auto fac = factorize(n_);
      if (fac.size() == 1) {
        components_.push_back({one(), self});
      } else {
        for (const auto& [p, e] : fac) {
          Int m = 1;
          for (unsigned i = 0; i < e; ++i) m *= p;
          Int rest = div_exact(n_, m);
          // CRT idempotent: 1 mod m, 0 mod n/m.
          Int inv = *mod_inverse(rest, m);
          Int idem = mod_floor(rest * inv, n_);
          components_.push_back({from_int(idem), Ring::residue(m)});
        }
      }
      break;
    }
    case Kind::Product: {
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        const auto& sub = factors_[f]->components();
        for (std::size_t s = 0; s < sub.size(); ++s) {
          std::vector<Element> mask;
          for (std::size_t g = 0; g < factors_.size(); ++g)
            mask.push_back(g == f ? sub[s].unit : factors_[g]->zero());
          components_.push_back({make_tuple(std::move(mask)), sub[s].block});
          comp_owner_.push_back(f);
          comp_sub_.push_back(s);
        }
      }
      break;
    }
  }
}

bool Ring::equals(const Ring& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Integers:
      return true;
    case Kind::Residue:
      return n_ == o.n_;
    case Kind::Quadratic:
      return d_ == o.d_;
    case Kind::Product: {
      if (factors_.size() != o.factors_.size()) return false;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        if (!factors_[i]->equals(*o.factors_[i])) return false;
      return true;
    }
  }
  return false;
}

std::string Ring::to_string() const {
  switch (kind_) {
    case Kind::Integers:
      return "Z";
    case Kind::Residue:
      return "Z/" + n_.get_str();
    case Kind::Quadratic:
      return "Q[" + d_.get_str() + "]";
    case Kind::Product: {
      std::string s = "prod(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ", ";
        s += factors_[i]->to_string();
      }
      return s + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Element construction

Element Ring::zero() const { return from_int(0); }
Element Ring::one() const { return from_int(1); }

Element Ring::from_int(const Int& v) const {
  switch (kind_) {
    case Kind::Integers:
      return Element(shared_from_this(), v);
    case Kind::Residue:
      return Element(shared_from_this(), mod_floor(v, n_));
    case Kind::Quadratic:
      return Element(shared_from_this(), QuadCoord{v, 0});
    case Kind::Product: {
      std::vector<Element> t;
      for (const RingPtr& f : factors_) t.push_back(f->from_int(v));
      return Element(shared_from_this(), std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

Element Ring::make_quad(const Int& a, const Int& b) const {
  if (kind_ != Kind::Quadratic)
    throw PreconditionError("make_quad on non-quadratic ring");
  return Element(shared_from_this(), QuadCoord{a, b});
}

Element Ring::make_tuple(std::vector<Element> comps) const {
  if (kind_ != Kind::Product)
    throw PreconditionError("make_tuple on non-product ring");
  if (comps.size() != factors_.size())
    throw PreconditionError("tuple arity does not match product");
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (!comps[i].ring()->equals(*factors_[i]))
      throw PreconditionError("tuple component ring mismatch");
  return Element(shared_from_this(), std::move(comps));
}

Element Ring::canonicalize(const Element& e) const {
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      return e;
    case Kind::Residue:
      return from_int(e.as_int());
    case Kind::Product: {
      std::vector<Element> t;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        t.push_back(factors_[i]->canonicalize(e.as_tuple()[i]));
      return Element(shared_from_this(), std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Arithmetic

Element Ring::add(const Element& x, const Element& y) const {
  require_same_ring(x, y);
  switch (kind_) {
    case Kind::Integers:
      return Element(shared_from_this(), Int(x.as_int() + y.as_int()));
    case Kind::Residue:
      return from_int(x.as_int() + y.as_int());
    case Kind::Quadratic:
      return Element(shared_from_this(),
                     QuadCoord{x.as_quad().a + y.as_quad().a,
                               x.as_quad().b + y.as_quad().b});
    case Kind::Product: {
      std::vector<Element> t;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        t.push_back(factors_[i]->add(x.as_tuple()[i], y.as_tuple()[i]));
      return Element(shared_from_this(), std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

Element Ring::neg(const Element& x) const {
  switch (kind_) {
    case Kind::Integers:
      return Element(shared_from_this(), Int(-x.as_int()));
    case Kind::Residue:
      return from_int(-x.as_int());
    case Kind::Quadratic:
      return Element(shared_from_this(),
                     QuadCoord{-x.as_quad().a, -x.as_quad().b});
    case Kind::Product: {
      std::vector<Element> t;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        t.push_back(factors_[i]->neg(x.as_tuple()[i]));
      return Element(shared_from_this(), std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

Element Ring::sub(const Element& x, const Element& y) const {
  return add(x, neg(y));
}

Element Ring::mul(const Element& x, const Element& y) const {
  require_same_ring(x, y);
  switch (kind_) {
    case Kind::Integers:
      return Element(shared_from_this(), Int(x.as_int() * y.as_int()));
    case Kind::Residue:
      return from_int(x.as_int() * y.as_int());
    case Kind::Quadratic: {
      const QuadCoord& p = x.as_quad();
      const QuadCoord& q = y.as_quad();
      Int a, b;
      if (mod_floor(d_, 4) == 1) {
        // w^2 = w + (d-1)/4
        Int m = div_exact(d_ - 1, 4);
        a = p.a * q.a + p.b * q.b * m;
        b = p.a * q.b + p.b * q.a + p.b * q.b;
      } else {
        // w^2 = d
        a = p.a * q.a + p.b * q.b * d_;
        b = p.a * q.b + p.b * q.a;
      }
      return Element(shared_from_this(), QuadCoord{a, b});
    }
    case Kind::Product: {
      std::vector<Element> t;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        t.push_back(factors_[i]->mul(x.as_tuple()[i], y.as_tuple()[i]));
      return Element(shared_from_this(), std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

Element Ring::conj(const Element& x) const {
  if (kind_ != Kind::Quadratic) throw PreconditionError("conj: quadratic only");
  const QuadCoord& p = x.as_quad();
  if (mod_floor(d_, 4) == 1)
    return Element(shared_from_this(), QuadCoord{p.a + p.b, -p.b});
  return Element(shared_from_this(), QuadCoord{p.a, -p.b});
}

Int Ring::norm(const Element& x) const {
  if (kind_ != Kind::Quadratic) throw PreconditionError("norm: quadratic only");
  const QuadCoord& p = x.as_quad();
  if (mod_floor(d_, 4) == 1)
    return p.a * p.a + p.a * p.b - p.b * p.b * div_exact(d_ - 1, 4);
  return p.a * p.a - d_ * p.b * p.b;
}

bool Ring::is_unit(const Element& x) const {
  switch (kind_) {
    case Kind::Integers:
      return x.as_int() == 1 || x.as_int() == -1;
    case Kind::Residue:
      return gcd(x.as_int(), n_) == 1;
    case Kind::Quadratic: {
      Int n = norm(x);
      return n == 1 || n == -1;
    }
    case Kind::Product: {
      for (std::size_t i = 0; i < factors_.size(); ++i)
        if (!factors_[i]->is_unit(x.as_tuple()[i])) return false;
      return true;
    }
  }
  return false;
}

bool Ring::is_zero_divisor(const Element& x) const {
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      return x.is_zero();
    case Kind::Residue:
      return gcd(x.as_int(), n_) > 1;
    case Kind::Product: {
      for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i]->is_zero_divisor(x.as_tuple()[i])) return true;
      return false;
    }
  }
  return false;
}

std::optional<Element> Ring::inverse_of_unit(const Element& x) const {
  if (!is_unit(x)) return std::nullopt;
  switch (kind_) {
    case Kind::Integers:
      return x;  // 1 or -1
    case Kind::Residue:
      return from_int(*mod_inverse(x.as_int(), n_));
    case Kind::Quadratic: {
      Int n = norm(x);
      Element c = conj(x);
      return n == 1 ? c : neg(c);
    }
    case Kind::Product: {
      std::vector<Element> t;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        t.push_back(*factors_[i]->inverse_of_unit(x.as_tuple()[i]));
      return Element(shared_from_this(), std::move(t));
    }
  }
  return std::nullopt;
}

bool Ring::is_idempotent_value(const Element& x) const {
  return mul(x, x) == x;
}

// ---------------------------------------------------------------------------
// Finite enumeration

bool Ring::finite() const {
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      return false;
    case Kind::Residue:
      return true;
    case Kind::Product:
      for (const RingPtr& f : factors_)
        if (!f->finite()) return false;
      return true;
  }
  return false;
}

Int Ring::size() const {
  if (!finite()) throw PreconditionError("size of an infinite ring");
  if (kind_ == Kind::Residue) return n_;
  Int s = 1;
  for (const RingPtr& f : factors_) s *= f->size();
  return s;
}

Element Ring::element_at(const Int& idx) const {
  if (!finite()) throw PreconditionError("element_at on an infinite ring");
  if (kind_ == Kind::Residue) return from_int(idx);
  // first factor varies fastest
  Int rest = idx;
  std::vector<Element> t;
  for (const RingPtr& f : factors_) {
    Int s = f->size();
    t.push_back(f->element_at(mod_floor(rest, s)));
    rest /= s;
  }
  return Element(shared_from_this(), std::move(t));
}

std::vector<Element> Ring::idempotents() const {
  // Every idempotent is a 0/1 mask over connected components.
  std::vector<Element> out;
  std::size_t k = components_.size();
  if (k > 20) throw PreconditionError("too many components");
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    Element e = zero();
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t(1) << i)) e = add(e, components_[i].unit);
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Components

Element Ring::component_project(const Element& x, std::size_t idx) const {
  const RingComponent& c = components_.at(idx);
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      return x;
    case Kind::Residue:
      return c.block->from_int(x.as_int());
    case Kind::Product:
      return factors_[comp_owner_[idx]]->component_project(
          x.as_tuple()[comp_owner_[idx]], comp_sub_[idx]);
  }
  throw std::logic_error("unreachable");
}

Element Ring::component_embed(const Element& x_block, std::size_t idx) const {
  const RingComponent& c = components_.at(idx);
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      return x_block;
    case Kind::Residue:
      return mul(from_int(x_block.as_int()), c.unit);
    case Kind::Product: {
      std::size_t f = comp_owner_[idx];
      std::vector<Element> t;
      for (std::size_t g = 0; g < factors_.size(); ++g)
        t.push_back(g == f ? factors_[f]->component_embed(x_block, comp_sub_[idx])
                           : factors_[g]->zero());
      return Element(shared_from_this(), std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Capabilities

bool Ring::is_domain() const {
  return kind_ == Kind::Integers || kind_ == Kind::Quadratic;
}

bool Ring::is_bezout() const {
  switch (kind_) {
    case Kind::Integers:
    case Kind::Residue:
      return true;
    case Kind::Quadratic:
      return false;
    case Kind::Product:
      for (const RingPtr& f : factors_)
        if (!f->is_bezout()) return false;
      return true;
  }
  return false;
}

bool Ring::is_local_global() const { return finite(); }

bool Ring::is_pp_instance() const {
  switch (kind_) {
    case Kind::Integers:
    case Kind::Quadratic:
      return true;
    case Kind::Residue:
      return is_squarefree(n_);
    case Kind::Product:
      for (const RingPtr& f : factors_)
        if (!f->is_pp_instance()) return false;
      return true;
  }
  return false;
}

bool Ring::is_semihereditary_instance() const { return is_pp_instance(); }

bool Ring::supports_elementary_divisors() const { return is_bezout(); }

// ---------------------------------------------------------------------------
// Printing / parsing

std::string Ring::element_to_string(const Element& x) const {
  switch (kind_) {
    case Kind::Integers:
    case Kind::Residue:
      return x.as_int().get_str();
    case Kind::Quadratic: {
      const QuadCoord& p = x.as_quad();
      if (p.b == 0) return p.a.get_str();
      std::string s = p.a.get_str();
      s += (p.b >= 0) ? "+" : "-";
      Int ab = abs(p.b);
      s += ab.get_str();
      s += "*w";
      return s;
    }
    case Kind::Product: {
      std::string s = "(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ", ";
        s += factors_[i]->element_to_string(x.as_tuple()[i]);
      }
      return s + ")";
    }
  }
  return {};
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool done() {
    skip();
    return i >= s.size();
  }
};

Int parse_int(Cursor& c) {
  c.skip();
  std::size_t start = c.i;
  if (c.i < c.s.size() && (c.s[c.i] == '+' || c.s[c.i] == '-')) ++c.i;
  std::size_t digits = 0;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
    ++c.i;
    ++digits;
  }
  if (!digits) throw ParseError("expected integer at '" + c.s.substr(start) + "'");
  return Int(c.s.substr(start, c.i - start));
}

Element parse_element_at(const Ring& ring, Cursor& c);

Element parse_quadratic_at(const Ring& ring, Cursor& c) {
  Int a = 0, b = 0;
  bool first = true;
  for (;;) {
    c.skip();
    int sign = 1;
    if (c.peek() == '+') {
      c.eat('+');
      sign = 1;
    } else if (c.peek() == '-') {
      c.eat('-');
      sign = -1;
    } else if (!first) {
      break;
    }
    c.skip();
    if (c.peek() == 'w') {
      c.eat('w');
      b += sign;
    } else {
      Int v = parse_int(c);
      if (c.peek() == '*') {
        c.eat('*');
        if (!c.eat('w')) throw ParseError("expected 'w' after '*'");
        b += sign * v;
      } else {
        a += sign * v;
      }
    }
    first = false;
  }
  return ring.make_quad(a, b);
}

Element parse_element_at(const Ring& ring, Cursor& c) {
  switch (ring.kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Residue:
      return ring.from_int(parse_int(c));
    case Ring::Kind::Quadratic:
      return parse_quadratic_at(ring, c);
    case Ring::Kind::Product: {
      if (!c.eat('(')) throw ParseError("expected '(' for product element");
      std::vector<Element> t;
      for (std::size_t i = 0; i < ring.factors().size(); ++i) {
        if (i && !c.eat(',')) throw ParseError("expected ',' in tuple");
        t.push_back(parse_element_at(*ring.factors()[i], c));
      }
      if (!c.eat(')')) throw ParseError("expected ')' after tuple");
      return ring.make_tuple(std::move(t));
    }
  }
  throw ParseError("bad element");
}

RingPtr parse_ring_at(Cursor& c) {
  c.skip();
  if (c.s.compare(c.i, 5, "prod(") == 0) {
    c.i += 5;
    std::vector<RingPtr> fs;
    fs.push_back(parse_ring_at(c));
    while (c.eat(',')) fs.push_back(parse_ring_at(c));
    if (!c.eat(')')) throw ParseError("expected ')' in prod(...)");
    return Ring::product(fs);
  }
  if (c.peek() == 'Z') {
    c.eat('Z');
    if (c.peek() == '/') {
      c.eat('/');
      return Ring::residue(parse_int(c));
    }
    return Ring::integers();
  }
  if (c.peek() == 'Q') {
    c.eat('Q');
    if (!c.eat('[')) throw ParseError("expected '[' after Q");
    Int d = parse_int(c);
    if (!c.eat(']')) throw ParseError("expected ']' after discriminant");
    return Ring::quadratic(d);
  }
  throw ParseError("unknown ring descriptor");
}

}  // namespace

Element Ring::element_parse(const std::string& text) const {
  Cursor c{text};
  Element e = parse_element_at(*this, c);
  if (!c.done()) throw ParseError("trailing input in element '" + text + "'");
  return e;
}

RingPtr Ring::parse(const std::string& text) {
  Cursor c{text};
  RingPtr r = parse_ring_at(c);
  if (!c.done()) throw ParseError("trailing input in ring '" + text + "'");
  return r;
}

// ---------------------------------------------------------------------------
// Idempotent

Idempotent::Idempotent(Element value) : v_(std::move(value)) {
  if (!v_.ring()->is_idempotent_value(v_))
    throw PreconditionError("element is not idempotent");
}

// ---------------------------------------------------------------------------
// Ring-core operations

Element arith(ArithOp op, const Element& a, const Element& b) {
  const Ring& r = *a.ring();
  switch (op) {
    case ArithOp::Add:
      return r.add(a, b);
    case ArithOp::Sub:
      return r.sub(a, b);
    case ArithOp::Mul:
      return r.mul(a, b);
    case ArithOp::Neg:
      return r.neg(a);
  }
  throw std::logic_error("unreachable");
}

bool is_unit(const Element& a) { return a.ring()->is_unit(a); }
bool is_zero_divisor(const Element& a) { return a.ring()->is_zero_divisor(a); }

Idempotent annihilator_idempotent(const std::vector<Element>& gens) {
  if (gens.empty()) throw PreconditionError("annihilator_idempotent: no generators");
  const RingPtr& ring = gens.front().ring();
  for (const Element& g : gens) require_same_ring(gens.front(), g);
  Element f = ring->zero();
  const auto& comps = ring->components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    bool dead = true;
    for (const Element& g : gens)
      if (!ring->component_project(g, i).is_zero()) {
        dead = false;
        break;
      }
    if (dead) f = ring->add(f, comps[i].unit);
  }
  return Idempotent(f);
}

BezoutData bezout_data(const Element& a, const Element& b) {
  require_same_ring(a, b);
  const RingPtr& ring = a.ring();
  switch (ring->kind()) {
    case Ring::Kind::Integers: {
      ExtGcd e = ext_gcd(a.as_int(), b.as_int());
      Int a1 = (e.g == 0) ? Int(0) : div_exact(a.as_int(), e.g);
      Int b1 = (e.g == 0) ? Int(0) : div_exact(b.as_int(), e.g);
      return {ring->from_int(e.g), ring->from_int(a1), ring->from_int(b1),
              ring->from_int(e.u), ring->from_int(e.v)};
    }
    case Ring::Kind::Residue: {
      const Int& n = ring->modulus();
      const Int& ah = a.as_int();
      const Int& bh = b.as_int();
      Int g0 = gcd(ah, bh);
      Int g = gcd(g0, n);
      if (g == n || (ah == 0 && bh == 0)) {
        Element z = ring->zero();
        return {z, z, z, z, z};
      }
      ExtGcd e0 = ext_gcd(ah, bh);       // g0 = u0*ah + v0*bh
      ExtGcd e1 = ext_gcd(g0, n);        // g = s*g0 + t*n
      return {ring->from_int(g), ring->from_int(div_exact(ah, g)),
              ring->from_int(div_exact(bh, g)), ring->from_int(e1.u * e0.u),
              ring->from_int(e1.u * e0.v)};
    }
    case Ring::Kind::Quadratic:
      throw DomainError("bezout_data: quadratic rings are not Bezout instances");
    case Ring::Kind::Product: {
      const auto& fs = ring->factors();
      std::vector<Element> d, a1, b1, u, v;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        BezoutData c = bezout_data(a.as_tuple()[i], b.as_tuple()[i]);
        d.push_back(c.d);
        a1.push_back(c.a1);
        b1.push_back(c.b1);
        u.push_back(c.u);
        v.push_back(c.v);
      }
      return {ring->make_tuple(d), ring->make_tuple(a1), ring->make_tuple(b1),
              ring->make_tuple(u), ring->make_tuple(v)};
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// Unit-content check for a pair, on rings where bezout data exists.
bool pair_spans_ring(const Element& a, const Element& b) {
  const RingPtr& ring = a.ring();
  switch (ring->kind()) {
    case Ring::Kind::Integers:
      return gcd(a.as_int(), b.as_int()) == 1;
    case Ring::Kind::Residue:
      return gcd(gcd(a.as_int(), b.as_int()), ring->modulus()) == 1;
    case Ring::Kind::Quadratic:
      // conservatively: only obvious cases; full test lives in ideal-engine
      return ring->is_unit(a) || ring->is_unit(b);
    case Ring::Kind::Product: {
      for (std::size_t i = 0; i < ring->factors().size(); ++i)
        if (!pair_spans_ring(a.as_tuple()[i], b.as_tuple()[i])) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

Element unit_shift(const Element& a1, const Element& b1) {
  require_same_ring(a1, b1);
  const RingPtr& ring = a1.ring();
  if (ring->is_unit(a1)) return ring->zero();
  if (ring->kind() == Ring::Kind::Product && ring->finite()) {
    std::vector<Element> t;
    for (std::size_t i = 0; i < ring->factors().size(); ++i)
      t.push_back(unit_shift(a1.as_tuple()[i], b1.as_tuple()[i]));
    return ring->make_tuple(t);
  }
  if (!ring->finite())
    throw DomainError("unit_shift: instance is not local-global");
  if (!pair_spans_ring(a1, b1))
    throw PreconditionError("unit_shift: Ra'+Rb' = R fails");
  Int sz = ring->size();
  for (Int i = 0; i < sz; ++i) {
    Element c = ring->element_at(i);
    if (ring->is_unit(ring->add(a1, ring->mul(c, b1)))) return c;
  }
  throw SearchExhausted("unit_shift: no shift found; instance not local-global");
}

std::pair<std::vector<Idempotent>, std::vector<Element>>
orthogonalize_idempotents(const std::vector<Idempotent>& eps,
                          const std::vector<Element>& coeffs) {
  if (eps.empty() || eps.size() != coeffs.size())
    throw PreconditionError("orthogonalize_idempotents: arity mismatch");
  const RingPtr& ring = eps.front().value().ring();
  Element sum = ring->zero();
  for (std::size_t i = 0; i < eps.size(); ++i)
    sum = ring->add(sum, ring->mul(coeffs[i], eps[i].value()));
  if (sum != ring->one())
    throw PreconditionError("orthogonalize_idempotents: coefficients do not sum to 1");

  // e_j = eps_j * prod_{k>j} (1 - e_k); the running product telescopes the
  // family into an orthogonal one inside the same principal blocks.
  std::size_t p = eps.size();
  std::vector<Element> es(p, ring->zero());
  Element run = ring->one();
  for (std::size_t j = p; j-- > 0;) {
    es[j] = ring->mul(eps[j].value(), run);
    run = ring->mul(run, ring->sub(ring->one(), es[j]));
  }
  std::vector<Idempotent> out_e;
  std::vector<Element> out_b;
  Element total = ring->zero();
  for (std::size_t j = 0; j < p; ++j) {
    if (es[j].is_zero()) continue;
    out_e.emplace_back(es[j]);
    out_b.push_back(ring->one());
    total = ring->add(total, es[j]);
  }
  if (total != ring->one())
    throw PreconditionError("orthogonalize_idempotents: family does not resolve 1");
  return {out_e, out_b};
}

}  // namespace stacked

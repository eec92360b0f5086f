#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stacked/numeric.hpp"

namespace stacked {

// Errors surfaced to callers / the CLI. Parse failures exit with a distinct
// status, domain errors (unsupported ring/op pairings, failed searches) with
// another; precondition violations are programming/contract errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct SearchExhausted : DomainError {
  using DomainError::DomainError;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// Coordinates of a + b*w over the integral basis {1, w} of a quadratic
// maximal order; w = sqrt(d) for d = 2,3 mod 4 and (1+sqrt(d))/2 otherwise.
struct QuadCoord {
  Int a, b;
  bool operator==(const QuadCoord&) const = default;
};

class Element {
 public:
  using Payload = std::variant<Int, QuadCoord, std::vector<Element>>;

  Element() = default;
  Element(RingPtr ring, Payload payload);

  const RingPtr& ring() const { return ring_; }
  const Int& as_int() const { return std::get<Int>(v_); }
  const QuadCoord& as_quad() const { return std::get<QuadCoord>(v_); }
  const std::vector<Element>& as_tuple() const {
    return std::get<std::vector<Element>>(v_);
  }

  bool is_zero() const;
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }
  // Total order on the canonical encodings; used only for deterministic
  // sorting/dedup, it has no algebraic meaning.
  bool operator<(const Element& o) const;

  // Flat integer encoding of the payload (shape is determined by the ring);
  // handy as a set/map key.
  std::vector<Int> flatten() const;

 private:
  RingPtr ring_;
  Payload v_;
};

// One connected (idempotent-indecomposable) block of a ring: the idempotent
// that projects onto it, the block as a ring of its own, and how to move
// elements in and out.
struct RingComponent {
  Element unit;      // idempotent of the ambient ring supporting the block
  RingPtr block;     // the block as a standalone ring
  // see Ring::component_project / component_embed
};

class Ring : public std::enable_shared_from_this<Ring> {
 public:
  enum class Kind { Integers, Residue, Quadratic, Product };

  static RingPtr integers();
  static RingPtr residue(const Int& n);
  static RingPtr quadratic(const Int& d, bool maximal_order = true);
  static RingPtr product(const std::vector<RingPtr>& factors);
  static RingPtr parse(const std::string& text);

  Kind kind() const { return kind_; }
  const Int& modulus() const { return n_; }     // Residue
  const Int& quad_d() const { return d_; }      // Quadratic
  const std::vector<RingPtr>& factors() const { return factors_; }

  bool equals(const Ring& o) const;
  std::string to_string() const;

  // --- element construction ---
  Element zero() const;
  Element one() const;
  Element from_int(const Int& v) const;  // image of the rational integer v
  Element make_quad(const Int& a, const Int& b) const;
  Element make_tuple(std::vector<Element> comps) const;
  Element canonicalize(const Element& e) const;  // reduce payload into canon

  // --- arithmetic ---
  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element mul(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;

  bool is_unit(const Element& x) const;
  bool is_zero_divisor(const Element& x) const;
  std::optional<Element> inverse_of_unit(const Element& x) const;
  bool is_idempotent_value(const Element& x) const;

  // Quadratic-specific (throw elsewhere).
  Element conj(const Element& x) const;
  Int norm(const Element& x) const;

  // --- finiteness & canonical enumeration ---
  bool finite() const;
  Int size() const;                      // finite rings only
  Element element_at(const Int& idx) const;  // canonical enumeration order

  // All idempotents, deterministically ordered. Finite rings enumerate;
  // domains return {0, 1}; products take componentwise 0/1 masks.
  std::vector<Element> idempotents() const;

  // --- connected components ---
  // Integers/Quadratic: one block (the ring itself). Residue(n): one block
  // per prime power of n, with CRT idempotents. Product: concatenation of
  // the factors' blocks.
  const std::vector<RingComponent>& components() const { return components_; }
  Element component_project(const Element& x, std::size_t idx) const;
  Element component_embed(const Element& x_block, std::size_t idx) const;

  // --- capability dispatch (which theorems apply to this instance) ---
  bool is_domain() const;
  bool is_bezout() const;        // Integers, Residue, products of those
  bool is_local_global() const;  // finite instances
  bool is_pp_instance() const;   // reduced: domains, squarefree residue, ...
  bool is_semihereditary_instance() const;  // decompose dispatch
  bool supports_elementary_divisors() const;  // diagonalize dispatch

  std::string element_to_string(const Element& x) const;
  Element element_parse(const std::string& text) const;

 private:
  Ring() = default;
  void init_components();

  Kind kind_ = Kind::Integers;
  Int n_;  // Residue modulus
  Int d_;  // Quadratic field discriminant parameter (squarefree d)
  std::vector<RingPtr> factors_;
  std::vector<RingComponent> components_;
  // Product rings: which factor owns component i, and its index there.
  std::vector<std::size_t> comp_owner_, comp_sub_;
};

bool same_ring(const Element& x, const Element& y);
void require_same_ring(const Element& x, const Element& y);

// Idempotent: an element with e*e = e, checked at construction.
class Idempotent {
 public:
  explicit Idempotent(Element value);
  const Element& value() const { return v_; }
  bool operator==(const Idempotent& o) const { return v_ == o.v_; }

 private:
  Element v_;
};

// --- ring-core operations ---

enum class ArithOp { Add, Sub, Mul, Neg };
Element arith(ArithOp op, const Element& a, const Element& b);

bool is_unit(const Element& a);
bool is_zero_divisor(const Element& a);

// The largest idempotent f with f * g = 0 for every generator g; on pp
// instances this generates the full annihilator of the ideal spanned by gens.
Idempotent annihilator_idempotent(const std::vector<Element>& gens);

// d with Ra + Rb = Rd, a = a1*d, b = b1*d, d = u*a + v*b.
struct BezoutData {
  Element d, a1, b1, u, v;
};
BezoutData bezout_data(const Element& a, const Element& b);

// c with a1 + c*b1 a unit, given Ra1 + Rb1 = R. Searches the canonical
// enumeration of finite rings; on non-local-global instances only the
// trivial case (a1 already a unit) is served.
Element unit_shift(const Element& a1, const Element& b1);

// Orthogonal family refining eps: e_j in R*eps_j pairwise orthogonal with
// sum b_j e_j = 1; zero entries dropped, survivors have b_j e_j = e_j.
std::pair<std::vector<Idempotent>, std::vector<Element>>
orthogonalize_idempotents(const std::vector<Idempotent>& eps,
                          const std::vector<Element>& coeffs);

}  // namespace stacked

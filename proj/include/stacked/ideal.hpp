#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stacked/ring.hpp"
#include "stacked/zlattice.hpp"

namespace stacked {

// Hermite basis of a nonzero ideal of a quadratic maximal order: the
// sublattice spanned by the elements a and b + c*w, with a, c > 0 and
// 0 <= b < a. The zero ideal is marked by a = b = c = 0.
struct QuadBasis {
  Int a, b, c;
  bool operator==(const QuadBasis&) const = default;
  bool is_zero() const { return a == 0 && c == 0; }
};

// Finitely generated ideal with a ring-specific canonical normal form.
// Normal forms: Integers -> generator g >= 0; Residue(n) -> divisor of n
// (0 for the zero ideal); Quadratic -> QuadBasis; Product -> component
// ideals. Construction verifies nothing beyond canonicalisation: the normal
// form is computed from the generators, so mutual containment holds by
// construction of the lattice span.
class FinGenIdeal {
 public:
  FinGenIdeal() = default;  // empty shell; assign before use

  static FinGenIdeal normalize(const RingPtr& ring, std::vector<Element> gens);
  static FinGenIdeal principal(const Element& g);
  static FinGenIdeal zero_ideal(const RingPtr& ring);
  static FinGenIdeal unit_ideal(const RingPtr& ring);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Element>& gens() const { return gens_; }
  const std::vector<Element>& nf_gens() const { return nf_gens_; }

  const Int& int_gen() const { return std::get<Int>(nf_); }  // Z / Residue
  const QuadBasis& quad_basis() const { return std::get<QuadBasis>(nf_); }
  const std::vector<FinGenIdeal>& component_ideals() const {
    return std::get<std::vector<FinGenIdeal>>(nf_);
  }

  bool is_zero() const;
  bool is_unit_ideal() const;
  bool is_proper() const { return !is_unit_ideal(); }

  bool operator==(const FinGenIdeal& o) const;
  bool operator!=(const FinGenIdeal& o) const { return !(*this == o); }

  bool contains(const Element& x) const;
  bool contains_ideal(const FinGenIdeal& other) const;

  // x as a ring-combination of the *original* generators, if x lies in the
  // ideal. The witness behind every membership-style verification.
  std::optional<std::vector<Element>> express(const Element& x) const;

  // Index-style norm of a nonzero quadratic ideal (lattice index in the
  // maximal order); for Integers returns |g|, for Residue n/g.
  Int norm() const;

  std::string to_string() const;

 private:
  RingPtr ring_;
  std::vector<Element> gens_;
  std::vector<Element> nf_gens_;
  std::variant<Int, QuadBasis, std::vector<FinGenIdeal>> nf_;
};

// Fractional ideal num/den with den a non-zero-divisor.
class FractionalIdeal {
 public:
  FractionalIdeal(FinGenIdeal num, Element den);
  const FinGenIdeal& num() const { return num_; }
  const Element& den() const { return den_; }
  bool operator==(const FractionalIdeal& o) const;
  std::string to_string() const;

 private:
  FinGenIdeal num_;
  Element den_;
};

// --- ideal-engine operations ---

FinGenIdeal ideal_sum(const FinGenIdeal& i, const FinGenIdeal& j);
FinGenIdeal ideal_product(const FinGenIdeal& i, const FinGenIdeal& j);
FinGenIdeal ideal_intersect(const FinGenIdeal& i, const FinGenIdeal& j);
FinGenIdeal ideal_scale(const FinGenIdeal& i, const Element& s);

// Ideal generated by all coordinates of all vectors.
FinGenIdeal content(const RingPtr& ring,
                    const std::vector<std::vector<Element>>& vectors);

// Non-zero-divisor witness inside the ideal when it is faithful.
std::optional<Element> is_faithful(const FinGenIdeal& i);

// J = I*eps + R*(1-eps) for eps the complement of the annihilator
// idempotent; faithful on pp instances, and equal to I when I already is.
FinGenIdeal faithful_completion(const FinGenIdeal& i);

bool is_invertible(const FinGenIdeal& i);

// I^{-1} with I * I^{-1} = R, checked exactly before returning.
FractionalIdeal ideal_inverse(const FinGenIdeal& i);

// A generator, if one exists. For quadratic rings this is a bounded search
// over the norm form; the bound makes absence a certificate, see the notes
// in the implementation.
std::optional<Element> is_principal(const FinGenIdeal& i);

// Module isomorphism test for invertible ideals: J = (num/den) * I.
struct IsoWitness {
  Element num, den;
};
std::optional<IsoWitness> is_isomorphic(const FinGenIdeal& i,
                                        const FinGenIdeal& j);

// Canonical enumeration of residue classes of R modulo a finite-index ideal
// of a connected ring (Z, Z/n, quadratic order).
class QuotientReps {
 public:
  explicit QuotientReps(const FinGenIdeal& ideal);
  const Int& count() const { return count_; }
  Element rep_at(const Int& idx) const;
  Element reduce(const Element& x) const;

 private:
  FinGenIdeal ideal_;
  RingPtr ring_;
  Int count_;
};

}  // namespace stacked

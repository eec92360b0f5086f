#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stacked/ideal.hpp"
#include "stacked/ring.hpp"
#include "stacked/zlattice.hpp"

namespace stacked {

// Dense exact matrix over a supported ring, row-major, immutable use.
class RingMatrix {
 public:
  RingMatrix() = default;
  RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols);
  RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols,
             std::vector<Element> entries);

  static RingMatrix identity(const RingPtr& ring, std::size_t n);

  const RingPtr& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Element& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Element& at(std::size_t i, std::size_t j) const {
    return e_[i * cols_ + j];
  }

  std::vector<Element> row(std::size_t i) const;
  std::vector<Element> col(std::size_t j) const;

  bool is_zero() const;
  bool operator==(const RingMatrix& o) const;

 private:
  RingPtr ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Element> e_;
};

RingMatrix mat_mul(const RingMatrix& a, const RingMatrix& b);
RingMatrix mat_add(const RingMatrix& a, const RingMatrix& b);
RingMatrix mat_sub(const RingMatrix& a, const RingMatrix& b);
RingMatrix mat_transpose(const RingMatrix& a);
RingMatrix mat_from_cols(const RingPtr& ring,
                         const std::vector<std::vector<Element>>& cols,
                         std::size_t nrows);

// Commutative-ring determinant: cofactor expansion up to 4x4, fraction-free
// elimination on integer lifts beyond that (componentwise on products).
Element determinant(const RingMatrix& a);
bool mat_is_invertible(const RingMatrix& a);
// Inverse of a matrix whose determinant is a unit (adjugate scaled by 1/det).
RingMatrix mat_inverse(const RingMatrix& a);

// P*A = T with P invertible over the ring and T in triangular Hermite shape
// (row echelon: pivots move right as rows descend, zeros below each pivot,
// entries above a pivot reduced, pivots normalised to the canonical
// associate). Requires a Bezout instance.
struct HermiteResult {
  RingMatrix p, t;
};
HermiteResult hermite_reduce(const RingMatrix& a);

FinGenIdeal content_of_matrix(const RingMatrix& a);

// --- column-span (submodule of R^n) helpers ---

// Does the column span of gens contain x? Exact, via integer lattices
// (lifting residue rings, componentwise on products).
bool span_contains(const RingPtr& ring,
                   const std::vector<std::vector<Element>>& gens,
                   const std::vector<Element>& x);

// Coefficients expressing x as a ring-combination of gens, if possible.
std::optional<std::vector<Element>> span_express(
    const RingPtr& ring, const std::vector<std::vector<Element>>& gens,
    const std::vector<Element>& x);

bool same_span(const RingPtr& ring,
               const std::vector<std::vector<Element>>& a,
               const std::vector<std::vector<Element>>& b);

// Rank of the span over the total fraction field (domains) or the maximal
// free rank of the lift (used for stage counting on domains only).
std::size_t span_rank(const RingPtr& ring,
                      const std::vector<std::vector<Element>>& gens);

// vector helpers
std::vector<Element> vec_add(const std::vector<Element>& a,
                             const std::vector<Element>& b);
std::vector<Element> vec_scale(const Element& s, const std::vector<Element>& a);
std::vector<Element> vec_sub(const std::vector<Element>& a,
                             const std::vector<Element>& b);
bool vec_is_zero(const std::vector<Element>& a);
Element dot(const std::vector<Element>& a, const std::vector<Element>& b);

}  // namespace stacked

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stacked/numeric.hpp"

namespace stacked {

// Dense integer matrix, row-major. The exact-arithmetic workhorse behind
// ideal normal forms, module membership and the residue-ring reduction
// routes. Rows usually hold lattice generators in coordinates.
struct ZMat {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> a;

  ZMat() = default;
  ZMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static ZMat identity(std::size_t n);
  bool operator==(const ZMat&) const = default;
};

ZMat z_mul(const ZMat& A, const ZMat& B);
ZMat z_transpose(const ZMat& A);
ZMat z_stack_rows(const ZMat& A, const ZMat& B);
bool z_is_zero(const ZMat& A);

// Determinant by fraction-free Bareiss elimination (square A).
Int z_det(const ZMat& A);

// Row Hermite normal form: U*A = H with U unimodular. H is in row-echelon
// Hermite shape: pivot columns strictly increase, pivots positive, entries
// above a pivot reduced into [0, pivot), zero rows at the bottom.
// pivots[i] = column of the pivot in row i, for each nonzero row.
struct RowHnf {
  ZMat h;
  ZMat u;                         // transform: u * input = h
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};
RowHnf row_hnf(const ZMat& A);

// Is x in the row span of H (H in row HNF)?
bool hnf_contains(const RowHnf& H, const std::vector<Int>& x);

// Coefficients c with c * A_rows = x, for x in the row span; uses the
// recorded transform, so the combination is over the original rows.
std::optional<std::vector<Int>> hnf_express(const RowHnf& H,
                                            const std::vector<Int>& x);

// Basis of { t : t * A = 0 } (left kernel), as rows.
ZMat z_left_kernel(const ZMat& A);

// Basis (as rows) of the intersection of the row lattices of A and B.
ZMat z_lattice_intersect(const ZMat& A, const ZMat& B);

// Smith normal form with transforms: P*A*Q = D, D diagonal with
// d_1 | d_2 | ..., all d_i >= 0; P, Q unimodular.
struct Snf {
  ZMat p, d, q;
};
Snf smith_form(const ZMat& A);

// Inverse of a matrix with determinant +-1 (adjugate).
ZMat z_inverse_unimodular(const ZMat& A);

}  // namespace stacked

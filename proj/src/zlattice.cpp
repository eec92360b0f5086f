#include "stacked/zlattice.hpp"

#include <cassert>
#include <stdexcept>

namespace stacked {

ZMat ZMat::identity(std::size_t n) {
  ZMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

ZMat z_mul(const ZMat& A, const ZMat& B) {
  assert(A.cols == B.rows);
  ZMat C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      const Int& aik = A.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

ZMat z_transpose(const ZMat& A) {
  ZMat T(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

ZMat z_stack_rows(const ZMat& A, const ZMat& B) {
  assert(A.cols == B.cols || A.rows == 0 || B.rows == 0);
  std::size_t cols = A.rows ? A.cols : B.cols;
  ZMat C(A.rows + B.rows, cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) C.at(i, j) = A.at(i, j);
  for (std::size_t i = 0; i < B.rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
  return C;
}

bool z_is_zero(const ZMat& A) {
  for (const Int& x : A.a)
    if (x != 0) return false;
  return true;
}

Int z_det(const ZMat& A) {
  assert(A.rows == A.cols);
  std::size_t n = A.rows;
  if (n == 0) return 1;
  ZMat m = A;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && m.at(s, k) == 0) ++s;
      if (s == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(s, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m.at(i, j) = div_exact(m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j),
                               prev);
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

namespace {

void row_axpy(ZMat& M, std::size_t dst, std::size_t src, const Int& c) {
  if (c == 0) return;
  for (std::size_t j = 0; j < M.cols; ++j) M.at(dst, j) += c * M.at(src, j);
}

// Replace rows (r, i) by unimodular combinations putting gcd of the two
// column-c entries at (r, c) and 0 at (i, c).
void gcd_rows(ZMat& H, ZMat& U, std::size_t r, std::size_t i, std::size_t c) {
  const Int& x = H.at(r, c);
  const Int& y = H.at(i, c);
  if (y == 0) return;
  if (x == 0) {
    for (std::size_t j = 0; j < H.cols; ++j) std::swap(H.at(r, j), H.at(i, j));
    for (std::size_t j = 0; j < U.cols; ++j) std::swap(U.at(r, j), U.at(i, j));
    return;
  }
  ExtGcd e = ext_gcd(x, y);
  Int x1 = div_exact(x, e.g), y1 = div_exact(y, e.g);
  // [ u  v ] [row_r]   [gcd ...]
  // [-y1 x1] [row_i] = [0   ...]
  auto apply = [&](ZMat& M) {
    for (std::size_t j = 0; j < M.cols; ++j) {
      Int nr = e.u * M.at(r, j) + e.v * M.at(i, j);
      Int ni = -y1 * M.at(r, j) + x1 * M.at(i, j);
      M.at(r, j) = nr;
      M.at(i, j) = ni;
    }
  };
  apply(H);
  apply(U);
}

}  // namespace

RowHnf row_hnf(const ZMat& A) {
  RowHnf out;
  out.h = A;
  out.u = ZMat::identity(A.rows);
  ZMat& H = out.h;
  ZMat& U = out.u;
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols && r < A.rows; ++c) {
    for (std::size_t i = r + 1; i < A.rows; ++i) gcd_rows(H, U, r, i, c);
    if (H.at(r, c) == 0) continue;
    if (H.at(r, c) < 0) {
      for (std::size_t j = 0; j < H.cols; ++j) H.at(r, j) = -H.at(r, j);
      for (std::size_t j = 0; j < U.cols; ++j) U.at(r, j) = -U.at(r, j);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H.at(i, c).get_mpz_t(), H.at(r, c).get_mpz_t());
      row_axpy(H, i, r, -q);
      row_axpy(U, i, r, -q);
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

bool hnf_contains(const RowHnf& H, const std::vector<Int>& x) {
  assert(x.size() == H.h.cols);
  std::vector<Int> y = x;
  for (std::size_t i = 0; i < H.pivots.size(); ++i) {
    std::size_t c = H.pivots[i];
    if (y[c] == 0) continue;
    const Int& p = H.h.at(i, c);
    if (y[c] % p != 0) return false;
    Int q = div_exact(y[c], p);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] -= q * H.h.at(i, j);
  }
  for (const Int& v : y)
    if (v != 0) return false;
  return true;
}

std::optional<std::vector<Int>> hnf_express(const RowHnf& H,
                                            const std::vector<Int>& x) {
  assert(x.size() == H.h.cols);
  std::vector<Int> y = x;
  std::vector<Int> coeff_h(H.h.rows, Int(0));
  for (std::size_t i = 0; i < H.pivots.size(); ++i) {
    std::size_t c = H.pivots[i];
    if (y[c] == 0) continue;
    const Int& p = H.h.at(i, c);
    if (y[c] % p != 0) return std::nullopt;
    Int q = div_exact(y[c], p);
    coeff_h[i] = q;
    for (std::size_t j = 0; j < y.size(); ++j) y[j] -= q * H.h.at(i, j);
  }
  for (const Int& v : y)
    if (v != 0) return std::nullopt;
  // x = coeff_h * H = coeff_h * U * A.
  std::vector<Int> coeff_a(H.u.cols, Int(0));
  for (std::size_t i = 0; i < H.u.rows; ++i) {
    if (coeff_h[i] == 0) continue;
    for (std::size_t j = 0; j < H.u.cols; ++j)
      coeff_a[j] += coeff_h[i] * H.u.at(i, j);
  }
  return coeff_a;
}

ZMat z_left_kernel(const ZMat& A) {
  RowHnf h = row_hnf(A);
  std::size_t rank = h.pivots.size();
  ZMat K(A.rows - rank, A.rows);
  for (std::size_t i = rank; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.rows; ++j) K.at(i - rank, j) = h.u.at(i, j);
  return K;
}

ZMat z_lattice_intersect(const ZMat& A, const ZMat& B) {
  if (A.rows == 0 || B.rows == 0) return ZMat(0, A.cols ? A.cols : B.cols);
  assert(A.cols == B.cols);
  ZMat C = z_stack_rows(A, B);
  ZMat K = z_left_kernel(C);  // t with t*C = 0
  // For each kernel row t, sum_{i<A.rows} t_i A_i lies in both lattices.
  ZMat G(K.rows, A.cols);
  for (std::size_t k = 0; k < K.rows; ++k)
    for (std::size_t i = 0; i < A.rows; ++i)
      if (K.at(k, i) != 0)
        for (std::size_t j = 0; j < A.cols; ++j)
          G.at(k, j) += K.at(k, i) * A.at(i, j);
  RowHnf h = row_hnf(G);
  ZMat R(h.pivots.size(), A.cols);
  for (std::size_t i = 0; i < R.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) R.at(i, j) = h.h.at(i, j);
  return R;
}

Snf smith_form(const ZMat& A) {
  Snf s;
  s.d = A;
  s.p = ZMat::identity(A.rows);
  s.q = ZMat::identity(A.cols);
  ZMat& D = s.d;
  ZMat& P = s.p;
  ZMat& Q = s.q;

  auto col_gcd_step = [&](std::size_t c, std::size_t j, std::size_t pivot_row) {
    // column ops mirror gcd_rows, acting on D columns and Q columns
    const Int x = D.at(pivot_row, c);
    const Int y = D.at(pivot_row, j);
    if (y == 0) return;
    if (x == 0) {
      for (std::size_t i = 0; i < D.rows; ++i) std::swap(D.at(i, c), D.at(i, j));
      for (std::size_t i = 0; i < Q.rows; ++i) std::swap(Q.at(i, c), Q.at(i, j));
      return;
    }
    ExtGcd e = ext_gcd(x, y);
    Int x1 = div_exact(x, e.g), y1 = div_exact(y, e.g);
    auto apply = [&](ZMat& M) {
      for (std::size_t i = 0; i < M.rows; ++i) {
        Int nc = e.u * M.at(i, c) + e.v * M.at(i, j);
        Int nj = -y1 * M.at(i, c) + x1 * M.at(i, j);
        M.at(i, c) = nc;
        M.at(i, j) = nj;
      }
    };
    apply(D);
    apply(Q);
  };

  std::size_t n = std::min(A.rows, A.cols);
  for (std::size_t k = 0; k < n; ++k) {
    // Move a nonzero entry into (k, k) if any remains.
    std::size_t pi = k, pj = k;
    bool found = false;
    for (std::size_t i = k; i < D.rows && !found; ++i)
      for (std::size_t j = k; j < D.cols && !found; ++j)
        if (D.at(i, j) != 0) {
          pi = i;
          pj = j;
          found = true;
        }
    if (!found) break;
    if (pi != k) {
      for (std::size_t j = 0; j < D.cols; ++j) std::swap(D.at(k, j), D.at(pi, j));
      for (std::size_t j = 0; j < P.cols; ++j) std::swap(P.at(k, j), P.at(pi, j));
    }
    if (pj != k) {
      for (std::size_t i = 0; i < D.rows; ++i) std::swap(D.at(i, k), D.at(i, pj));
      for (std::size_t i = 0; i < Q.rows; ++i) std::swap(Q.at(i, k), Q.at(i, pj));
    }
    for (;;) {
      for (std::size_t i = k + 1; i < D.rows; ++i) gcd_rows(D, P, k, i, k);
      for (std::size_t j = k + 1; j < D.cols; ++j) col_gcd_step(k, j, k);
      // rows may have been refilled by the column steps
      bool clean = true;
      for (std::size_t i = k + 1; i < D.rows && clean; ++i)
        if (D.at(i, k) != 0) clean = false;
      for (std::size_t j = k + 1; j < D.cols && clean; ++j)
        if (D.at(k, j) != 0) clean = false;
      if (!clean) continue;
      // enforce divisibility: pivot must divide every remaining entry
      bool fixed = true;
      for (std::size_t i = k + 1; i < D.rows && fixed; ++i)
        for (std::size_t j = k + 1; j < D.cols && fixed; ++j)
          if (D.at(i, j) % D.at(k, k) != 0) {
            row_axpy(D, k, i, Int(1));
            row_axpy(P, k, i, Int(1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (D.at(k, k) < 0) {
      for (std::size_t j = 0; j < D.cols; ++j) D.at(k, j) = -D.at(k, j);
      for (std::size_t j = 0; j < P.cols; ++j) P.at(k, j) = -P.at(k, j);
    }
  }
  return s;
}

ZMat z_inverse_unimodular(const ZMat& A) {
  assert(A.rows == A.cols);
  std::size_t n = A.rows;
  Int det = z_det(A);
  assert(det == 1 || det == -1);
  ZMat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ZMat sub(n - 1, n - 1);
      std::size_t rr = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::size_t cc = 0;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == j) continue;
          sub.at(rr, cc++) = A.at(r, c);
        }
        ++rr;
      }
      Int cof = z_det(sub);
      if ((i + j) % 2 == 1) cof = -cof;
      inv.at(j, i) = det == 1 ? cof : Int(-cof);
    }
  return inv;
}

}  // namespace stacked

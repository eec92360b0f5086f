#include "stacked/matrix.hpp"

#include <algorithm>
#include <cassert>

namespace stacked {

RingMatrix::RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols) {
  e_.assign(rows_ * cols_, ring_->zero());
}

RingMatrix::RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols,
                       std::vector<Element> entries)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), e_(std::move(entries)) {
  if (e_.size() != rows_ * cols_)
    throw PreconditionError("matrix entry count mismatch");
  for (const Element& x : e_)
    if (!x.ring()->equals(*ring_)) throw PreconditionError("ring mismatch");
}

RingMatrix RingMatrix::identity(const RingPtr& ring, std::size_t n) {
  RingMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring->one();
  return m;
}

std::vector<Element> RingMatrix::row(std::size_t i) const {
  std::vector<Element> r;
  for (std::size_t j = 0; j < cols_; ++j) r.push_back(at(i, j));
  return r;
}

std::vector<Element> RingMatrix::col(std::size_t j) const {
  std::vector<Element> c;
  for (std::size_t i = 0; i < rows_; ++i) c.push_back(at(i, j));
  return c;
}

bool RingMatrix::is_zero() const {
  for (const Element& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

bool RingMatrix::operator==(const RingMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && ring_->equals(*o.ring_) &&
         e_ == o.e_;
}

RingMatrix mat_mul(const RingMatrix& a, const RingMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("dimension mismatch");
  const RingPtr& ring = a.ring();
  RingMatrix c(ring, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Element& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c.at(i, j) = ring->add(c.at(i, j), ring->mul(aik, b.at(k, j)));
    }
  return c;
}

RingMatrix mat_add(const RingMatrix& a, const RingMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw PreconditionError("dimension mismatch");
  RingMatrix c(a.ring(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c.at(i, j) = a.ring()->add(a.at(i, j), b.at(i, j));
  return c;
}

RingMatrix mat_sub(const RingMatrix& a, const RingMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw PreconditionError("dimension mismatch");
  RingMatrix c(a.ring(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c.at(i, j) = a.ring()->sub(a.at(i, j), b.at(i, j));
  return c;
}

RingMatrix mat_transpose(const RingMatrix& a) {
  RingMatrix t(a.ring(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

RingMatrix mat_from_cols(const RingPtr& ring,
                         const std::vector<std::vector<Element>>& cols,
                         std::size_t nrows) {
  RingMatrix m(ring, nrows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != nrows) throw PreconditionError("column length mismatch");
    for (std::size_t i = 0; i < nrows; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Determinant

namespace {

Element det_cofactor(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  std::size_t n = a.rows();
  if (n == 0) return ring->one();
  if (n == 1) return a.at(0, 0);
  Element acc = ring->zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (a.at(0, j).is_zero()) continue;
    RingMatrix sub(ring, n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        sub.at(i - 1, cc++) = a.at(i, c);
      }
    }
    Element term = ring->mul(a.at(0, j), det_cofactor(sub));
    acc = (j % 2 == 0) ? ring->add(acc, term) : ring->sub(acc, term);
  }
  return acc;
}

// Exact division in a quadratic order: x / y via conj(y)/norm(y).
std::optional<Element> quad_div_exact(const Element& x, const Element& y) {
  const RingPtr& ring = x.ring();
  Int n = ring->norm(y);
  if (n == 0) return std::nullopt;
  Element t = ring->mul(x, ring->conj(y));
  const QuadCoord& c = t.as_quad();
  if (c.a % n != 0 || c.b % n != 0) return std::nullopt;
  return ring->make_quad(div_exact(c.a, n), div_exact(c.b, n));
}

Element det_bareiss_domain(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  std::size_t n = a.rows();
  RingMatrix m = a;
  Element prev = ring->one();
  bool neg = false;
  auto divx = [&](const Element& x, const Element& y) {
    if (ring->kind() == Ring::Kind::Integers)
      return ring->from_int(div_exact(x.as_int(), y.as_int()));
    auto q = quad_div_exact(x, y);
    if (!q) throw PreconditionError("bareiss: inexact division");
    return *q;
  };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k).is_zero()) {
      std::size_t s = k + 1;
      while (s < n && m.at(s, k).is_zero()) ++s;
      if (s == n) return ring->zero();
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(s, j));
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Element num = ring->sub(ring->mul(m.at(i, j), m.at(k, k)),
                                ring->mul(m.at(i, k), m.at(k, j)));
        m.at(i, j) = divx(num, prev);
      }
    prev = m.at(k, k);
  }
  Element d = m.at(n - 1, n - 1);
  return neg ? ring->neg(d) : d;
}

}  // namespace

Element determinant(const RingMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionError("determinant of non-square");
  const RingPtr& ring = a.ring();
  std::size_t n = a.rows();
  if (ring->kind() == Ring::Kind::Product) {
    std::vector<Element> comps;
    const auto& fs = ring->factors();
    for (std::size_t f = 0; f < fs.size(); ++f) {
      RingMatrix sub(fs[f], n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          sub.at(i, j) = a.at(i, j).as_tuple()[f];
      comps.push_back(determinant(sub));
    }
    return ring->make_tuple(std::move(comps));
  }
  if (n <= 4) return det_cofactor(a);
  switch (ring->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Quadratic:
      return det_bareiss_domain(a);
    case Ring::Kind::Residue: {
      ZMat z(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) z.at(i, j) = a.at(i, j).as_int();
      return ring->from_int(z_det(z));
    }
    default:
      throw std::logic_error("unreachable");
  }
}

bool mat_is_invertible(const RingMatrix& a) {
  if (a.rows() != a.cols()) return false;
  return a.ring()->is_unit(determinant(a));
}

RingMatrix mat_inverse(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  std::size_t n = a.rows();
  Element det = determinant(a);
  auto dinv = ring->inverse_of_unit(det);
  if (!dinv) throw PreconditionError("matrix is not invertible");
  RingMatrix adj(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RingMatrix sub(ring, n - 1, n - 1);
      std::size_t rr = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::size_t cc = 0;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == j) continue;
          sub.at(rr, cc++) = a.at(r, c);
        }
        ++rr;
      }
      Element cof = determinant(sub);
      if ((i + j) % 2 == 1) cof = ring->neg(cof);
      adj.at(j, i) = ring->mul(cof, *dinv);
    }
  return adj;
}

// ---------------------------------------------------------------------------
// Hermite reduction over Bezout instances

namespace {

struct HermiteCtx {
  RingPtr ring;
  RingMatrix t, p;
};

// Unimodular 2-row operation on rows (r, i) that puts the gcd of the two
// column-c entries at (r, c) and zero at (i, c). Uses an integer det-1
// transform on lifts, so P stays invertible over the ring.
void gcd_rows_ring(HermiteCtx& ctx, std::size_t r, std::size_t i,
                   std::size_t c) {
  const RingPtr& ring = ctx.ring;
  const Element& x = ctx.t.at(r, c);
  const Element& y = ctx.t.at(i, c);
  if (y.is_zero()) return;
  auto swap_rows = [&](RingMatrix& m) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(r, j), m.at(i, j));
  };
  if (x.is_zero()) {
    swap_rows(ctx.t);
    swap_rows(ctx.p);
    return;
  }
  ExtGcd e = ext_gcd(x.as_int(), y.as_int());
  Int x1 = div_exact(x.as_int(), e.g), y1 = div_exact(y.as_int(), e.g);
  Element eu = ring->from_int(e.u), ev = ring->from_int(e.v);
  Element ex1 = ring->from_int(x1), ey1 = ring->from_int(y1);
  auto apply = [&](RingMatrix& m) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Element nr = ring->add(ring->mul(eu, m.at(r, j)), ring->mul(ev, m.at(i, j)));
      Element ni = ring->sub(ring->mul(ex1, m.at(i, j)), ring->mul(ey1, m.at(r, j)));
      m.at(r, j) = nr;
      m.at(i, j) = ni;
    }
  };
  apply(ctx.t);
  apply(ctx.p);
}

void scale_row(HermiteCtx& ctx, std::size_t r, const Element& u) {
  for (std::size_t j = 0; j < ctx.t.cols(); ++j)
    ctx.t.at(r, j) = ctx.ring->mul(u, ctx.t.at(r, j));
  for (std::size_t j = 0; j < ctx.p.cols(); ++j)
    ctx.p.at(r, j) = ctx.ring->mul(u, ctx.p.at(r, j));
}

void axpy_row(HermiteCtx& ctx, std::size_t dst, std::size_t src,
              const Element& s) {
  if (s.is_zero()) return;
  for (std::size_t j = 0; j < ctx.t.cols(); ++j)
    ctx.t.at(dst, j) =
        ctx.ring->add(ctx.t.at(dst, j), ctx.ring->mul(s, ctx.t.at(src, j)));
  for (std::size_t j = 0; j < ctx.p.cols(); ++j)
    ctx.p.at(dst, j) =
        ctx.ring->add(ctx.p.at(dst, j), ctx.ring->mul(s, ctx.p.at(src, j)));
}

HermiteResult hermite_connected(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  bool residue = ring->kind() == Ring::Kind::Residue;
  HermiteCtx ctx{ring, a, RingMatrix::identity(ring, a.rows())};
  std::size_t r = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    for (std::size_t i = r + 1; i < a.rows(); ++i) gcd_rows_ring(ctx, r, i, c);
    Element pivot = ctx.t.at(r, c);
    if (residue) {
      // a lifted gcd may be zero mod n even when lifts were not
      if (pivot.is_zero()) continue;
      // normalise the pivot to the canonical divisor of n
      const Int& n = ring->modulus();
      Int lift = pivot.as_int();
      Int g = gcd(lift, n);
      Int t = div_exact(lift, g);
      Int tp = lift_to_unit(t, n, div_exact(n, g));
      Element u = *ring->inverse_of_unit(ring->from_int(tp));
      scale_row(ctx, r, u);
    } else {  // integers
      if (pivot.is_zero()) continue;
      if (pivot.as_int() < 0) scale_row(ctx, r, ring->from_int(-1));
    }
    // reduce entries above the pivot
    const Int piv = ctx.t.at(r, c).as_int();
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), ctx.t.at(i, c).as_int().get_mpz_t(),
                 piv.get_mpz_t());
      axpy_row(ctx, i, r, ring->from_int(-q));
    }
    pivots.emplace_back(r, c);
    ++r;
  }
  return {ctx.p, ctx.t};
}

}  // namespace

HermiteResult hermite_reduce(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  if (!ring->is_bezout())
    throw DomainError("hermite_reduce requires a Bezout instance");
  if (ring->kind() != Ring::Kind::Product) return hermite_connected(a);
  const auto& fs = ring->factors();
  std::vector<HermiteResult> parts;
  for (std::size_t f = 0; f < fs.size(); ++f) {
    RingMatrix sub(fs[f], a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        sub.at(i, j) = a.at(i, j).as_tuple()[f];
    parts.push_back(hermite_reduce(sub));
  }
  auto assemble = [&](auto&& get, std::size_t rows, std::size_t cols) {
    RingMatrix m(ring, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        std::vector<Element> t;
        for (std::size_t f = 0; f < fs.size(); ++f)
          t.push_back(get(parts[f], i, j));
        m.at(i, j) = ring->make_tuple(std::move(t));
      }
    return m;
  };
  return {assemble([](const HermiteResult& h, std::size_t i,
                      std::size_t j) { return h.p.at(i, j); },
                   a.rows(), a.rows()),
          assemble([](const HermiteResult& h, std::size_t i,
                      std::size_t j) { return h.t.at(i, j); },
                   a.rows(), a.cols())};
}

FinGenIdeal content_of_matrix(const RingMatrix& a) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) gens.push_back(a.at(i, j));
  if (gens.empty()) gens.push_back(a.ring()->zero());
  return FinGenIdeal::normalize(a.ring(), std::move(gens));
}

// ---------------------------------------------------------------------------
// Column-span helpers

namespace {

// Rows of the Z-lattice that realises the span of the generator vectors.
// Fills `per_gen_rows` with how many lattice rows each generator produced
// (the trailing rows are torsion padding with no generator attached).
ZMat span_rows(const RingPtr& ring, const std::vector<std::vector<Element>>& gens,
               std::size_t len, std::size_t* gen_rows, std::size_t* coords) {
  switch (ring->kind()) {
    case Ring::Kind::Integers: {
      *gen_rows = 1;
      *coords = len;
      ZMat m(gens.size(), len);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < len; ++j) m.at(i, j) = gens[i][j].as_int();
      return m;
    }
    case Ring::Kind::Quadratic: {
      *gen_rows = 2;
      *coords = 2 * len;
      ZMat m(2 * gens.size(), 2 * len);
      Element w = ring->make_quad(0, 1);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = 0; j < len; ++j) {
          const QuadCoord& g = gens[i][j].as_quad();
          Element wg = ring->mul(gens[i][j], w);
          m.at(2 * i, 2 * j) = g.a;
          m.at(2 * i, 2 * j + 1) = g.b;
          m.at(2 * i + 1, 2 * j) = wg.as_quad().a;
          m.at(2 * i + 1, 2 * j + 1) = wg.as_quad().b;
        }
      }
      return m;
    }
    case Ring::Kind::Residue: {
      *gen_rows = 1;
      *coords = len;
      ZMat m(gens.size() + len, len);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < len; ++j) m.at(i, j) = gens[i][j].as_int();
      for (std::size_t j = 0; j < len; ++j)
        m.at(gens.size() + j, j) = ring->modulus();
      return m;
    }
    default:
      throw PreconditionError("span_rows: connected rings only");
  }
}

std::vector<Int> coord_vector(const RingPtr& ring,
                              const std::vector<Element>& x) {
  std::vector<Int> v;
  for (const Element& e : x) {
    if (ring->kind() == Ring::Kind::Quadratic) {
      v.push_back(e.as_quad().a);
      v.push_back(e.as_quad().b);
    } else {
      v.push_back(e.as_int());
    }
  }
  return v;
}

}  // namespace

std::optional<std::vector<Element>> span_express(
    const RingPtr& ring, const std::vector<std::vector<Element>>& gens,
    const std::vector<Element>& x) {
  if (ring->kind() == Ring::Kind::Product) {
    const auto& fs = ring->factors();
    std::vector<std::vector<Element>> per_comp;
    for (std::size_t f = 0; f < fs.size(); ++f) {
      std::vector<std::vector<Element>> cg;
      for (const auto& g : gens) {
        std::vector<Element> v;
        for (const Element& e : g) v.push_back(e.as_tuple()[f]);
        cg.push_back(std::move(v));
      }
      std::vector<Element> cx;
      for (const Element& e : x) cx.push_back(e.as_tuple()[f]);
      auto c = span_express(fs[f], cg, cx);
      if (!c) return std::nullopt;
      per_comp.push_back(std::move(*c));
    }
    std::vector<Element> out;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::vector<Element> t;
      for (std::size_t f = 0; f < fs.size(); ++f) t.push_back(per_comp[f][g]);
      out.push_back(ring->make_tuple(std::move(t)));
    }
    return out;
  }
  if (gens.empty()) {
    for (const Element& e : x)
      if (!e.is_zero()) return std::nullopt;
    return std::vector<Element>{};
  }
  std::size_t len = x.size();
  std::size_t gen_rows = 0, coords = 0;
  ZMat rows = span_rows(ring, gens, len, &gen_rows, &coords);
  RowHnf h = row_hnf(rows);
  auto c = hnf_express(h, coord_vector(ring, x));
  if (!c) return std::nullopt;
  std::vector<Element> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (ring->kind() == Ring::Kind::Quadratic)
      out.push_back(ring->make_quad((*c)[2 * i], (*c)[2 * i + 1]));
    else
      out.push_back(ring->from_int((*c)[i]));
  }
  return out;
}

bool span_contains(const RingPtr& ring,
                   const std::vector<std::vector<Element>>& gens,
                   const std::vector<Element>& x) {
  if (ring->kind() == Ring::Kind::Product)
    return span_express(ring, gens, x).has_value();
  if (gens.empty()) {
    for (const Element& e : x)
      if (!e.is_zero()) return false;
    return true;
  }
  std::size_t gen_rows = 0, coords = 0;
  ZMat rows = span_rows(ring, gens, x.size(), &gen_rows, &coords);
  RowHnf h = row_hnf(rows);
  return hnf_contains(h, coord_vector(ring, x));
}

bool same_span(const RingPtr& ring, const std::vector<std::vector<Element>>& a,
               const std::vector<std::vector<Element>>& b) {
  for (const auto& v : a)
    if (!span_contains(ring, b, v)) return false;
  for (const auto& v : b)
    if (!span_contains(ring, a, v)) return false;
  return true;
}

std::size_t span_rank(const RingPtr& ring,
                      const std::vector<std::vector<Element>>& gens) {
  if (!ring->is_domain())
    throw PreconditionError("span_rank is defined over domains");
  if (gens.empty()) return 0;
  std::size_t gen_rows = 0, coords = 0;
  ZMat rows = span_rows(ring, gens, gens.front().size(), &gen_rows, &coords);
  RowHnf h = row_hnf(rows);
  std::size_t zrank = h.pivots.size();
  return ring->kind() == Ring::Kind::Quadratic ? zrank / 2 : zrank;
}

std::vector<Element> vec_add(const std::vector<Element>& a,
                             const std::vector<Element>& b) {
  std::vector<Element> c;
  for (std::size_t i = 0; i < a.size(); ++i)
    c.push_back(a[i].ring()->add(a[i], b[i]));
  return c;
}

std::vector<Element> vec_sub(const std::vector<Element>& a,
                             const std::vector<Element>& b) {
  std::vector<Element> c;
  for (std::size_t i = 0; i < a.size(); ++i)
    c.push_back(a[i].ring()->sub(a[i], b[i]));
  return c;
}

std::vector<Element> vec_scale(const Element& s, const std::vector<Element>& a) {
  std::vector<Element> c;
  for (const Element& x : a) c.push_back(s.ring()->mul(s, x));
  return c;
}

bool vec_is_zero(const std::vector<Element>& a) {
  for (const Element& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Element dot(const std::vector<Element>& a, const std::vector<Element>& b) {
  const RingPtr& ring = a.front().ring();
  Element s = ring->zero();
  for (std::size_t i = 0; i < a.size(); ++i)
    s = ring->add(s, ring->mul(a[i], b[i]));
  return s;
}

}  // namespace stacked

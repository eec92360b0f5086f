#include "stacked/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>

namespace stacked {

namespace {

constexpr std::size_t kSearchCap = 4'000'000;

std::vector<std::vector<Element>> matrix_columns(const RingMatrix& h) {
  std::vector<std::vector<Element>> cols;
  for (std::size_t j = 0; j < h.cols(); ++j) {
    auto c = h.col(j);
    if (!vec_is_zero(c)) cols.push_back(std::move(c));
  }
  return cols;
}

void dedupe_vectors(std::vector<std::vector<Element>>& v) {
  std::set<std::vector<Int>> seen;
  std::vector<std::vector<Element>> out;
  for (auto& x : v) {
    std::vector<Int> key;
    for (const Element& e : x) {
      auto f = e.flatten();
      key.insert(key.end(), f.begin(), f.end());
    }
    if (seen.insert(key).second) out.push_back(std::move(x));
  }
  v = std::move(out);
}

// Exact division x / y in a domain payload (integers or quadratic).
Element domain_div_exact(const Element& x, const Element& y) {
  const RingPtr& ring = x.ring();
  if (ring->kind() == Ring::Kind::Integers)
    return ring->from_int(div_exact(x.as_int(), y.as_int()));
  Int n = ring->norm(y);
  if (n == 0) throw PreconditionError("division by zero");
  Element t = ring->mul(x, ring->conj(y));
  const QuadCoord& c = t.as_quad();
  if (c.a % n != 0 || c.b % n != 0)
    throw PreconditionError("inexact quadratic division");
  return ring->make_quad(div_exact(c.a, n), div_exact(c.b, n));
}

RingMatrix outer_product(const std::vector<Element>& u,
                         const std::vector<Element>& lam) {
  const RingPtr& ring = u.front().ring();
  RingMatrix m(ring, u.size(), lam.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < lam.size(); ++j)
      m.at(i, j) = ring->mul(u[i], lam[j]);
  return m;
}

std::vector<Element> apply_matrix(const RingMatrix& m,
                                  const std::vector<Element>& v) {
  const RingPtr& ring = m.ring();
  std::vector<Element> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Element s = ring->zero();
    for (std::size_t j = 0; j < m.cols(); ++j)
      s = ring->add(s, ring->mul(m.at(i, j), v[j]));
    out.push_back(s);
  }
  return out;
}

// Functional lam with lam . u = 1, from expressing 1 in the content of u.
std::vector<Element> unit_content_functional(const std::vector<Element>& u) {
  const RingPtr& ring = u.front().ring();
  FinGenIdeal c = FinGenIdeal::normalize(ring, u);
  auto lam = c.express(ring->one());
  if (!lam) throw PreconditionError("vector does not have unit content");
  return *lam;
}

// --- UCS stage machinery over connected domains ---

struct UcsStage {
  std::vector<std::vector<Element>> unit_gens;
  RingMatrix projector_raw;
  bool monogenic = false;
};

FinGenIdeal content_of(const RingPtr& ring,
                       const std::vector<std::vector<Element>>& gens) {
  return content(ring, gens);
}

// Pseudo representation of a rank-one module: first nonzero generator v and
// the fractional coefficient ideal (nums)/den with M = (nums/den) * v.
struct Rank1Pseudo {
  std::vector<Element> v;
  FinGenIdeal nums;
  Element den;  // rational integer as ring element
};

Rank1Pseudo rank1_pseudo_rep(const RingPtr& ring,
                             const std::vector<std::vector<Element>>& gens) {
  // pick the generator and pivot coordinate with the smallest norm, which
  // keeps the coefficient-ideal lattice small
  const std::vector<Element>* v = nullptr;
  std::size_t p = 0;
  Int best = 0;
  for (const auto& g : gens)
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (g[c].is_zero()) continue;
      Int nrm = ring->kind() == Ring::Kind::Integers ? Int(abs(g[c].as_int()))
                                                     : Int(abs(ring->norm(g[c])));
      if (!v || nrm < best) {
        v = &g;
        p = c;
        best = nrm;
      }
    }
  if (!v) throw PreconditionError("rank-1 module is zero");
  // rank-1 consistency: g[r] v[p] = v[r] g[p]
  for (const auto& g : gens)
    for (std::size_t r = 0; r < v->size(); ++r)
      if (ring->mul(g[r], (*v)[p]) != ring->mul((*v)[r], g[p]))
        throw PreconditionError("module is not rank one");
  std::vector<Element> nums;
  Int den = 0;
  if (ring->kind() == Ring::Kind::Integers) {
    Int vp = (*v)[p].as_int();
    den = abs(vp);
    for (const auto& g : gens)
      nums.push_back(vp < 0 ? ring->neg(g[p]) : g[p]);
  } else {
    Element conj_vp = ring->conj((*v)[p]);
    den = ring->norm((*v)[p]);
    if (den < 0) {
      den = -den;
      conj_vp = ring->neg(conj_vp);
    }
    for (const auto& g : gens) nums.push_back(ring->mul(g[p], conj_vp));
  }
  FinGenIdeal ni = FinGenIdeal::normalize(ring, std::move(nums));
  // strip the common rational content of (nums)/den
  Int t;
  if (ring->kind() == Ring::Kind::Integers) {
    t = gcd(ni.int_gen(), den);
  } else {
    const QuadBasis& q = ni.quad_basis();
    t = gcd(gcd(q.a, gcd(q.b, q.c)), den);
  }
  if (t > 1) {
    std::vector<Element> reduced;
    for (const Element& g : ni.nf_gens())
      reduced.push_back(domain_div_exact(g, ring->from_int(t)));
    ni = FinGenIdeal::normalize(ring, std::move(reduced));
    den = div_exact(den, t);
  }
  return {*v, ni, ring->from_int(den)};
}

UcsStage rank1_stage(const RingPtr& ring,
                     const std::vector<std::vector<Element>>& gens) {
  Rank1Pseudo pr = rank1_pseudo_rep(ring, gens);
  UcsStage out;
  auto scaled_gen = [&](const Element& num) {
    std::vector<Element> g;
    for (const Element& vi : pr.v)
      g.push_back(domain_div_exact(ring->mul(num, vi), pr.den));
    return g;
  };
  if (auto gamma = is_principal(pr.nums)) {
    std::vector<Element> u = scaled_gen(*gamma);
    auto lam = unit_content_functional(u);
    out.unit_gens = {u};
    out.projector_raw = outer_product(u, lam);
    out.monogenic = true;
    return out;
  }
  // Non-principal coefficient ideal: the summand is the rank-one module
  // itself; its projector is v * a^T for a with sum a_j v_j = 1, a_j in the
  // coefficient ideal, obtained by expressing den inside (nums)*(content v).
  std::vector<Element> prod_gens;
  for (const Element& nu : pr.nums.nf_gens())
    for (const Element& vj : pr.v) prod_gens.push_back(ring->mul(nu, vj));
  FinGenIdeal p = FinGenIdeal::normalize(ring, prod_gens);
  auto coeff = p.express(pr.den);
  if (!coeff)
    throw PreconditionError("rank-one stage: content obstruction (c(M) != R)");
  std::size_t nn = pr.v.size();
  std::size_t ng = pr.nums.nf_gens().size();
  RingMatrix proj(ring, nn, nn);
  for (std::size_t r = 0; r < nn; ++r)
    for (std::size_t j = 0; j < nn; ++j) {
      Element s = ring->zero();
      for (std::size_t i = 0; i < ng; ++i) {
        const Element& cij = (*coeff)[i * nn + j];
        if (cij.is_zero()) continue;
        Element prod = ring->mul(pr.nums.nf_gens()[i], pr.v[r]);
        s = ring->add(s, ring->mul(cij, domain_div_exact(prod, pr.den)));
      }
      proj.at(r, j) = s;
    }
  for (const Element& nu : pr.nums.nf_gens())
    out.unit_gens.push_back(scaled_gen(nu));
  out.projector_raw = proj;
  out.monogenic = false;
  return out;
}

std::vector<Element> pair_minors(const RingPtr& ring,
                                 const std::vector<Element>& x,
                                 const std::vector<Element>& y) {
  std::vector<Element> minors;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      minors.push_back(
          ring->sub(ring->mul(x[i], y[j]), ring->mul(x[j], y[i])));
  return minors;
}

struct PartnerResult {
  std::vector<Element> y;
  bool independent = false;  // some 2x2 minor of [x y] is nonzero
};

// Breadth-first search over the image of the module modulo c(x), looking
// for y in the module with c(x) + c(y) = R. Partners independent of x are
// preferred; a parallel one is returned only when no other exists.
// Combinations over the generators are tracked so y is produced exactly.
std::optional<PartnerResult> search_coprime_partner(
    const RingPtr& ring, const std::vector<std::vector<Element>>& gens,
    const std::vector<Element>& x, const FinGenIdeal& cx) {
  QuotientReps reps(cx);
  std::vector<std::vector<Element>> step_gens = gens;
  if (ring->kind() == Ring::Kind::Quadratic) {
    Element w = ring->make_quad(0, 1);
    for (const auto& g : gens) step_gens.push_back(vec_scale(w, g));
  }
  auto reduce_vec = [&](const std::vector<Element>& v) {
    std::vector<Int> key;
    for (const Element& e : v) {
      auto f = reps.reduce(e).flatten();
      key.insert(key.end(), f.begin(), f.end());
    }
    return key;
  };
  std::set<std::vector<Int>> seen;
  std::vector<std::vector<Element>> queue;  // exact module elements
  std::vector<Element> zero_vec(gens.front().size(), ring->zero());
  queue.push_back(zero_vec);
  seen.insert(reduce_vec(zero_vec));
  std::optional<PartnerResult> parallel;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    if (seen.size() > kSearchCap)
      throw SearchExhausted("ucs partner search exceeded cap");
    std::vector<Element> cur = queue[head];
    for (const auto& g : step_gens) {
      std::vector<Element> nxt = vec_add(cur, g);
      auto key = reduce_vec(nxt);
      if (!seen.insert(key).second) continue;
      FinGenIdeal cy = FinGenIdeal::normalize(ring, nxt);
      if (ideal_sum(cx, cy).is_unit_ideal()) {
        bool indep =
            !FinGenIdeal::normalize(ring, pair_minors(ring, x, nxt)).is_zero();
        if (indep) return PartnerResult{nxt, true};
        if (!parallel) parallel = PartnerResult{nxt, false};
      }
      queue.push_back(std::move(nxt));
    }
  }
  return parallel;
}

UcsStage ucs_stage_domain(const RingPtr& ring,
                          const std::vector<std::vector<Element>>& gens_in) {
  std::vector<std::vector<Element>> gens = gens_in;
  dedupe_vectors(gens);
  if (gens.empty()) throw PreconditionError("ucs stage on zero module");

  auto monogenic = [&](const std::vector<Element>& u) {
    UcsStage s;
    auto lam = unit_content_functional(u);
    s.unit_gens = {u};
    s.projector_raw = outer_product(u, lam);
    s.monogenic = true;
    return s;
  };

  // direct hit: a generator with unit content
  for (const auto& g : gens)
    if (FinGenIdeal::normalize(ring, g).is_unit_ideal()) return monogenic(g);

  if (span_rank(ring, gens) == 1) return rank1_stage(ring, gens);

  // pick x with faithful content of minimal index
  const std::vector<Element>* x = nullptr;
  Int best = 0;
  for (const auto& g : gens) {
    if (vec_is_zero(g)) continue;
    Int nrm = FinGenIdeal::normalize(ring, g).norm();
    if (!x || nrm < best) {
      x = &g;
      best = nrm;
    }
  }
  FinGenIdeal cx = FinGenIdeal::normalize(ring, *x);
  auto partner = search_coprime_partner(ring, gens, *x, cx);
  if (!partner)
    throw SearchExhausted("no content-coprime partner found (c(M) != R?)");
  const std::vector<Element>& y = partner->y;
  if (!partner->independent) {
    // only parallel partners exist: the span of x and y is already a
    // rank-one summand (the e = 0 branch of the proof)
    return rank1_stage(ring, {*x, y});
  }
  FinGenIdeal mi = FinGenIdeal::normalize(ring, pair_minors(ring, *x, y));
  QuotientReps reps(mi);
  Int limit = reps.count();
  if (limit > Int(kSearchCap)) limit = kSearchCap;  // see the notes above
  for (Int idx = 0; idx < limit; ++idx) {
    Element a = reps.rep_at(idx);
    std::vector<Element> u = vec_add(*x, vec_scale(a, y));
    if (FinGenIdeal::normalize(ring, u).is_unit_ideal()) return monogenic(u);
  }
  throw SearchExhausted("ucs shift search exhausted (instance unsupported?)");
}

// --- stacked bases: connected domain route (Z, quadratic orders) ---

StackedBases stacked_domain(const RingPtr& ring, std::size_t n,
                            const RingMatrix& h) {
  StackedBases out{ring, n, {}, {}};
  std::vector<std::vector<Element>> g = matrix_columns(h);
  dedupe_vectors(g);
  RingMatrix total(ring, n, n);
  RingMatrix id = RingMatrix::identity(ring, n);
  while (!g.empty()) {
    if (out.stages.size() > n)
      throw std::logic_error("stacked iteration exceeded ambient rank");
    FinGenIdeal j = faithful_completion(content_of(ring, g));
    FractionalIdeal jinv = ideal_inverse(j);
    std::vector<std::vector<Element>> m;
    for (const auto& col : g)
      for (const Element& nu : jinv.num().nf_gens()) {
        std::vector<Element> v;
        for (const Element& e : col)
          v.push_back(domain_div_exact(ring->mul(nu, e), jinv.den()));
        if (!vec_is_zero(v)) m.push_back(std::move(v));
      }
    dedupe_vectors(m);
    UcsStage st = ucs_stage_domain(ring, m);
    RingMatrix proj = mat_mul(st.projector_raw, mat_sub(id, total));
    out.stages.push_back({j, ring->one(), st.unit_gens, proj});
    total = mat_add(total, proj);
    std::vector<std::vector<Element>> next;
    for (const auto& v : m) {
      std::vector<Element> r = vec_sub(v, apply_matrix(proj, v));
      if (!vec_is_zero(r)) next.push_back(std::move(r));
    }
    dedupe_vectors(next);
    g = std::move(next);
  }
  RingMatrix compl_mat = mat_sub(id, total);
  for (std::size_t c = 0; c < n; ++c) {
    auto col = compl_mat.col(c);
    if (!vec_is_zero(col)) out.complement.push_back(col);
  }
  dedupe_vectors(out.complement);
  return out;
}

// --- stacked bases: residue route (any Z/n, via the lifted Smith form) ---

StackedBases stacked_residue(const RingPtr& ring, std::size_t n,
                             const RingMatrix& h) {
  const Int& mod = ring->modulus();
  StackedBases out{ring, n, {}, {}};
  // column lattice of H plus mod * identity
  ZMat lat(n, h.cols() + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t jx = 0; jx < h.cols(); ++jx)
      lat.at(i, jx) = h.at(i, jx).as_int();
    lat.at(i, h.cols() + i) = mod;
  }
  Snf s = smith_form(lat);
  ZMat pinv = z_inverse_unimodular(s.p);
  std::vector<Int> divisors(n);
  for (std::size_t i = 0; i < n; ++i) divisors[i] = s.d.at(i, i);

  auto col_mod = [&](const ZMat& mz, std::size_t c) {
    std::vector<Element> v;
    for (std::size_t i = 0; i < mz.rows; ++i)
      v.push_back(ring->from_int(mz.at(i, c)));
    return v;
  };
  auto row_mod = [&](const ZMat& mz, std::size_t r) {
    std::vector<Element> v;
    for (std::size_t j = 0; j < mz.cols; ++j)
      v.push_back(ring->from_int(mz.at(r, j)));
    return v;
  };

  Int prev = 1;
  std::size_t m = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (mod_floor(divisors[k], mod) == 0) break;
    ++m;
    Element dk = ring->from_int(divisors[k]);
    Element f = annihilator_idempotent({dk}).value();
    Element eps = ring->sub(ring->one(), f);
    Element tk = ring->from_int(div_exact(divisors[k], prev));
    prev = divisors[k];
    FinGenIdeal jk =
        FinGenIdeal::normalize(ring, {ring->mul(tk, eps), f});
    std::vector<Element> u = vec_scale(eps, col_mod(pinv, k));
    RingMatrix proj = outer_product(col_mod(pinv, k), row_mod(s.p, k));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jx = 0; jx < n; ++jx)
        proj.at(i, jx) = ring->mul(eps, proj.at(i, jx));
    out.stages.push_back({jk, eps, {u}, proj});
  }
  // complement: truncated parts of stage directions plus the spare ones
  for (std::size_t k = 0; k < m; ++k) {
    Element f = ring->sub(ring->one(), out.stages[k].epsilon);
    std::vector<Element> v = vec_scale(f, col_mod(pinv, k));
    if (!vec_is_zero(v)) out.complement.push_back(v);
  }
  for (std::size_t k = m; k < n; ++k) {
    std::vector<Element> v = col_mod(pinv, k);
    if (!vec_is_zero(v)) out.complement.push_back(v);
  }
  return out;
}

// --- stacked bases: product route (componentwise + rank merge) ---

RingMatrix factor_matrix(const RingPtr& ring, const RingMatrix& h,
                         std::size_t f) {
  RingMatrix sub(ring->factors()[f], h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      sub.at(i, j) = h.at(i, j).as_tuple()[f];
  return sub;
}

StackedBases stacked_product(const RingPtr& ring, std::size_t n,
                             const RingMatrix& h) {
  const auto& fs = ring->factors();
  std::vector<StackedBases> parts;
  for (std::size_t f = 0; f < fs.size(); ++f)
    parts.push_back(stacked_bases(n, factor_matrix(ring, h, f)));
  std::size_t m = 0;
  for (const auto& p : parts) m = std::max(m, p.stages.size());

  StackedBases out{ring, n, {}, {}};
  auto embed_vec = [&](std::size_t f, const std::vector<Element>& v) {
    std::vector<Element> t;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Element> comp;
      for (std::size_t g2 = 0; g2 < fs.size(); ++g2)
        comp.push_back(g2 == f ? v[i] : fs[g2]->zero());
      t.push_back(ring->make_tuple(std::move(comp)));
    }
    return t;
  };
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Element> eps_comp, j_embedded_gens;
    std::vector<std::vector<Element>> unit_gens;
    RingMatrix proj(ring, n, n);
    std::vector<std::vector<Element>> ideal_gen_cols(fs.size());
    for (std::size_t f = 0; f < fs.size(); ++f) {
      bool active = k < parts[f].stages.size();
      eps_comp.push_back(active ? parts[f].stages[k].epsilon : fs[f]->zero());
      const std::vector<Element> j_gens =
          active ? parts[f].stages[k].ideal.nf_gens()
                 : std::vector<Element>{fs[f]->one()};
      for (const Element& gg : j_gens) {
        std::vector<Element> tup;
        for (std::size_t g2 = 0; g2 < fs.size(); ++g2)
          tup.push_back(g2 == f ? gg : fs[g2]->zero());
        j_embedded_gens.push_back(ring->make_tuple(std::move(tup)));
      }
      if (active)
        for (const auto& ug : parts[f].stages[k].unit_gens)
          unit_gens.push_back(embed_vec(f, ug));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jx = 0; jx < n; ++jx) {
        std::vector<Element> comp;
        for (std::size_t f = 0; f < fs.size(); ++f)
          comp.push_back(k < parts[f].stages.size()
                             ? parts[f].stages[k].projector.at(i, jx)
                             : fs[f]->zero());
        proj.at(i, jx) = ring->make_tuple(std::move(comp));
      }
    out.stages.push_back({FinGenIdeal::normalize(ring, j_embedded_gens),
                          ring->make_tuple(eps_comp), unit_gens, proj});
  }
  for (std::size_t f = 0; f < fs.size(); ++f)
    for (const auto& v : parts[f].complement)
      out.complement.push_back(embed_vec(f, v));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

PresentedModule::PresentedModule(RingPtr r, std::size_t rank, RingMatrix mat)
    : ring(std::move(r)), n(rank), h(std::move(mat)) {
  if (h.rows() != n)
    throw PreconditionError("presentation matrix must have n rows");
  if (!h.ring()->equals(*ring)) throw PreconditionError("ring mismatch");
}

StackedBases stacked_bases(std::size_t n, const RingMatrix& h) {
  const RingPtr& ring = h.ring();
  if (h.rows() != n) throw PreconditionError("matrix row count != ambient rank");
  switch (ring->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Quadratic:
      return stacked_domain(ring, n, h);
    case Ring::Kind::Residue:
      return stacked_residue(ring, n, h);
    case Ring::Kind::Product:
      return stacked_product(ring, n, h);
  }
  throw std::logic_error("unreachable");
}

UcsSummand ucs_summand(const RingPtr& ring, std::size_t n,
                       const std::vector<std::vector<Element>>& gens) {
  FinGenIdeal c = content(ring, gens);
  if (!c.is_unit_ideal())
    throw PreconditionError("ucs_summand requires unit content");
  if (ring->kind() == Ring::Kind::Product) {
    const auto& fs = ring->factors();
    std::vector<UcsSummand> parts;
    for (std::size_t f = 0; f < fs.size(); ++f) {
      std::vector<std::vector<Element>> cg;
      for (const auto& g : gens) {
        std::vector<Element> v;
        for (const Element& e : g) v.push_back(e.as_tuple()[f]);
        cg.push_back(std::move(v));
      }
      parts.push_back(ucs_summand(fs[f], n, cg));
    }
    UcsSummand out;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Element> comp;
      for (std::size_t f = 0; f < fs.size(); ++f) comp.push_back(parts[f].u[i]);
      out.u.push_back(ring->make_tuple(std::move(comp)));
    }
    out.projector = RingMatrix(ring, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Element> comp;
        for (std::size_t f = 0; f < fs.size(); ++f)
          comp.push_back(parts[f].projector.at(i, j));
        out.projector.at(i, j) = ring->make_tuple(std::move(comp));
      }
    return out;
  }
  if (ring->kind() == Ring::Kind::Residue) {
    // lifted route: a unimodular direction of the column lattice
    RingMatrix h = mat_from_cols(ring, gens, n);
    StackedBases sb = stacked_residue(ring, n, h);
    if (sb.stages.empty())
      throw SearchExhausted("ucs_summand: no stage found");
    const StackedStage& st = sb.stages.front();
    if (st.epsilon != ring->one())
      throw SearchExhausted("ucs_summand: content not unit on all components");
    return {st.unit_gens.front(), st.projector};
  }
  std::vector<std::vector<Element>> work = gens;
  dedupe_vectors(work);
  UcsStage st = ucs_stage_domain(ring, work);
  if (!st.monogenic)
    throw SearchExhausted(
        "ucs_summand: the rank-one summand is not monogenic (non-principal "
        "coefficient ideal)");
  return {st.unit_gens.front(), st.projector_raw};
}

std::vector<FinGenIdeal> chain_normalize(const std::vector<FinGenIdeal>& in) {
  std::vector<FinGenIdeal> v = in;
  std::size_t mm = v.size();
  for (std::size_t pass = 0; pass < mm * mm + 2; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i].contains_ideal(v[i + 1])) continue;
      FinGenIdeal s = ideal_sum(v[i], v[i + 1]);
      FinGenIdeal t = ideal_intersect(v[i], v[i + 1]);
      v[i] = s;
      v[i + 1] = t;
      changed = true;
    }
    if (!changed) break;
    if (pass == mm * mm + 1)
      throw std::logic_error("chain_normalize did not stabilise");
  }
  std::vector<FinGenIdeal> out;
  for (const FinGenIdeal& i : v)
    if (i.is_proper()) out.push_back(i);
  return out;
}

Element cyclic_quotient_rep(const FinGenIdeal& i, const FinGenIdeal& j) {
  const RingPtr& ring = i.ring();
  if (!is_invertible(i) || !is_invertible(j))
    throw PreconditionError("cyclic_quotient_rep requires invertible ideals");
  FinGenIdeal ji = ideal_product(j, i);
  auto works = [&](const Element& g) {
    std::vector<Element> gens = ji.nf_gens();
    gens.push_back(g);
    return FinGenIdeal::normalize(ring, gens) == i;
  };
  switch (ring->kind()) {
    case Ring::Kind::Integers:
    case Ring::Kind::Residue: {
      Element g = ring->from_int(i.int_gen());
      if (i.is_unit_ideal()) g = ring->one();
      if (!works(g)) throw SearchExhausted("cyclic generator not found");
      return g;
    }
    case Ring::Kind::Quadratic: {
      if (i.is_unit_ideal() && works(ring->one())) return ring->one();
      QuotientReps reps(j);
      const auto& basis = i.nf_gens();
      // candidates cover every class of I/JI; g = 0 is legitimate exactly
      // when I = JI and the quotient is zero
      for (Int t1 = 0; t1 < reps.count(); ++t1)
        for (Int t2 = 0; t2 < reps.count(); ++t2) {
          Element g = ring->add(ring->mul(reps.rep_at(t1), basis[0]),
                                ring->mul(reps.rep_at(t2), basis[1]));
          if (works(g)) return g;
        }
      throw SearchExhausted("cyclic generator search exhausted");
    }
    case Ring::Kind::Product: {
      const auto& fs = ring->factors();
      std::vector<Element> t;
      for (std::size_t f = 0; f < fs.size(); ++f)
        t.push_back(
            cyclic_quotient_rep(i.component_ideals()[f], j.component_ideals()[f]));
      return ring->make_tuple(std::move(t));
    }
  }
  throw std::logic_error("unreachable");
}

PairReduction pair_reduce(const FinGenIdeal& i, const FinGenIdeal& j) {
  const RingPtr& ring = i.ring();
  if (!is_invertible(i) || !is_invertible(j))
    throw PreconditionError("pair_reduce requires invertible ideals");
  Element a = *is_faithful(i);
  FractionalIdeal iinv = ideal_inverse(i);
  // K = a * I^{-1}, an integral ideal containing... dividing out den exactly
  std::vector<Element> kg;
  for (const Element& nu : iinv.num().nf_gens()) {
    Element prod = ring->mul(a, nu);
    if (ring->is_domain()) {
      kg.push_back(domain_div_exact(prod, iinv.den()));
    } else {
      // residues/products: den is a unit times content; use express route
      auto dinv = ring->inverse_of_unit(iinv.den());
      if (!dinv) throw PreconditionError("pair_reduce: denominator not unit");
      kg.push_back(ring->mul(prod, *dinv));
    }
  }
  FinGenIdeal k = FinGenIdeal::normalize(ring, kg);
  Element b = cyclic_quotient_rep(k, j);
  // verify b I + a J = (a)
  std::vector<Element> vg;
  for (const Element& g : i.nf_gens()) vg.push_back(ring->mul(b, g));
  for (const Element& g : j.nf_gens()) vg.push_back(ring->mul(a, g));
  FinGenIdeal verif = FinGenIdeal::normalize(ring, vg);
  if (verif != FinGenIdeal::principal(a))
    throw SearchExhausted("pair_reduce verification failed");
  auto coeff = verif.express(a);
  if (!coeff) throw std::logic_error("pair_reduce: expression failed");
  Element s = ring->zero(), t = ring->zero();
  std::size_t ni = i.nf_gens().size();
  for (std::size_t idx = 0; idx < ni; ++idx)
    s = ring->add(s, ring->mul((*coeff)[idx], i.nf_gens()[idx]));
  for (std::size_t idx = 0; idx < j.nf_gens().size(); ++idx)
    t = ring->add(t, ring->mul((*coeff)[ni + idx], j.nf_gens()[idx]));
  // now a = b*s + a*t with s in I, t in J
  return {a, b, s, t, ideal_product(i, j)};
}

// ---------------------------------------------------------------------------
// projective part

namespace {

// Steinitz-class representative of a rank-one module given by generator
// vectors: the numerator ideal of its pseudo representation.
FinGenIdeal rank1_class_rep(const RingPtr& ring,
                            const std::vector<std::vector<Element>>& gens) {
  Rank1Pseudo pr = rank1_pseudo_rep(ring, gens);
  return pr.nums;
}

struct BlockData {
  std::size_t rank = 0;
  std::vector<Element> steinitz_gens;  // over the block ring
};

BlockData block_projective_data(const RingPtr& block,
                                const std::vector<std::vector<Element>>& gens,
                                std::size_t n) {
  BlockData out;
  std::vector<std::vector<Element>> nz;
  for (const auto& g : gens)
    if (!vec_is_zero(g)) nz.push_back(g);
  if (nz.empty()) return out;
  if (block->kind() == Ring::Kind::Residue) {
    const Int& mod = block->modulus();
    ZMat lat(n, nz.size() + n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t jx = 0; jx < nz.size(); ++jx)
        lat.at(i, jx) = nz[jx][i].as_int();
      lat.at(i, nz.size() + i) = mod;
    }
    Snf s = smith_form(lat);
    std::size_t r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Int& d = s.d.at(k, k);
      if (d == 1) ++r;
      else if (mod_floor(d, mod) != 0)
        throw PreconditionError("projective_normalize: block not a summand");
    }
    out.rank = r;
    if (r > 0) out.steinitz_gens = {block->one()};
    return out;
  }
  std::size_t r = span_rank(block, nz);
  out.rank = r;
  if (r == 0) return out;
  if (block->kind() == Ring::Kind::Integers) {
    // PID: class is trivial; print the r-minor ideal as representative
    std::vector<Element> minors;
    std::vector<std::size_t> gsel(r), rsel(r);
    // iterate subsets of generators and of rows
    std::vector<std::size_t> gidx(nz.size());
    for (std::size_t t = 0; t < nz.size(); ++t) gidx[t] = t;
    std::function<void(std::size_t, std::size_t)> gloop = [&](std::size_t pos,
                                                              std::size_t start) {
      if (pos == r) {
        std::function<void(std::size_t, std::size_t)> rloop =
            [&](std::size_t rpos, std::size_t rstart) {
              if (rpos == r) {
                RingMatrix sub(block, r, r);
                for (std::size_t ii = 0; ii < r; ++ii)
                  for (std::size_t jj = 0; jj < r; ++jj)
                    sub.at(ii, jj) = nz[gsel[jj]][rsel[ii]];
                minors.push_back(determinant(sub));
                return;
              }
              for (std::size_t rr = rstart; rr < n; ++rr) {
                rsel[rpos] = rr;
                rloop(rpos + 1, rr + 1);
              }
            };
        rloop(0, 0);
        return;
      }
      for (std::size_t tt = start; tt < nz.size(); ++tt) {
        gsel[pos] = tt;
        gloop(pos + 1, tt + 1);
      }
    };
    gloop(0, 0);
    out.steinitz_gens = FinGenIdeal::normalize(block, minors).nf_gens();
    return out;
  }
  // quadratic: exterior power as a rank-one module, then its class
  std::vector<std::vector<Element>> wedge;
  std::vector<std::size_t> gsel(r), rsel;
  rsel.clear();
  std::vector<std::vector<std::size_t>> row_subsets;
  std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&)>
      rsubs = [&](std::size_t pos, std::size_t start,
                  std::vector<std::size_t>& cur) {
        if (pos == r) {
          row_subsets.push_back(cur);
          return;
        }
        for (std::size_t rr = start; rr < n; ++rr) {
          cur.push_back(rr);
          rsubs(pos + 1, rr + 1, cur);
          cur.pop_back();
        }
      };
  std::vector<std::size_t> scratch;
  rsubs(0, 0, scratch);
  std::function<void(std::size_t, std::size_t)> gloop2 = [&](std::size_t pos,
                                                             std::size_t start) {
    if (pos == r) {
      std::vector<Element> mv;
      for (const auto& rows : row_subsets) {
        RingMatrix sub(block, r, r);
        for (std::size_t ii = 0; ii < r; ++ii)
          for (std::size_t jj = 0; jj < r; ++jj)
            sub.at(ii, jj) = nz[gsel[jj]][rows[ii]];
        mv.push_back(determinant(sub));
      }
      if (!vec_is_zero(mv)) wedge.push_back(std::move(mv));
      return;
    }
    for (std::size_t tt = start; tt < nz.size(); ++tt) {
      gsel[pos] = tt;
      gloop2(pos + 1, tt + 1);
    }
  };
  gloop2(0, 0);
  out.steinitz_gens = rank1_class_rep(block, wedge).nf_gens();
  return out;
}

}  // namespace

ProjectivePart projective_normalize(
    const RingPtr& ring, std::size_t n,
    const std::vector<std::vector<Element>>& gens) {
  const auto& comps = ring->components();
  std::vector<BlockData> data(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<std::vector<Element>> bg;
    for (const auto& g : gens) {
      std::vector<Element> v;
      for (const Element& e : g) v.push_back(ring->component_project(e, c));
      bg.push_back(std::move(v));
    }
    data[c] = block_projective_data(comps[c].block, bg, n);
  }
  // group components by rank (ascending, rank 0 dropped)
  std::map<std::size_t, std::vector<std::size_t>> by_rank;
  for (std::size_t c = 0; c < comps.size(); ++c)
    if (data[c].rank > 0) by_rank[data[c].rank].push_back(c);
  ProjectivePart out{{}, {}, FinGenIdeal::zero_ideal(ring)};
  std::vector<Element> steinitz_gens;
  for (const auto& [r, cs] : by_rank) {
    Element e = ring->zero();
    for (std::size_t c : cs) e = ring->add(e, comps[c].unit);
    out.idempotents.push_back(e);
    out.ranks.push_back(r);
  }
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (const Element& g : data[c].steinitz_gens)
      steinitz_gens.push_back(ring->component_embed(g, c));
  if (!steinitz_gens.empty())
    out.steinitz = FinGenIdeal::normalize(ring, steinitz_gens);
  return out;
}

ProjectivePart projective_normalize(const RingPtr& ring,
                                    const std::vector<FinGenIdeal>& summands) {
  std::size_t k = summands.size();
  std::vector<std::vector<Element>> gens;
  for (std::size_t idx = 0; idx < k; ++idx)
    for (const Element& g : summands[idx].nf_gens()) {
      std::vector<Element> v(k, ring->zero());
      v[idx] = g;
      gens.push_back(std::move(v));
    }
  return projective_normalize(ring, k, gens);
}

// ---------------------------------------------------------------------------
// decompose

DecomposeResult decompose(const PresentedModule& module) {
  const RingPtr& ring = module.ring;
  if (!ring->is_semihereditary_instance())
    throw DomainError(
        "decompose requires a semihereditary instance (squarefree residue "
        "moduli); use diagonalize for general residue rings");
  DecomposeResult out;
  out.stacked = stacked_bases(module.n, module.h);
  FinGenIdeal acc = FinGenIdeal::unit_ideal(ring);
  for (const StackedStage& st : out.stacked.stages) {
    acc = ideal_product(acc, st.ideal);
    std::vector<Element> gens;
    for (const Element& g : acc.nf_gens())
      gens.push_back(ring->mul(g, st.epsilon));
    gens.push_back(ring->sub(ring->one(), st.epsilon));
    out.raw_chain.push_back(FinGenIdeal::normalize(ring, gens));
  }
  std::vector<FinGenIdeal> chain = chain_normalize(out.raw_chain);
  for (const FinGenIdeal& i : chain) {
    if (!is_invertible(i))
      throw DomainError("torsion chain ideal is not invertible");
    if (!i.is_proper()) throw std::logic_error("unit ideal left in chain");
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!chain[i].contains_ideal(chain[i + 1]))
      throw std::logic_error("chain containment failed");
  ProjectivePart proj =
      projective_normalize(ring, module.n, out.stacked.complement);
  for (std::size_t i = 0; i + 1 < proj.ranks.size(); ++i)
    if (proj.ranks[i] >= proj.ranks[i + 1])
      throw std::logic_error("ranks not strictly increasing");
  for (std::size_t i = 0; i < proj.idempotents.size(); ++i)
    for (std::size_t j = i + 1; j < proj.idempotents.size(); ++j)
      if (!ring->mul(proj.idempotents[i], proj.idempotents[j]).is_zero())
        throw std::logic_error("rank idempotents not orthogonal");
  out.invariants = Decomposition{ring, std::move(chain), proj.idempotents,
                                 proj.ranks, proj.steinitz};
  return out;
}

namespace {

FinGenIdeal ideal_component(const FinGenIdeal& i, std::size_t c) {
  const RingPtr& ring = i.ring();
  const RingPtr& block = ring->components()[c].block;
  std::vector<Element> gens;
  for (const Element& g : i.nf_gens())
    gens.push_back(ring->component_project(g, c));
  if (gens.empty()) gens.push_back(block->zero());
  return FinGenIdeal::normalize(block, gens);
}

bool steinitz_isomorphic(const FinGenIdeal& a, const FinGenIdeal& b) {
  const RingPtr& ring = a.ring();
  const auto& comps = ring->components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    FinGenIdeal ac = ideal_component(a, c);
    FinGenIdeal bc = ideal_component(b, c);
    if (ac.is_zero() != bc.is_zero()) return false;
    if (ac.is_zero()) continue;
    if (!is_invertible(ac) || !is_invertible(bc)) return false;
    if (!is_isomorphic(ac, bc)) return false;
  }
  return true;
}

}  // namespace

bool invariants_equal(const Decomposition& d1, const Decomposition& d2) {
  if (!d1.ring->equals(*d2.ring)) throw PreconditionError("ring mismatch");
  if (d1.torsion_chain.size() != d2.torsion_chain.size()) return false;
  for (std::size_t i = 0; i < d1.torsion_chain.size(); ++i)
    if (d1.torsion_chain[i] != d2.torsion_chain[i]) return false;
  if (d1.ranks != d2.ranks) return false;
  if (d1.rank_idempotents.size() != d2.rank_idempotents.size()) return false;
  for (std::size_t i = 0; i < d1.rank_idempotents.size(); ++i)
    if (d1.rank_idempotents[i] != d2.rank_idempotents[i]) return false;
  if (d1.steinitz.is_zero() != d2.steinitz.is_zero()) return false;
  if (!d1.steinitz.is_zero() && !steinitz_isomorphic(d1.steinitz, d2.steinitz))
    return false;
  return true;
}

RingMatrix torsion_projector(const DecomposeResult& r) {
  const RingPtr& ring = r.invariants.ring;
  std::size_t n = r.stacked.n;
  RingMatrix s(ring, n, n);
  for (std::size_t k = 0; k < r.stacked.stages.size(); ++k)
    if (r.raw_chain[k].is_proper())
      s = mat_add(s, r.stacked.stages[k].projector);
  return s;
}

// ---------------------------------------------------------------------------
// diagonalize (elementary divisor route)

FinGenIdeal fitting_ideal(const RingMatrix& a, std::size_t k) {
  const RingPtr& ring = a.ring();
  if (k == 0) return FinGenIdeal::unit_ideal(ring);
  if (k > a.rows() || k > a.cols()) return FinGenIdeal::zero_ideal(ring);
  std::vector<Element> minors;
  std::vector<std::size_t> rs(k), cs(k);
  std::function<void(std::size_t, std::size_t)> cloop = [&](std::size_t pos,
                                                            std::size_t start) {
    if (pos == k) {
      RingMatrix sub(ring, k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub.at(i, j) = a.at(rs[i], cs[j]);
      minors.push_back(determinant(sub));
      return;
    }
    for (std::size_t c = start; c < a.cols(); ++c) {
      cs[pos] = c;
      cloop(pos + 1, c + 1);
    }
  };
  std::function<void(std::size_t, std::size_t)> rloop = [&](std::size_t pos,
                                                            std::size_t start) {
    if (pos == k) {
      cloop(0, 0);
      return;
    }
    for (std::size_t rr = start; rr < a.rows(); ++rr) {
      rs[pos] = rr;
      rloop(pos + 1, rr + 1);
    }
  };
  rloop(0, 0);
  return FinGenIdeal::normalize(ring, minors);
}

namespace {

struct DiagCtx {
  RingPtr ring;
  RingMatrix a, p, q;  // invariant: p * input * q == a
};

void d_row_axpy(DiagCtx& c, std::size_t dst, std::size_t src, const Element& s) {
  for (std::size_t j = 0; j < c.a.cols(); ++j)
    c.a.at(dst, j) = c.ring->add(c.a.at(dst, j), c.ring->mul(s, c.a.at(src, j)));
  for (std::size_t j = 0; j < c.p.cols(); ++j)
    c.p.at(dst, j) = c.ring->add(c.p.at(dst, j), c.ring->mul(s, c.p.at(src, j)));
}

void d_col_axpy(DiagCtx& c, std::size_t dst, std::size_t src, const Element& s) {
  for (std::size_t i = 0; i < c.a.rows(); ++i)
    c.a.at(i, dst) = c.ring->add(c.a.at(i, dst), c.ring->mul(s, c.a.at(i, src)));
  for (std::size_t i = 0; i < c.q.rows(); ++i)
    c.q.at(i, dst) = c.ring->add(c.q.at(i, dst), c.ring->mul(s, c.q.at(i, src)));
}

void d_row_scale(DiagCtx& c, std::size_t r, const Element& u) {
  for (std::size_t j = 0; j < c.a.cols(); ++j)
    c.a.at(r, j) = c.ring->mul(u, c.a.at(r, j));
  for (std::size_t j = 0; j < c.p.cols(); ++j)
    c.p.at(r, j) = c.ring->mul(u, c.p.at(r, j));
}

void d_swap_rows(DiagCtx& c, std::size_t r1, std::size_t r2) {
  for (std::size_t j = 0; j < c.a.cols(); ++j) std::swap(c.a.at(r1, j), c.a.at(r2, j));
  for (std::size_t j = 0; j < c.p.cols(); ++j) std::swap(c.p.at(r1, j), c.p.at(r2, j));
}

void d_swap_cols(DiagCtx& c, std::size_t c1, std::size_t c2) {
  for (std::size_t i = 0; i < c.a.rows(); ++i) std::swap(c.a.at(i, c1), c.a.at(i, c2));
  for (std::size_t i = 0; i < c.q.rows(); ++i) std::swap(c.q.at(i, c1), c.q.at(i, c2));
}

// det-1 two-row combination putting gcd of lifts at (r, col), zero at (i, col).
// When the pivot already divides the entry a pure shear is used, so settled
// parts of the matrix are never disturbed (this is what makes the
// alternating sweeps terminate).
void d_gcd_rows(DiagCtx& c, std::size_t r, std::size_t i, std::size_t col) {
  const Element& x = c.a.at(r, col);
  const Element& y = c.a.at(i, col);
  if (y.is_zero()) return;
  if (x.is_zero()) {
    d_swap_rows(c, r, i);
    return;
  }
  if (y.as_int() % x.as_int() == 0) {
    d_row_axpy(c, i, r,
               c.ring->from_int(-div_exact(y.as_int(), x.as_int())));
    return;
  }
  ExtGcd e = ext_gcd(x.as_int(), y.as_int());
  Int x1 = div_exact(x.as_int(), e.g), y1 = div_exact(y.as_int(), e.g);
  Element eu = c.ring->from_int(e.u), ev = c.ring->from_int(e.v);
  Element ex1 = c.ring->from_int(x1), ey1 = c.ring->from_int(y1);
  for (std::size_t j = 0; j < c.a.cols(); ++j) {
    Element nr = c.ring->add(c.ring->mul(eu, c.a.at(r, j)),
                             c.ring->mul(ev, c.a.at(i, j)));
    Element ni = c.ring->sub(c.ring->mul(ex1, c.a.at(i, j)),
                             c.ring->mul(ey1, c.a.at(r, j)));
    c.a.at(r, j) = nr;
    c.a.at(i, j) = ni;
  }
  for (std::size_t j = 0; j < c.p.cols(); ++j) {
    Element nr = c.ring->add(c.ring->mul(eu, c.p.at(r, j)),
                             c.ring->mul(ev, c.p.at(i, j)));
    Element ni = c.ring->sub(c.ring->mul(ex1, c.p.at(i, j)),
                             c.ring->mul(ey1, c.p.at(r, j)));
    c.p.at(r, j) = nr;
    c.p.at(i, j) = ni;
  }
}

void d_gcd_cols(DiagCtx& c, std::size_t cc, std::size_t j, std::size_t row) {
  const Element& x = c.a.at(row, cc);
  const Element& y = c.a.at(row, j);
  if (y.is_zero()) return;
  if (x.is_zero()) {
    d_swap_cols(c, cc, j);
    return;
  }
  if (y.as_int() % x.as_int() == 0) {
    d_col_axpy(c, j, cc,
               c.ring->from_int(-div_exact(y.as_int(), x.as_int())));
    return;
  }
  ExtGcd e = ext_gcd(x.as_int(), y.as_int());
  Int x1 = div_exact(x.as_int(), e.g), y1 = div_exact(y.as_int(), e.g);
  Element eu = c.ring->from_int(e.u), ev = c.ring->from_int(e.v);
  Element ex1 = c.ring->from_int(x1), ey1 = c.ring->from_int(y1);
  for (std::size_t i = 0; i < c.a.rows(); ++i) {
    Element nc = c.ring->add(c.ring->mul(eu, c.a.at(i, cc)),
                             c.ring->mul(ev, c.a.at(i, j)));
    Element nj = c.ring->sub(c.ring->mul(ex1, c.a.at(i, j)),
                             c.ring->mul(ey1, c.a.at(i, cc)));
    c.a.at(i, cc) = nc;
    c.a.at(i, j) = nj;
  }
  for (std::size_t i = 0; i < c.q.rows(); ++i) {
    Element nc = c.ring->add(c.ring->mul(eu, c.q.at(i, cc)),
                             c.ring->mul(ev, c.q.at(i, j)));
    Element nj = c.ring->sub(c.ring->mul(ex1, c.q.at(i, j)),
                             c.ring->mul(ey1, c.q.at(i, cc)));
    c.q.at(i, cc) = nc;
    c.q.at(i, j) = nj;
  }
}

// Residue rings: pick x0 = x/g + t*(n/g) with joint content of
// (x0, others...) equal to R; exists because the shift is free exactly at
// the primes where everything vanished.
Element divide_with_unit_content(const RingPtr& ring, const Element& x,
                                 const Int& g, const std::vector<Int>& others) {
  const Int& n = ring->modulus();
  Int base = div_exact(mod_floor(x.as_int(), n) == 0 && g == n
                           ? Int(0)
                           : x.as_int(),
                       g);
  Int step = div_exact(n, g);
  for (Int t = 0; t < g; ++t) {
    Int cand = mod_floor(base + t * step, n);
    Int acc = gcd(cand, n);
    for (const Int& o : others) acc = gcd(acc, o);
    if (acc == 1) return ring->from_int(cand);
  }
  throw std::logic_error("divide_with_unit_content: no candidate");
}

// The elementary-divisor core of the proof: diagonalises the lower
// triangular pair [[a, 0], [b, c]] sitting at rows/cols (k, k+1) once its
// content has been divided out, using bezout data and a unit shift.
void ariloglo_step(DiagCtx& ctx, std::size_t k) {
  const RingPtr& ring = ctx.ring;
  const Int& n = ring->modulus();
  Element a = ctx.a.at(k, k);
  Element b = ctx.a.at(k + 1, k);
  Element cc = ctx.a.at(k + 1, k + 1);
  if (b.is_zero() && cc.is_zero()) return;
  // content generator of (a, b, c) over Z/n
  Int g = gcd(gcd(gcd(a.as_int(), b.as_int()), cc.as_int()), n);
  if (g == n) return;  // everything vanished
  // divide the 2x2 block by g with a unit-content quotient triple
  Int b0i = div_exact(b.as_int(), g), c0i = div_exact(cc.as_int(), g);
  Element a0 = divide_with_unit_content(ring, a, g, {gcd(b0i, n), gcd(c0i, n)});
  Element b0 = ring->from_int(b0i), c0 = ring->from_int(c0i);
  // Rb0 + Rc0 = Rd0; fix associates so that (b1, c1) spans R
  BezoutData bz = bezout_data(b0, c0);
  Element d0 = bz.d, b1 = bz.a1, c1 = bz.b1;
  if (d0.is_zero()) {
    // b0 = c0 = 0: block is diag(a0*g, 0) already; nothing to do
    return;
  }
  {
    const Int gd = gcd(d0.as_int(), n);
    Int step = div_exact(n, gd);
    Int cn = gcd(c1.as_int(), n);
    Int cur = b1.as_int();
    for (Int t = 0; t < gd; ++t) {
      if (gcd(gcd(cur, cn), n) == 1) break;
      cur = mod_floor(cur + step, n);
    }
    b1 = ring->from_int(cur);
  }
  Element q = unit_shift(b1, c1);
  Element w1 = ring->add(b1, ring->mul(q, c1));
  Element s = unit_shift(a0, d0);
  Element w2 = ring->add(a0, ring->mul(s, d0));
  // apply to the pair block: col_k += q * col_{k+1}; row_k += s*w1^{-1} row_{k+1}
  d_col_axpy(ctx, k, k + 1, q);
  Element w1i = *ring->inverse_of_unit(w1);
  d_row_axpy(ctx, k, k + 1, ring->mul(s, w1i));
  // corner is now g*w2 with w2 a unit; clear row and column
  Element w2i = *ring->inverse_of_unit(w2);
  Element corner = ctx.a.at(k, k);
  // corner = g * w2 (up to the identity above); normalise with w2^{-1}
  d_row_scale(ctx, k, w2i);
  // eliminate below and to the right using exact divisions by g
  {
    // col k entry at k+1: divide by corner g
    Element below = ctx.a.at(k + 1, k);
    Int gg = gcd(ctx.a.at(k, k).as_int(), n);
    // corner generates (g); find multiplier m with m*corner = below
    // below is divisible by g since the whole block is
    Int corner_lift = ctx.a.at(k, k).as_int();
    // solve corner * z = below (mod n)
    Int cg = gcd(corner_lift, n);
    if (mod_floor(below.as_int(), cg) != 0)
      throw std::logic_error("ariloglo: below entry not divisible");
    Int rhs = div_exact(below.as_int(), cg);
    Int lhs = div_exact(corner_lift, cg);
    Int nn = div_exact(n, cg);
    Int z = mod_floor(rhs * *mod_inverse(mod_floor(lhs, nn), nn), nn);
    d_row_axpy(ctx, k + 1, k, ring->neg(ring->from_int(z)));
  }
  {
    Element right = ctx.a.at(k, k + 1);
    if (!right.is_zero()) {
      Int corner_lift = ctx.a.at(k, k).as_int();
      Int cg = gcd(corner_lift, n);
      if (mod_floor(right.as_int(), cg) != 0)
        throw std::logic_error("ariloglo: right entry not divisible");
      Int rhs = div_exact(right.as_int(), cg);
      Int lhs = div_exact(corner_lift, cg);
      Int nn = div_exact(n, cg);
      Int z = mod_floor(rhs * *mod_inverse(mod_floor(lhs, nn), nn), nn);
      d_col_axpy(ctx, k + 1, k, ring->neg(ring->from_int(z)));
    }
  }
}

DiagonalForm diagonalize_residue(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  const Int& n = ring->modulus();
  DiagCtx ctx{ring, a, RingMatrix::identity(ring, a.rows()),
              RingMatrix::identity(ring, a.cols())};
  std::size_t r = std::min(a.rows(), a.cols());
  // phase 1: diagonal by alternating gcd sweeps
  for (std::size_t k = 0; k < r; ++k) {
    for (int guard = 0; guard < 64; ++guard) {
      for (std::size_t i = k + 1; i < a.rows(); ++i) d_gcd_rows(ctx, k, i, k);
      for (std::size_t j = k + 1; j < a.cols(); ++j) d_gcd_cols(ctx, k, j, k);
      bool clean = true;
      for (std::size_t i = k + 1; i < a.rows(); ++i)
        if (!ctx.a.at(i, k).is_zero()) clean = false;
      for (std::size_t j = k + 1; j < a.cols(); ++j)
        if (!ctx.a.at(k, j).is_zero()) clean = false;
      if (clean) break;
      if (guard == 63) throw std::logic_error("diagonalize: sweep did not settle");
    }
  }
  // phase 2: zeros last, then enforce the divisibility chain with the
  // bezout + unit-shift core on adjacent pairs
  for (std::size_t pass = 0; pass < r * r + 2; ++pass) {
    bool changed = false;
    for (std::size_t k = 0; k + 1 < r; ++k) {
      Element x = ctx.a.at(k, k), y = ctx.a.at(k + 1, k + 1);
      if (x.is_zero() && !y.is_zero()) {
        d_swap_rows(ctx, k, k + 1);
        d_swap_cols(ctx, k, k + 1);
        changed = true;
        continue;
      }
      if (y.is_zero()) continue;
      FinGenIdeal ix = FinGenIdeal::principal(x);
      if (ix.contains(y)) continue;
      // fold the pair into the [[a,0],[b,c]] pattern and apply the core
      d_row_axpy(ctx, k + 1, k, ring->one());  // row k+1 += row k
      ariloglo_step(ctx, k);
      changed = true;
    }
    if (!changed) break;
    if (pass == r * r + 1) throw std::logic_error("divisibility chain loop");
  }
  // canonical associates on the diagonal
  for (std::size_t k = 0; k < r; ++k) {
    Element d = ctx.a.at(k, k);
    if (d.is_zero()) continue;
    Int g = gcd(d.as_int(), n);
    Int t = div_exact(d.as_int(), g);
    Int tp = lift_to_unit(t, n, div_exact(n, g));
    Element u = *ring->inverse_of_unit(ring->from_int(tp));
    d_row_scale(ctx, k, u);
  }
  return {ctx.p, ctx.a, ctx.q};
}

DiagonalForm diagonalize_integers(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  ZMat z(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) z.at(i, j) = a.at(i, j).as_int();
  Snf s = smith_form(z);
  auto conv = [&](const ZMat& m) {
    RingMatrix r(ring, m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) r.at(i, j) = ring->from_int(m.at(i, j));
    return r;
  };
  return {conv(s.p), conv(s.d), conv(s.q)};
}

}  // namespace

DiagonalForm diagonalize(const RingMatrix& a) {
  const RingPtr& ring = a.ring();
  if (!ring->supports_elementary_divisors())
    throw DomainError(
        "diagonalize requires a Bezout elementary divisor instance "
        "(integers, residue rings, products of these); use decompose for "
        "quadratic orders");
  DiagonalForm out;
  switch (ring->kind()) {
    case Ring::Kind::Integers:
      out = diagonalize_integers(a);
      break;
    case Ring::Kind::Residue:
      out = diagonalize_residue(a);
      break;
    case Ring::Kind::Product: {
      const auto& fs = ring->factors();
      std::vector<DiagonalForm> parts;
      for (std::size_t f = 0; f < fs.size(); ++f)
        parts.push_back(diagonalize(factor_matrix(ring, a, f)));
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
      out = {assemble([](const DiagonalForm& d2, std::size_t i, std::size_t j) {
               return d2.p.at(i, j);
             }, a.rows(), a.rows()),
             assemble([](const DiagonalForm& d2, std::size_t i, std::size_t j) {
               return d2.d.at(i, j);
             }, a.rows(), a.cols()),
             assemble([](const DiagonalForm& d2, std::size_t i, std::size_t j) {
               return d2.q.at(i, j);
             }, a.cols(), a.cols())};
      break;
    }
    default:
      throw std::logic_error("unreachable");
  }
  // exactness and invertibility of the transforms
  if (mat_mul(mat_mul(out.p, a), out.q) != out.d)
    throw std::logic_error("diagonalize: transform identity failed");
  if (!mat_is_invertible(out.p) || !mat_is_invertible(out.q))
    throw std::logic_error("diagonalize: transforms not invertible");
  // divisibility chain
  std::size_t r = std::min(a.rows(), a.cols());
  for (std::size_t k = 0; k + 1 < r; ++k) {
    FinGenIdeal ik = FinGenIdeal::principal(out.d.at(k, k));
    if (!ik.contains(out.d.at(k + 1, k + 1)))
      throw std::logic_error("diagonalize: divisibility chain failed");
  }
  // Fitting-ideal cross check: F_k(A) = (d_1 ... d_k)
  Element prod = ring->one();
  for (std::size_t k = 1; k <= r; ++k) {
    prod = ring->mul(prod, out.d.at(k - 1, k - 1));
    if (fitting_ideal(a, k) != FinGenIdeal::principal(prod))
      throw std::logic_error("diagonalize: Fitting ideal mismatch");
  }
  return out;
}

}  // namespace stacked

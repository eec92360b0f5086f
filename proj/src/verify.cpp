#include "stacked/verify.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace stacked {

namespace {

Int minor_gcd(const ZMat& a, std::size_t k) {
  // gcd of all k x k minors, by direct cofactor determinants
  Int g = 0;
  std::vector<std::size_t> rs(k), cs(k);
  std::function<Int(const std::vector<std::size_t>&,
                    const std::vector<std::size_t>&)>
      det = [&](const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& cols) -> Int {
    std::size_t m = rows.size();
    if (m == 1) return a.at(rows[0], cols[0]);
    Int acc = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (a.at(rows[0], cols[j]) == 0) continue;
      std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
      std::vector<std::size_t> sub_cols;
      for (std::size_t t = 0; t < m; ++t)
        if (t != j) sub_cols.push_back(cols[t]);
      Int term = a.at(rows[0], cols[j]) * det(sub_rows, sub_cols);
      acc += (j % 2 == 0) ? term : Int(-term);
    }
    return acc;
  };
  std::function<void(std::size_t, std::size_t)> cloop =
      [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
          std::vector<std::size_t> rows(rs.begin(), rs.end());
          std::vector<std::size_t> cols(cs.begin(), cs.end());
          g = gcd(g, det(rows, cols));
          return;
        }
        for (std::size_t c = start; c < a.cols; ++c) {
          cs[pos] = c;
          cloop(pos + 1, c + 1);
        }
      };
  std::function<void(std::size_t, std::size_t)> rloop =
      [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
          cloop(0, 0);
          return;
        }
        for (std::size_t r = start; r < a.rows; ++r) {
          rs[pos] = r;
          rloop(pos + 1, r + 1);
        }
      };
  rloop(0, 0);
  return g;
}

}  // namespace

std::vector<Int> snf_oracle(const ZMat& a) {
  std::vector<Int> out;
  Int prev = 1;
  std::size_t kmax = std::min(a.rows, a.cols);
  for (std::size_t k = 1; k <= kmax; ++k) {
    Int dk = minor_gcd(a, k);
    if (dk == 0) break;
    out.push_back(div_exact(dk, prev));
    prev = dk;
  }
  return out;
}

// ---------------------------------------------------------------------------

VerificationReport check_pp_lemma(const RingPtr& ring) {
  VerificationReport rep;
  rep.case_id = ring->to_string();
  rep.property = "pp-lemma (idempotent annihilators, faithful => nzd)";
  if (!ring->finite()) {
    rep.fail("ring is not finite");
    return rep;
  }
  Int size = ring->size();
  if (size > 1000) {
    rep.fail("ring size above enumeration cap 1000");
    return rep;
  }
  std::vector<Element> idems = ring->idempotents();
  bool pp = ring->is_pp_instance();

  // every ideal of the supported finite instances is principal
  std::vector<Element> seen;
  for (Int i = 0; i < size; ++i) {
    Element a = ring->element_at(i);
    FinGenIdeal ideal = FinGenIdeal::principal(a);
    bool dup = false;
    for (const Element& s : seen)
      if (FinGenIdeal::principal(s) == ideal) {
        dup = true;
        break;
      }
    if (dup) continue;
    seen.push_back(a);

    Element f = annihilator_idempotent({a}).value();
    if (!ring->mul(a, f).is_zero())
      rep.fail("A*f != 0 for generator " + ring->element_to_string(a));
    // maximality: every idempotent killing a lies in Rf
    for (const Element& e : idems) {
      if (!ring->mul(a, e).is_zero()) continue;
      if (ring->mul(e, f) != e)
        rep.fail("idempotent " + ring->element_to_string(e) +
                 " kills A but is outside Rf, A = (" +
                 ring->element_to_string(a) + ")");
    }
    // exact annihilator on pp instances: ann(A) = Rf
    std::vector<Element> ann;
    for (Int x = 0; x < size; ++x) {
      Element xx = ring->element_at(x);
      if (ring->mul(xx, a).is_zero()) ann.push_back(xx);
    }
    if (pp) {
      for (const Element& x : ann)
        if (ring->mul(x, f) != x)
          rep.fail("ann(A) strictly larger than Rf at A = (" +
                   ring->element_to_string(a) + ")");
    }
    // faithful ideals contain a non-zero-divisor
    bool faithful = ann.size() == 1;  // only zero annihilates
    auto witness = is_faithful(ideal);
    if (faithful != witness.has_value())
      rep.fail("is_faithful disagrees with exhaustive annihilator at (" +
               ring->element_to_string(a) + ")");
    if (witness) {
      if (ring->is_zero_divisor(*witness) || !ideal.contains(*witness))
        rep.fail("faithful witness invalid for (" +
                 ring->element_to_string(a) + ")");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport verify_stacked(std::size_t n, const RingMatrix& h,
                                  const StackedBases& sb) {
  VerificationReport rep;
  const RingPtr& ring = h.ring();
  rep.case_id = ring->to_string();
  rep.property = "stacked bases reconstruction";

  // idempotent chain
  for (std::size_t k = 0; k < sb.stages.size(); ++k) {
    const Element& eps = sb.stages[k].epsilon;
    if (!ring->is_idempotent_value(eps)) rep.fail("epsilon not idempotent");
    if (eps.is_zero()) rep.fail("zero stage idempotent");
    if (k + 1 < sb.stages.size()) {
      const Element& nxt = sb.stages[k + 1].epsilon;
      if (ring->mul(nxt, eps) != nxt)
        rep.fail("epsilon chain condition fails at stage " +
                 std::to_string(k));
    }
  }
  // stage contents: c(U_k) * eps_k = R eps_k
  for (std::size_t k = 0; k < sb.stages.size(); ++k) {
    std::vector<Element> cg;
    for (const auto& u : sb.stages[k].unit_gens)
      for (const Element& e : u) cg.push_back(e);
    if (cg.empty()) {
      rep.fail("stage without generators");
      continue;
    }
    FinGenIdeal cu = FinGenIdeal::normalize(ring, cg);
    FinGenIdeal lhs = ideal_scale(cu, sb.stages[k].epsilon);
    FinGenIdeal rhs = FinGenIdeal::principal(sb.stages[k].epsilon);
    if (lhs != rhs) rep.fail("c(U_k) eps_k != R eps_k at stage " + std::to_string(k));
  }
  // projector algebra: pi_k^2 = pi_k, pi_k pi_j = 0, pi_k u = u on U_k,
  // pi on complement = 0
  for (std::size_t k = 0; k < sb.stages.size(); ++k) {
    const RingMatrix& pk = sb.stages[k].projector;
    if (mat_mul(pk, pk) != pk) rep.fail("projector not idempotent");
    for (std::size_t j = 0; j < sb.stages.size(); ++j) {
      if (j == k) continue;
      if (!mat_mul(pk, sb.stages[j].projector).is_zero())
        rep.fail("projectors not orthogonal");
    }
    for (const auto& u : sb.stages[k].unit_gens) {
      std::vector<Element> pu;
      for (std::size_t i = 0; i < n; ++i) {
        Element s = ring->zero();
        for (std::size_t j2 = 0; j2 < n; ++j2)
          s = ring->add(s, ring->mul(pk.at(i, j2), u[j2]));
        pu.push_back(s);
      }
      if (pu != u) rep.fail("projector does not fix its summand");
    }
    for (const auto& v : sb.complement) {
      bool zero = true;
      for (std::size_t i = 0; i < n && zero; ++i) {
        Element s = ring->zero();
        for (std::size_t j2 = 0; j2 < n; ++j2)
          s = ring->add(s, ring->mul(pk.at(i, j2), v[j2]));
        if (!s.is_zero()) zero = false;
      }
      if (!zero) rep.fail("projector does not kill the complement");
    }
  }
  // spanning: R^n = U_1 + ... + U_m + N
  {
    std::vector<std::vector<Element>> all;
    for (const auto& st : sb.stages)
      for (const auto& u : st.unit_gens) all.push_back(u);
    for (const auto& v : sb.complement) all.push_back(v);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Element> ei(n, ring->zero());
      ei[i] = ring->one();
      if (!span_contains(ring, all, ei))
        rep.fail("basis vector " + std::to_string(i) + " not spanned");
    }
  }
  // reconstruction: H = sum_k (J_1...J_k) U_k, both inclusions
  {
    std::vector<std::vector<Element>> rhs;
    FinGenIdeal acc = FinGenIdeal::unit_ideal(ring);
    for (const auto& st : sb.stages) {
      acc = ideal_product(acc, st.ideal);
      for (const Element& a : acc.nf_gens())
        for (const auto& u : st.unit_gens) rhs.push_back(vec_scale(a, u));
    }
    std::vector<std::vector<Element>> lhs;
    for (std::size_t j = 0; j < h.cols(); ++j) lhs.push_back(h.col(j));
    for (const auto& v : lhs)
      if (!span_contains(ring, rhs, v)) {
        rep.fail("column of H not representable in the stage sum");
        break;
      }
    for (const auto& v : rhs)
      if (!span_contains(ring, lhs, v)) {
        rep.fail("stage sum leaves the column span of H");
        break;
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

Int lattice_index_of_columns(const PresentedModule& m) {
  // finite index of the column lattice (with modulus/order padding) in the
  // coordinate lattice; 0 when the quotient is infinite
  const RingPtr& ring = m.ring;
  std::size_t n = m.n;
  ZMat rows(0, 0);
  if (ring->kind() == Ring::Kind::Integers) {
    rows = ZMat(m.h.cols(), n);
    for (std::size_t j = 0; j < m.h.cols(); ++j)
      for (std::size_t i = 0; i < n; ++i) rows.at(j, i) = m.h.at(i, j).as_int();
  } else if (ring->kind() == Ring::Kind::Quadratic) {
    rows = ZMat(2 * m.h.cols(), 2 * n);
    Element w = ring->make_quad(0, 1);
    for (std::size_t j = 0; j < m.h.cols(); ++j)
      for (std::size_t i = 0; i < n; ++i) {
        Element g = m.h.at(i, j);
        Element wg = ring->mul(g, w);
        rows.at(2 * j, 2 * i) = g.as_quad().a;
        rows.at(2 * j, 2 * i + 1) = g.as_quad().b;
        rows.at(2 * j + 1, 2 * i) = wg.as_quad().a;
        rows.at(2 * j + 1, 2 * i + 1) = wg.as_quad().b;
      }
  } else if (ring->kind() == Ring::Kind::Residue) {
    rows = ZMat(m.h.cols() + n, n);
    for (std::size_t j = 0; j < m.h.cols(); ++j)
      for (std::size_t i = 0; i < n; ++i) rows.at(j, i) = m.h.at(i, j).as_int();
    for (std::size_t i = 0; i < n; ++i)
      rows.at(m.h.cols() + i, i) = ring->modulus();
  } else {
    throw PreconditionError("lattice index: connected rings only");
  }
  RowHnf h = row_hnf(rows);
  std::size_t dim = rows.cols;
  if (h.pivots.size() < dim) return 0;
  Int idx = 1;
  for (std::size_t i = 0; i < dim; ++i) idx *= h.h.at(i, h.pivots[i]);
  return idx;
}

Int module_size_finite(const PresentedModule& m) {
  const RingPtr& ring = m.ring;
  if (ring->kind() == Ring::Kind::Residue) return lattice_index_of_columns(m);
  // product of finite rings: componentwise over factors
  Int total = 1;
  const auto& fs = ring->factors();
  for (std::size_t f = 0; f < fs.size(); ++f) {
    RingMatrix sub(fs[f], m.n, m.h.cols());
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t j = 0; j < m.h.cols(); ++j)
        sub.at(i, j) = m.h.at(i, j).as_tuple()[f];
    total *= module_size_finite(PresentedModule(fs[f], m.n, sub));
  }
  return total;
}

Int decomposition_size_finite(const RingPtr& ring, const Decomposition& d,
                              std::size_t /*n*/) {
  Int total = 1;
  for (const FinGenIdeal& i : d.torsion_chain) total *= i.norm();
  // projective blocks: |R e_i|^{n_i}
  for (std::size_t b = 0; b < d.ranks.size(); ++b) {
    // |R e| = product of component sizes inside the support of e
    Int block_size = 1;
    const auto& comps = ring->components();
    for (std::size_t c = 0; c < comps.size(); ++c) {
      Element proj = ring->mul(d.rank_idempotents[b], comps[c].unit);
      if (!proj.is_zero()) block_size *= comps[c].block->size();
    }
    for (std::size_t t = 0; t < d.ranks[b]; ++t) total *= block_size;
  }
  return total;
}

}  // namespace

VerificationReport verify_decomposition(const PresentedModule& module,
                                        const Decomposition& d,
                                        std::uint64_t seed) {
  VerificationReport rep;
  const RingPtr& ring = module.ring;
  rep.case_id = ring->to_string();
  rep.property = "decomposition against independent oracles";

  // chain shape
  for (std::size_t i = 0; i + 1 < d.torsion_chain.size(); ++i)
    if (!d.torsion_chain[i].contains_ideal(d.torsion_chain[i + 1]))
      rep.fail("torsion chain not descending");
  for (const FinGenIdeal& i : d.torsion_chain) {
    if (!i.is_proper()) rep.fail("unit ideal in torsion chain");
    if (!is_invertible(i)) rep.fail("non-invertible chain ideal");
  }

  if (ring->kind() == Ring::Kind::Integers) {
    ZMat z(module.n, module.h.cols());
    for (std::size_t i = 0; i < module.n; ++i)
      for (std::size_t j = 0; j < module.h.cols(); ++j)
        z.at(i, j) = module.h.at(i, j).as_int();
    std::vector<Int> oracle = snf_oracle(z);
    std::vector<Int> nontrivial;
    for (const Int& v : oracle)
      if (v != 1) nontrivial.push_back(v);
    if (nontrivial.size() != d.torsion_chain.size()) {
      rep.fail("chain length disagrees with SNF oracle");
    } else {
      for (std::size_t i = 0; i < nontrivial.size(); ++i)
        if (d.torsion_chain[i].norm() != nontrivial[i])
          rep.fail("invariant factor mismatch at " + std::to_string(i));
    }
    std::size_t corank = module.n - oracle.size();
    std::size_t free_rank = d.ranks.empty() ? 0 : d.ranks.front();
    if (d.ranks.size() > 1) rep.fail("unexpected rank blocks over Z");
    if (corank != free_rank) rep.fail("free rank disagrees with corank");
    return rep;
  }

  if (ring->finite()) {
    Int lhs = module_size_finite(module);
    Int rhs = decomposition_size_finite(ring, d, module.n);
    if (lhs != rhs)
      rep.fail("module cardinality mismatch: " + lhs.get_str() + " vs " +
               rhs.get_str());
    // annihilator comparison (enumerate the ring)
    if (ring->size() <= 1000) {
      std::vector<std::vector<Element>> hcols;
      for (std::size_t j = 0; j < module.h.cols(); ++j)
        hcols.push_back(module.h.col(j));
      std::vector<Element> ann_m;
      for (Int x = 0; x < ring->size(); ++x) {
        Element e = ring->element_at(x);
        bool kills = true;
        for (std::size_t i = 0; i < module.n && kills; ++i) {
          std::vector<Element> v(module.n, ring->zero());
          v[i] = e;
          if (!span_contains(ring, hcols, v)) kills = false;
        }
        if (kills) ann_m.push_back(e);
      }
      FinGenIdeal expected = d.torsion_chain.empty()
                                 ? FinGenIdeal::unit_ideal(ring)
                                 : d.torsion_chain.back();
      Element free_mask = ring->zero();
      for (const Element& e : d.rank_idempotents)
        free_mask = ring->add(free_mask, e);
      FinGenIdeal free_ann =
          FinGenIdeal::principal(ring->sub(ring->one(), free_mask));
      FinGenIdeal rhs_ann = ideal_intersect(expected, free_ann);
      FinGenIdeal lhs_ann = FinGenIdeal::normalize(
          ring, ann_m.empty() ? std::vector<Element>{ring->zero()} : ann_m);
      if (lhs_ann != rhs_ann) rep.fail("annihilator mismatch");
    }
    return rep;
  }

  if (ring->kind() == Ring::Kind::Quadratic) {
    Int idx = lattice_index_of_columns(module);
    if (idx != 0) {
      // full torsion: |R^n/H| = prod of chain norms
      Int prod = 1;
      for (const FinGenIdeal& i : d.torsion_chain) prod *= i.norm();
      if (!d.ranks.empty()) rep.fail("free part with finite quotient");
      if (idx != prod)
        rep.fail("lattice index " + idx.get_str() + " != chain norm product " +
                 prod.get_str());
    }
  }

  // seeded re-derivation with permuted generators
  {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(module.h.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng() % i]);
    RingMatrix hp(ring, module.n, module.h.cols());
    for (std::size_t j = 0; j < perm.size(); ++j)
      for (std::size_t i = 0; i < module.n; ++i)
        hp.at(i, j) = module.h.at(i, perm[j]);
    DecomposeResult again = decompose(PresentedModule(ring, module.n, hp));
    if (!invariants_equal(d, again.invariants))
      rep.fail("re-derivation with permuted generators disagrees");
  }
  return rep;
}

}  // namespace stacked

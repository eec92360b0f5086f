#pragma once

#include <optional>
#include <vector>

#include "stacked/ideal.hpp"
#include "stacked/matrix.hpp"
#include "stacked/ring.hpp"

namespace stacked {

// Finitely presented module M = R^n / H, H given by the column span of a
// presentation matrix with n rows.
struct PresentedModule {
  RingPtr ring;
  std::size_t n = 0;
  RingMatrix h;

  PresentedModule(RingPtr r, std::size_t rank, RingMatrix mat);
};

// One stage of a stacked-bases decomposition: a rank-one projective summand
// U_k of eps_k R^n (usually one generator; two when the summand is a
// non-principal ideal class), its stage ideal J_k in faithful-completed
// form, and the exact projector of R^n onto U_k.
struct StackedStage {
  FinGenIdeal ideal;
  Element epsilon;
  std::vector<std::vector<Element>> unit_gens;
  RingMatrix projector;
};

struct StackedBases {
  RingPtr ring;
  std::size_t n = 0;
  std::vector<StackedStage> stages;
  std::vector<std::vector<Element>> complement;  // generators of N_m
};

// Invariants of Theorem-style decompositions: torsion chain, rank blocks of
// the projective part, and a Steinitz representative.
struct Decomposition {
  RingPtr ring;
  std::vector<FinGenIdeal> torsion_chain;   // I_1 >= I_2 >= ..., proper
  std::vector<Element> rank_idempotents;    // orthogonal e_i
  std::vector<std::size_t> ranks;           // strictly increasing, > 0
  FinGenIdeal steinitz;                     // zero ideal when no free part
};

struct DecomposeResult {
  Decomposition invariants;
  StackedBases stacked;
  // stage ideals completed to I_k = (J_1...J_k) eps_k + R(1-eps_k), aligned
  // with stacked.stages and not yet chain-normalised
  std::vector<FinGenIdeal> raw_chain;
};

struct DiagonalForm {
  RingMatrix p, d, q;  // p*a*q = d, diagonal with divisibility chain
};

struct UcsSummand {
  std::vector<Element> u;
  RingMatrix projector;  // exact idempotent with image R*u
};

struct PairReduction {
  Element a;             // non-zero-divisor of I used to clear denominators
  Element b;             // (b/a) I + J = R
  Element s, t;          // s in I, t in J with (b/a)s + t = 1
  FinGenIdeal product;   // I*J
};

struct ProjectivePart {
  std::vector<Element> idempotents;
  std::vector<std::size_t> ranks;
  FinGenIdeal steinitz;
};

// --- operations ---

// A generator of a rank-one free direct summand R*u of R^n contained in the
// span of gens (unit content required). Throws SearchExhausted when the
// summand exists but is not monogenic (non-principal rank-one class).
UcsSummand ucs_summand(const RingPtr& ring, std::size_t n,
                       const std::vector<std::vector<Element>>& gens);

StackedBases stacked_bases(std::size_t n, const RingMatrix& h);

// Rearranges cyclic annihilators into a descending chain with the same
// direct sum, by (A, B) -> (A + B, A /\ B) exchanges; unit ideals dropped.
std::vector<FinGenIdeal> chain_normalize(const std::vector<FinGenIdeal>& in);

// g in I with I = Rg + JI, witnessing I/JI = R/J.
Element cyclic_quotient_rep(const FinGenIdeal& i, const FinGenIdeal& j);

// Constructive I + J = R scaling: b with (b/a) I + J = R, realising
// I (+) J = R (+) IJ.
PairReduction pair_reduce(const FinGenIdeal& i, const FinGenIdeal& j);

// Rank blocks and Steinitz representative of a projective submodule given
// by generators (a direct complement produced by stacked_bases).
ProjectivePart projective_normalize(const RingPtr& ring, std::size_t n,
                                    const std::vector<std::vector<Element>>& gens);
// Convenience overload matching the summand-list shape N = J_1 (+) ... (+) J_k.
ProjectivePart projective_normalize(const RingPtr& ring,
                                    const std::vector<FinGenIdeal>& summands);

DecomposeResult decompose(const PresentedModule& module);

bool invariants_equal(const Decomposition& d1, const Decomposition& d2);

DiagonalForm diagonalize(const RingMatrix& a);

// Sum of the torsion-stage projectors: an explicit splitting of R^n/H onto
// its torsion part (identity on tM, image inside the torsion preimage).
RingMatrix torsion_projector(const DecomposeResult& r);

// Fitting ideal of k x k minors (independent cross-check for diagonalize).
FinGenIdeal fitting_ideal(const RingMatrix& a, std::size_t k);

}  // namespace stacked

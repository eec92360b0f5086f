#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stacked/decompose.hpp"
#include "stacked/ideal.hpp"
#include "stacked/matrix.hpp"
#include "stacked/ring.hpp"
#include "stacked/zlattice.hpp"

namespace stacked {

// Outcome of one verification; failing reports carry a replayable witness.
struct VerificationReport {
  std::string case_id;
  std::string property;
  bool pass = true;
  std::string witness;

  void fail(const std::string& w) {
    pass = false;
    if (witness.empty()) witness = w;
  }
};

// Classical Smith invariant factors of an integer matrix, computed from
// determinantal divisors (gcds of k x k minors): d_k = D_k / D_{k-1}.
// Deliberately shares no code with the reduction used by the engine.
// Returns the nonzero factors; the zero matrix yields the empty list.
std::vector<Int> snf_oracle(const ZMat& a);

// Exhaustive idempotent-annihilator checks on a finite ring: every ideal's
// annihilator idempotent is the largest idempotent killing the ideal, the
// equality ann(A) = Rf holds on pp instances, and every faithful ideal
// contains a non-zero-divisor (with verified witness).
VerificationReport check_pp_lemma(const RingPtr& ring);

// Exact membership verification of a stacked-bases output: direct sum of
// the stage summands with the complement, reconstruction of H from the
// stage ideals, idempotent chain condition, unit stage contents.
VerificationReport verify_stacked(std::size_t n, const RingMatrix& h,
                                  const StackedBases& sb);

// Ground-truth checks of a decomposition: SNF oracle over the integers,
// cardinality/annihilator over finite rings, index bookkeeping plus a
// seeded re-derivation over quadratic orders and products.
VerificationReport verify_decomposition(const PresentedModule& module,
                                        const Decomposition& d,
                                        std::uint64_t seed = 1);

}  // namespace stacked

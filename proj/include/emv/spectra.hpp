#pragma once

// Hull-kernel base sets M(x) = {I maximal | x not in I} over the maximal
// ideal space, the identities that make them a base, difference laws, the
// multiples identity, sup criteria read through the discrete shadow, and the
// compactness / top-element equivalence.
//
// Spectrum points are named canonically: the maximal-ideal catalog index for
// finite backends (and index 0 for the single Chang point), the coordinate
// for finite-support backends.  Every supported spectrum is discrete, so
// "nowhere dense" coincides with "empty"; reports that rely on this say so
// in their note.

#include <cstdint>
#include <string>
#include <vector>

#include "emv/algebra.hpp"
#include "emv/core_ops.hpp"
#include "emv/ideals.hpp"

namespace emv {

struct BaseSet {
  Element element;
  std::vector<std::uint32_t> points;  // sorted
  bool operator==(const BaseSet& o) const { return points == o.points; }
  bool operator!=(const BaseSet& o) const { return points != o.points; }
};

BaseSet base_set(const Algebra& alg, const Element& x);

// M(0) = empty, monotonicity, meet/join against intersection/union.
AxiomReport verify_base_identities(const Algebra& alg, const ProbeOptions& opts = {});

// The remainder laws for M(b)\M(x) with x <= b idempotent: containment in
// M(lambda_b(x)), equality for idempotent x, the relative form through
// y (.) lambda_b(x), the converse on semisimple backends (equality forces
// idempotence), and the complement identity when a top exists.
AxiomReport verify_difference_laws(const Algebra& alg, const ProbeOptions& opts = {});

// M(x) as the union over n of M(a)\M(lambda_a(n.x)), a = cover of x.  The
// union is evaluated until the multiples stabilize; radical elements of the
// Chang backend never stabilize and are handled symbolically (every term is
// empty there).
AxiomReport verify_multiples_identity(const Algebra& alg, const Element& x,
                                      const ProbeOptions& opts = {});

enum class SupVerdict { Holds, Fails, Undecided };

struct SupCriterionReport {
  SupVerdict verdict = SupVerdict::Undecided;
  bool sup_matches = false;      // x equals the computed least upper bound
  bool difference_empty = false; // M(x) \ union of M(x_t) is empty
  std::vector<std::uint32_t> difference;
  std::string note;
};

// x = sup of the family iff M(x) \ union M(x_t) is nowhere dense; evaluated
// on idempotent elements only (a generalized Boolean slice), with nowhere
// dense read as empty on the discrete spectrum.  Rule-backed families that
// do not stabilize by the horizon come back Undecided.  A verdict where the
// two sides of the biconditional disagree is an internal error and throws
// ConsistencyError.
SupCriterionReport sup_criterion(const Algebra& alg, const Element& x,
                                 const ElementSequence& family,
                                 const ProbeOptions& opts = {});

// For an idempotent sequence with sup a: M(a) equals the union of the
// M(a_n), and a |-> M(a) is injective on idempotents (the whole idempotent
// skeleton on finite backends, the given sequence elsewhere).
AxiomReport compact_basis_audit(const Algebra& alg, const std::vector<Element>& seq);

struct CompactnessReport {
  bool has_top = false;
  bool spectrum_finite = false;
  std::size_t spectrum_points = 0;  // meaningful when spectrum_finite
  bool equivalence_holds = false;   // has_top == spectrum_finite
  std::string note;
};

// The desk surrogate for "MaxI(M) compact iff M has a top": table backends
// and Chang have finitely many maximal ideals, the finite-support backends
// have the countably infinite discrete coordinate catalog.
CompactnessReport compactness_shadow(const Algebra& alg);

struct HausdorffWitness {
  Element first;       // its base set is a neighbourhood of the first point
  Element second;      // likewise for the second point
  BaseSet first_set;   // contains i, misses j
  BaseSet second_set;  // contains j, misses i
};

// Disjoint basic neighbourhoods separating spectrum points i and j, built
// as (y (.) lambda_a(x), x (.) lambda_a(y)) from elements x, y lying in
// exactly one of the two ideals.  Throws std::invalid_argument when i = j
// or a point is out of range; failure of the construction to separate is a
// ConsistencyError.
HausdorffWitness hausdorff_witness(const Algebra& alg, std::uint32_t i, std::uint32_t j,
                                   const ProbeOptions& opts = {});

}  // namespace emv

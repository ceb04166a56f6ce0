#pragma once

// Clans and tribes of rational-valued fuzzy sets over a finite domain, the
// pointwise calculus on them, and the Loomis-Sikorski style construction
// over the enumerated state-morphism space of a finite backend.
//
// Tribes are kept intensional: a membership oracle, a finite generator list
// and a dominator map.  Countable operations accept finitely presented
// sequences only (all but finitely many terms zero), which is where the
// sigma-structure stays decidable on a desk.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "emv/algebra.hpp"
#include "emv/core_ops.hpp"
#include "emv/rational.hpp"
#include "emv/states.hpp"

namespace emv {

struct FuzzySet {
  std::vector<Rational> values;
  bool operator==(const FuzzySet& o) const { return values == o.values; }
  bool operator!=(const FuzzySet& o) const { return !(values == o.values); }
};

FuzzySet fz_zero(std::size_t omega);
FuzzySet fz_full(std::size_t omega);
FuzzySet fz_characteristic(std::size_t omega, const std::vector<std::uint32_t>& points);
bool fz_in_unit(const FuzzySet& f);
bool fz_is_characteristic(const FuzzySet& f);
bool fz_leq(const FuzzySet& f, const FuzzySet& g);
// Capped pointwise operations; cap must be a characteristic function
// dominating both arguments (the results do not depend on which one).
FuzzySet fz_oplus(const FuzzySet& f, const FuzzySet& g, const FuzzySet& cap);
FuzzySet fz_odot(const FuzzySet& f, const FuzzySet& g, const FuzzySet& cap);
// Truncated difference max{f-g, 0}; needs no cap.
FuzzySet fz_star(const FuzzySet& f, const FuzzySet& g);
FuzzySet fz_join(const FuzzySet& f, const FuzzySet& g);
FuzzySet fz_meet(const FuzzySet& f, const FuzzySet& g);
// a - f for f <= a.
FuzzySet fz_minus(const FuzzySet& a, const FuzzySet& f);
// min{sum of the terms, cap} pointwise.
FuzzySet countable_oplus(const std::vector<FuzzySet>& seq, const FuzzySet& cap);
std::string fz_str(const FuzzySet& f);

// N(f): the points where f is nonzero; and the points where f and g differ
// (the N-set of the signed difference f - g).
std::vector<std::uint32_t> n_set(const FuzzySet& f);
std::vector<std::uint32_t> n_set_between(const FuzzySet& f, const FuzzySet& g);

class Tribe {
public:
  enum class Kind { AllZeroOne, AllRational, HatImage, FromMembers };

  // The Boolean clan of every 0/1 function.
  static Tribe all_zero_one(std::size_t omega);
  // Every rational fuzzy set on the domain.
  static Tribe all_rational(std::size_t omega);
  // An explicit finite member list; audits decide whether it is a tribe.
  static Tribe from_members(std::size_t omega, std::vector<FuzzySet> members);
  // {hat x | x in M} over the enumerated state-morphism space of M.
  static Tribe hat_image(const std::shared_ptr<const FiniteAlgebra>& m);

  Kind kind() const { return kind_; }
  std::size_t omega() const { return omega_; }
  bool contains(const FuzzySet& f) const;
  // A characteristic member dominating f; std::invalid_argument if none.
  FuzzySet dominator(const FuzzySet& f) const;
  const std::vector<FuzzySet>& generators() const { return generators_; }
  // Full member list for member-backed tribes; empty for oracle-backed ones.
  const std::vector<FuzzySet>& members() const { return members_; }
  std::string describe() const;

private:
  Kind kind_ = Kind::FromMembers;
  std::size_t omega_ = 0;
  std::vector<FuzzySet> members_;
  std::vector<FuzzySet> generators_;
};

// Clan axioms on a probe pool: zero present, complements below characteristic
// members, binary (+) and lattice closure, dominators, and a member reaching
// value 1 at every point of the domain.
AxiomReport clan_audit(const Tribe& t, const ProbeOptions& opts = {});

// Sigma-side axioms on finitely presented sequences: countable (+) closure
// with the min/sum rule, independence from the choice of cap, pointwise
// inf/sup of bounded monotone folds.
AxiomReport tribe_audit(const Tribe& t, const ProbeOptions& opts = {});

// The N-set calculus on probe pairs: unions under (+), the strict-excess
// description of star and (.), the symmetric difference law, monotonicity.
AxiomReport n_set_calculus(const Tribe& t, const ProbeOptions& opts = {});

// Loomis-Sikorski witness over a finite backend: the domain is the
// enumerated state-morphism space, the tribe is the image of the hat map
// x |-> (s_1(x), ..., s_k(x)), and h inverts it.  On this finite discrete
// domain "N(f - hat x) is meager" collapses to f = hat x; the note records
// the reduction.  Construction audits the hat map as a homomorphism, the
// round trips in both directions, and the sigma-shadow on finite suprema;
// defects raise ConsistencyError.
struct LsWitness {
  std::shared_ptr<const FiniteAlgebra> algebra;
  std::size_t omega = 0;
  std::vector<StateMorphism> states;
  Tribe tribe;
  std::vector<FuzzySet> hat;  // element index -> hat x
  std::string note;

  // The unique x with f ~ x; std::invalid_argument when f is not in the tribe.
  Element h(const FuzzySet& f) const;
};
LsWitness ls_construct(const std::shared_ptr<const FiniteAlgebra>& m);

// A deliberately non-injective sigma-homomorphic image: restrict every
// rational fuzzy set on the domain to the kept points.  The kernel is the
// set of functions vanishing on keep.  Audited at construction.
struct LsQuotient {
  std::size_t omega = 0;
  std::vector<std::uint32_t> keep;
  Tribe source;
  Tribe image;
  std::string kernel;
  AxiomReport audit;

  FuzzySet apply(const FuzzySet& f) const;
  bool in_kernel(const FuzzySet& f) const;
};
LsQuotient ls_quotient_example(std::size_t omega, std::vector<std::uint32_t> keep);

// R = {A within Omega | the characteristic function of A is in the tribe},
// with h restricted to characteristic functions.  Verified to be a ring of
// sets closed under stabilizing countable unions, mapped bijectively onto
// the idempotents of the base algebra.
struct SigmaRing {
  std::vector<std::vector<std::uint32_t>> sets;  // canonical order: size, then lex
  std::vector<Element> images;                   // h0 applied per set
  AxiomReport audit;
};
SigmaRing sigma_ring_extract(const LsWitness& w);

}  // namespace emv

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "emv/algebra.hpp"
#include "emv/core_ops.hpp"
#include "emv/states.hpp"

namespace emv {

// Element of the representing MV-algebra N over a proper base M: either the
// embedded copy of x, or the formal complement of x0.  Since M is proper no
// embedded element equals a complement, so equality is tag-and-payload.
struct NElement {
  bool complement = false;
  Element base;
  friend bool operator==(const NElement& a, const NElement& b) {
    return a.complement == b.complement && a.base == b.base;
  }
  friend bool operator!=(const NElement& a, const NElement& b) { return !(a == b); }
};

// The representing MV-algebra: M plus one formal complement per element,
// with top = complement_of(0).  The mixed sum uses a local complement under
// an idempotent cover; the result does not depend on the cover chosen, and
// audit_representation checks that on probes.
class RepresentedMv {
public:
  explicit RepresentedMv(AlgebraPtr base);

  const AlgebraPtr& base() const { return base_; }
  std::string name() const { return "represent(" + base_->name() + ")"; }

  NElement direct(const Element& x) const { return {false, x}; }
  NElement complement_of(const Element& x) const { return {true, x}; }
  NElement zero() const { return direct(base_->zero()); }
  NElement top() const { return complement_of(base_->zero()); }

  NElement oplus(const NElement& a, const NElement& b) const;
  NElement lambda_top(const NElement& z) const { return {!z.complement, z.base}; }
  NElement odot(const NElement& a, const NElement& b) const;
  NElement ominus(const NElement& a, const NElement& b) const;
  NElement join(const NElement& a, const NElement& b) const;
  NElement meet(const NElement& a, const NElement& b) const;
  bool leq(const NElement& a, const NElement& b) const;
  std::string format(const NElement& z) const;

private:
  AlgebraPtr base_;
};

struct RepresentResult {
  bool already_mv = false;
  std::shared_ptr<const RepresentedMv> algebra;  // null when already_mv
};
// A base with a top needs no representation; a proper base gets N.
RepresentResult represent(const AlgebraPtr& m);

// Embedded copies of the base probe set plus their complements.
std::vector<NElement> n_probe_elements(const RepresentedMv& n, const ProbeOptions& opts = {});

// MV laws on probes, cover-independence of the mixed sum, the embedded copy
// being a proper maximal ideal, and the three sup-transfer shapes (direct
// joins stay direct, complement joins collapse by De Morgan, mixed joins
// land on a complement of a truncated difference).
AxiomReport audit_representation(const RepresentedMv& n, const ProbeOptions& opts = {});

// State extension along the representation: agrees with the ground state on
// embedded elements and takes 1 - s(x0) on complements.  s_infinity kills
// the embedded copy and sends every complement to 1.
struct ExtendedState {
  bool infinity = false;
  StateMorphism ground;  // meaningful when not infinity
  std::string rule;
  Rational value(const RepresentedMv& n, const NElement& z) const;
};
ExtendedState extend_state(const StateMorphism& s, const RepresentedMv& n,
                           const ProbeOptions& opts = {});
ExtendedState s_infinity(const RepresentedMv& n);
// Every extension of a base state, then s_infinity; each entry audited.
std::vector<ExtendedState> extended_state_catalog(const RepresentedMv& n,
                                                  const ProbeOptions& opts = {});

// Maximal ideals of N over an fs base: the kernel of each extended
// coordinate state plus the embedded copy of the base.
struct NIdeal {
  bool infinity = false;
  std::uint32_t coordinate = 0;
  bool contains(const RepresentedMv& n, const NElement& z) const;
  std::string describe() const;
};
struct NIdealList {
  std::string note;
  std::vector<NIdeal> ideals;
};
NIdealList maxideal_space_of_n(const RepresentedMv& n, const ProbeOptions& opts = {});

// The finite MV-subalgebra of N on support within {0..support-1}, realized
// as an explicit table algebra for exhaustive cross-checks.
struct BoundedSlice {
  std::shared_ptr<const FiniteAlgebra> algebra;
  std::vector<NElement> elements;  // by table index
  std::uint32_t support = 0;
};
BoundedSlice bounded_slice(const RepresentedMv& n, std::uint32_t support);

}  // namespace emv

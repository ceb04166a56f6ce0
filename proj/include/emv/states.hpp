#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "emv/algebra.hpp"
#include "emv/core_ops.hpp"
#include "emv/ideals.hpp"
#include "emv/rational.hpp"

namespace emv {

// A state-morphism: a homomorphism onto a subalgebra of the rational unit
// interval, carried either as a full value table (finite backends) or as a
// symbolic rule.  Exactly one per maximal ideal.
struct StateMorphism {
  enum class Kind { FiniteTable, FsCoordinate, ChangCharacter };
  Kind kind = Kind::FiniteTable;
  std::vector<Rational> table;  // FiniteTable: value by element index
  std::uint32_t coordinate = 0; // FsCoordinate: x -> x(coordinate)/order
  int order = 1;
  Ideal provenance;             // the maximal ideal the state collapses
  Element witness;              // some element with value 1
  std::string rule;             // printable description

  Rational value(const Algebra& alg, const Element& x) const;
};

struct StateList {
  bool symbolic = false;
  std::string note;
  std::vector<StateMorphism> states;
};

StateList state_morphisms(const AlgebraPtr& alg, const ProbeOptions& opts = {});

// Zero set / one set of a state.  Both are recomputed and certified against
// the claimed shapes; ker gives a maximal ideal, ker1 a maximal filter.
Ideal ker(const Algebra& alg, const StateMorphism& s, const ProbeOptions& opts = {});
Filter ker1(const Algebra& alg, const StateMorphism& s, const ProbeOptions& opts = {});

// Homomorphism laws for one state: zero, (+), lattice, local complements,
// idempotents land on {0,1}, and the value 1 is attained.
AxiomReport audit_state(const Algebra& alg, const StateMorphism& s, const ProbeOptions& opts = {});

// An element e with t(e) = 1 and s(e) = 0 for every s in x_set (t not in
// x_set).  The plain version scans the carrier; the recipe version follows
// the constructive proof (meet of complements of amplified kernel gaps,
// squared).  Both are audited and a missing witness raises ConsistencyError.
Element find_separating_element(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                                const StateMorphism& t);
Element find_separating_element_recipe(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                                       const StateMorphism& t);
// Dual: t(e) = 0 and s(e) = 1 for every s in x_set.
Element find_dual_separating_element(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                                     const StateMorphism& t);
Element find_dual_separating_element_recipe(const Algebra& alg,
                                            const std::vector<StateMorphism>& x_set,
                                            const StateMorphism& t);

// General comparability: inside every [0, a] any two elements are split by an
// idempotent e with x /\ e <= y and y /\ lambda_a(e) <= x.
struct ComparabilityReport {
  bool holds = false;
  bool exhaustive = false;
  std::vector<std::string> witness;  // a, x, y with no splitting idempotent
};
ComparabilityReport check_general_comparability(const Algebra& alg, const ProbeOptions& opts = {});

// Archimedean in the Belluce sense: n.x <= y for every n forces x (.) y = x.
// Must agree with semisimplicity; disagreement raises ConsistencyError.
struct ArchimedeanReport {
  bool archimedean = false;
  bool exhaustive = false;
  std::vector<std::string> witness;  // failing x, y
};
ArchimedeanReport is_archimedean_belluce(const Algebra& alg, const ProbeOptions& opts = {});

// The four classical alignments on a finite backend: theta (states to
// maximal ideals), zeta (states to maximal filters), and under general
// comparability xi (maximal ideals cut down to the idempotent algebra) and
// eta (states restricted to the idempotent algebra).  Entries are aligned by
// state index and each map is certified bijective onto its enumerated image.
struct CorrespondenceMaps {
  std::vector<StateMorphism> states;
  IdealList theta;
  FilterList zeta;
  bool comparability = false;
  std::string note;  // reason when xi/eta are unavailable
  std::shared_ptr<const FiniteAlgebra> idempotent_algebra;
  IdealList xi;
  std::vector<StateMorphism> eta;
};
CorrespondenceMaps correspondence_maps(const std::shared_ptr<const FiniteAlgebra>& alg,
                                       const ProbeOptions& opts = {});

// Pointwise limit checks for a sequence of valuations against a candidate
// limit, on a finite probe set.  Works for any algebra-like carrier (the
// representing MV-algebra included), so the ops are taken from the handle by
// name.  The candidate is also audited for the state-morphism laws on the
// probe set; a pointwise limit of state-morphisms can fail them.
struct ProbeVerdict {
  std::string probe;
  bool stabilized = false;
  bool matches_limit = false;
  Rational tail_value;
  std::size_t stabilized_at = 0;
};
struct WeakConvergenceReport {
  std::vector<ProbeVerdict> probes;
  bool all_match = false;
  bool limit_is_state_morphism = false;
  std::vector<std::string> limit_defects;
};

template <typename Alg, typename El>
WeakConvergenceReport weak_convergence_check(
    const Alg& alg, const std::function<Rational(std::size_t, const El&)>& seq,
    const std::function<Rational(const El&)>& limit, const std::vector<El>& probes,
    std::size_t horizon = 64) {
  if (horizon < 4) horizon = 4;
  WeakConvergenceReport rep;
  rep.all_match = true;
  std::size_t window = std::max<std::size_t>(2, horizon / 8);
  for (const El& p : probes) {
    ProbeVerdict v;
    v.probe = alg.format(p);
    Rational last = seq(0, p);
    std::size_t last_change = 0;
    for (std::size_t n = 1; n < horizon; ++n) {
      Rational cur = seq(n, p);
      if (cur != last) {
        last = cur;
        last_change = n;
      }
    }
    v.tail_value = last;
    v.stabilized_at = last_change;
    v.stabilized = last_change + window < horizon;
    v.matches_limit = v.stabilized && last == limit(p);
    if (!v.matches_limit) rep.all_match = false;
    rep.probes.push_back(std::move(v));
  }

  rep.limit_is_state_morphism = true;
  auto defect = [&rep](const std::string& what) {
    rep.limit_is_state_morphism = false;
    rep.limit_defects.push_back(what);
  };
  if (limit(alg.zero()) != Rational(0)) defect("zero is not sent to 0");
  bool attains = false;
  for (const El& p : probes)
    if (limit(p) == Rational(1)) attains = true;
  if (!attains) defect("value 1 is not attained on the probe set");
  for (const El& x : probes)
    for (const El& y : probes) {
      Rational vx = limit(x), vy = limit(y);
      if (limit(alg.oplus(x, y)) != vx.oplus1(vy)) {
        defect("(+) is not preserved at " + alg.format(x) + ", " + alg.format(y));
        return rep;
      }
      if (limit(alg.join(x, y)) != Rational::max(vx, vy) ||
          limit(alg.meet(x, y)) != Rational::min(vx, vy)) {
        defect("lattice is not preserved at " + alg.format(x) + ", " + alg.format(y));
        return rep;
      }
    }
  return rep;
}

}  // namespace emv

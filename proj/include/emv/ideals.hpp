#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emv/algebra.hpp"
#include "emv/core_ops.hpp"

namespace emv {

// Ideal: non-empty, downward closed, closed under (+).  Finite backends list
// members explicitly; lazy backends use symbolic descriptors with a
// membership test.
struct Ideal {
  enum class Kind { Explicit, Zero, Coordinate, Radical, Full, DownSet };
  Kind kind = Kind::Explicit;
  std::vector<std::size_t> members;   // Explicit: sorted element indices
  std::uint32_t coordinate = 0;       // Coordinate: {x : x(i) = 0}
  std::optional<Element> generator;   // DownSet: {x : supp(x) within supp(g)}
  bool proper = false;
  bool maximal = false;

  bool contains(const Algebra& alg, const Element& x) const;
  std::string describe(const Algebra& alg) const;
};

// Filter: non-empty, upward closed, closed under (.).
struct Filter {
  enum class Kind { Explicit, CoordinateFull, Bigs, Full };
  Kind kind = Kind::Explicit;
  std::vector<std::size_t> members;   // Explicit: sorted element indices
  std::uint32_t coordinate = 0;       // CoordinateFull: {x : x(i) = order}
  bool proper = false;
  bool maximal = false;

  bool contains(const Algebra& alg, const Element& x) const;
  std::string describe(const Algebra& alg) const;
};

struct IdealList {
  bool symbolic = false;    // lazy backends: the catalog families, sampled
  std::string note;
  std::vector<Ideal> ideals;
};

struct FilterList {
  bool symbolic = false;
  std::string note;
  std::vector<Filter> filters;
};

// Smallest ideal containing the seed elements.
Ideal generated_ideal(const Algebra& alg, const std::vector<Element>& seed);

// Finite backends: every ideal, walked as closures of growing seed sets (not
// a powerset scan).  Lazy backends: the documented catalog, with coordinate
// instances bounded by opts.support_bound.
IdealList enumerate_ideals(const Algebra& alg, const ProbeOptions& opts = {});
IdealList maximal_ideals(const Algebra& alg, const ProbeOptions& opts = {});

FilterList maximal_filters(const Algebra& alg, const ProbeOptions& opts = {});

// I_F = { lambda_a(x) : x in F, a idempotent above x }.  Certified to be an
// ideal (ConsistencyError otherwise); maximal when F is maximal.
Ideal ideal_of_filter(const Algebra& alg, const Filter& f, const ProbeOptions& opts = {});

// Radical computed twice: by the multiples formula (x in Rad iff some
// idempotent a above x has n.x <= lambda_a(x) for every n) and as the
// intersection of all maximal ideals.  The two routes must agree.
struct RadicalReport {
  Ideal via_formula;
  Ideal via_intersection;
  bool agree = false;
  bool semisimple = false;
};
RadicalReport radical(const Algebra& alg, const ProbeOptions& opts = {});
bool is_semisimple(const Algebra& alg, const ProbeOptions& opts = {});

// Quotient by a maximal ideal; the classes must form a finite MV-chain and
// the class map must be a homomorphism onto chain(levels).
struct QuotientChain {
  std::shared_ptr<const FiniteAlgebra> chain;
  std::vector<std::size_t> class_of;  // element index -> chain level
  std::size_t levels = 0;             // chain goes 0..levels
};
QuotientChain quotient_chain(const std::shared_ptr<const FiniteAlgebra>& alg, const Ideal& ideal);

}  // namespace emv

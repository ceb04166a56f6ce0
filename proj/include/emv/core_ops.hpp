#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emv/algebra.hpp"

namespace emv {

// Bounds for probing lazy backends.  horizon caps sequence probes, support /
// chang_index bound the element samples, seed drives the extra randomized
// finite-support samples.
struct ProbeOptions {
  std::size_t horizon = 64;
  std::uint32_t support_bound = 8;
  std::uint64_t chang_index_bound = 16;
  std::uint64_t seed = 12345;
  std::size_t extra_samples = 12;
};

// x (.) y inside [0, a]; a must be an idempotent above both operands.
Element odot_in(const Algebra& alg, const Element& a, const Element& x, const Element& y);
// Cover chosen canonically: least idempotent above x v y.
Element odot(const Algebra& alg, const Element& x, const Element& y);
// Truncated difference x (-) y = x (.) lambda_a(y) with the canonical cover.
Element ominus(const Algebra& alg, const Element& x, const Element& y);

// n.x = x (+) ... (+) x; 0.x = 0.
Element nscale(const Algebra& alg, std::uint64_t n, const Element& x);
// x^n = x (.) ... (.) x; n = 0 requires a top.
Element npower(const Algebra& alg, std::uint64_t n, const Element& x);

// All idempotents of a finite backend, in element order.
std::vector<Element> idempotents(const Algebra& alg);

// Deterministic probe set: every element on finite backends, a bounded
// canonical sample (plus seeded extras) on lazy ones.
std::vector<Element> probe_elements(const Algebra& alg, const ProbeOptions& opts = {});

struct LawCheck {
  std::string law;
  bool pass = true;
  std::vector<std::string> witness;  // formatted element literals
};

struct AxiomReport {
  std::vector<LawCheck> checks;
  bool exhaustive = false;  // true when every element was inspected
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const LawCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

// Commutative-monoid, lattice, local-MV and idempotent-cover laws.  Finite
// backends are checked exhaustively; lazy backends on the probe set.
AxiomReport check_emv_axioms(const Algebra& alg, const ProbeOptions& opts = {});

// A countable family of elements: an explicit list, or a rule probed up to a
// horizon.  Rules may declare what their tail does; "unbounded support" is
// the designed witness family on the finite-support backend whose support
// union is infinite, so no upper bound (hence no sup) exists there.
class ElementSequence {
public:
  enum class Tail { EventuallyConstant, UnboundedSupport };

  static ElementSequence finite(std::vector<Element> items) {
    ElementSequence s;
    s.items_ = std::move(items);
    s.finite_ = true;
    return s;
  }
  static ElementSequence rule(std::function<Element(std::size_t)> f,
                              Tail tail = Tail::EventuallyConstant) {
    ElementSequence s;
    s.rule_ = std::move(f);
    s.tail_ = tail;
    return s;
  }

  bool is_finite_list() const { return finite_; }
  const std::vector<Element>& items() const { return items_; }
  Element at(std::size_t i) const { return finite_ ? items_.at(i) : rule_(i); }
  Tail tail() const { return tail_; }

private:
  ElementSequence() = default;
  bool finite_ = false;
  std::vector<Element> items_;
  std::function<Element(std::size_t)> rule_;
  Tail tail_ = Tail::EventuallyConstant;
};

struct SupResult {
  enum class Verdict { Exists, NotExists, Undecided };
  Verdict verdict = Verdict::Undecided;
  std::optional<Element> value;
  std::size_t stabilized_at = 0;  // index of the last partial-fold change
  std::string note;
};

// Least upper bound / greatest lower bound of the family.  Explicit lists
// fold exactly; rules are probed to opts.horizon and must stabilize, else
// the verdict is Undecided (or NotExists for a declared unbounded-support
// family still growing at the horizon).
SupResult sup_of(const Algebra& alg, const ElementSequence& seq, const ProbeOptions& opts = {});
SupResult inf_of(const Algebra& alg, const ElementSequence& seq, const ProbeOptions& opts = {});

}  // namespace emv

#pragma once

#include <memory>

#include "emv/algebra.hpp"

namespace emv {

// Finite-support maps N -> {0,...,order}, pointwise truncated addition and
// pointwise lattice order.  No top element.  order = 1 gives the finite
// subsets of N (printed set-style).
class FinSupportAlgebra : public Algebra {
public:
  explicit FinSupportAlgebra(int order);
  static std::shared_ptr<const FinSupportAlgebra> make(int order) {
    return std::make_shared<FinSupportAlgebra>(order);
  }

  int order() const { return order_; }

  // {index: level, ...}; levels default to order (handy for sets).
  Element make_element(const std::vector<std::pair<std::uint32_t, int>>& entries) const;
  Element singleton(std::uint32_t index, int level) const;
  Element from_set(const std::vector<std::uint32_t>& indices) const;  // full level everywhere
  int level_at(const Element& x, std::uint32_t index) const;
  std::vector<std::uint32_t> support(const Element& x) const;

  std::string name() const override;
  bool is_finite() const override { return false; }
  Element zero() const override { return Element::fin_support({}); }
  bool has_top() const override { return false; }
  Element oplus(const Element& x, const Element& y) const override;
  std::optional<Element> try_join(const Element& x, const Element& y) const override;
  std::optional<Element> try_meet(const Element& x, const Element& y) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool is_idempotent(const Element& x) const override;
  std::optional<Element> try_idempotent_cover(const Element& x) const override;
  std::optional<Element> try_lambda(const Element& a, const Element& x) const override;
  std::optional<Element> try_upper_hull(const Element& x) const override;
  std::optional<Element> try_lower_hull(const Element& x) const override;
  std::string format(const Element& x) const override;

private:
  const FsMap& checked(const Element& x) const;
  int order_;
};

// Chang's algebra: Small(0) < Small(1) < ... < Big(1) < Big(0), with
// Small(0) = 0 and Big(0) = top.  Indices are arbitrary-precision.  The
// radical is the set of all Smalls, so the algebra is not semisimple.
class ChangAlgebra : public Algebra {
public:
  static std::shared_ptr<const ChangAlgebra> make() {
    return std::make_shared<ChangAlgebra>();
  }

  std::string name() const override { return "chang"; }
  bool is_finite() const override { return false; }
  Element zero() const override { return Element::small(0); }
  bool has_top() const override { return true; }
  Element top() const override { return Element::big(0); }
  Element oplus(const Element& x, const Element& y) const override;
  std::optional<Element> try_join(const Element& x, const Element& y) const override;
  std::optional<Element> try_meet(const Element& x, const Element& y) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool is_idempotent(const Element& x) const override;
  std::optional<Element> try_idempotent_cover(const Element& x) const override;
  std::optional<Element> try_lambda(const Element& a, const Element& x) const override;
  std::optional<Element> try_upper_hull(const Element& x) const override;
  std::optional<Element> try_lower_hull(const Element& x) const override;
  std::string format(const Element& x) const override;

private:
  const ChangElem& checked(const Element& x) const;
};

}  // namespace emv

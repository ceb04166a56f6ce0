#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emv/element.hpp"

namespace emv {

// Uniform handle over the three backends.  All operations are pure; any
// cached tables are filled eagerly at construction.  Operations on payloads
// of the wrong kind (or out of range) throw std::invalid_argument.
//
// lambda(a, x) is the local complement inside the MV-algebra [0, a]: the
// minimum z <= a with z (+) x = a.  It requires a idempotent and x <= a.
class Algebra {
public:
  virtual ~Algebra() = default;

  virtual std::string name() const = 0;
  virtual bool is_finite() const = 0;
  virtual std::size_t size() const;
  virtual Element element(std::size_t index) const;
  virtual std::size_t index_of(const Element& x) const;

  virtual Element zero() const = 0;
  virtual bool has_top() const = 0;
  virtual Element top() const;

  virtual Element oplus(const Element& x, const Element& y) const = 0;
  virtual std::optional<Element> try_join(const Element& x, const Element& y) const = 0;
  virtual std::optional<Element> try_meet(const Element& x, const Element& y) const = 0;
  Element join(const Element& x, const Element& y) const;
  Element meet(const Element& x, const Element& y) const;
  virtual bool leq(const Element& x, const Element& y) const;

  virtual bool is_idempotent(const Element& x) const;
  // Least idempotent above x (ties on finite tables broken by element index).
  virtual std::optional<Element> try_idempotent_cover(const Element& x) const = 0;
  Element idempotent_cover(const Element& x) const;

  virtual std::optional<Element> try_lambda(const Element& a, const Element& x) const = 0;
  Element lambda(const Element& a, const Element& x) const;

  // Idempotent hulls: least idempotent above x / greatest idempotent below x.
  virtual std::optional<Element> try_upper_hull(const Element& x) const = 0;
  virtual std::optional<Element> try_lower_hull(const Element& x) const = 0;
  Element upper_idempotent_hull(const Element& x) const;
  Element lower_idempotent_hull(const Element& x) const;

  virtual std::string format(const Element& x) const = 0;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Explicit-table backend.  Tables may describe a structure that fails the
// axioms; construction only validates shapes and index ranges, and
// check_emv_axioms reports the defects.  Cells that cannot be determined
// (missing least upper bound, missing minimum for lambda, ...) stay unset and
// the corresponding try_* accessor returns nullopt.
class FiniteAlgebra : public Algebra {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Chain 0 < 1 < ... < n with truncated addition; n = 0 gives the trivial
  // one-element algebra.
  static std::shared_ptr<const FiniteAlgebra> chain(std::size_t n);

  // Componentwise product.  Both factors must pass check_emv_axioms.
  static std::shared_ptr<const FiniteAlgebra> product(
      const std::shared_ptr<const FiniteAlgebra>& a,
      const std::shared_ptr<const FiniteAlgebra>& b);

  // join_table and le_pairs are alternatives: exactly one must be provided.
  // le_pairs is a generating relation; its reflexive-transitive closure is
  // taken, and joins/meets are derived where they exist.
  static std::shared_ptr<const FiniteAlgebra> from_tables(
      std::string name, std::vector<std::string> labels, std::size_t zero,
      std::vector<std::vector<std::size_t>> oplus_table,
      std::optional<std::vector<std::vector<std::size_t>>> join_table,
      std::optional<std::vector<std::pair<std::size_t, std::size_t>>> le_pairs);

  // Subalgebra on a subset of indices; the subset must be closed under
  // (+), join and meet, and contain zero.
  std::shared_ptr<const FiniteAlgebra> restriction(std::vector<std::size_t> indices,
                                                   std::string name) const;
  // [0, a] for idempotent a, as its own algebra (an MV-algebra with top a).
  std::shared_ptr<const FiniteAlgebra> interval(const Element& a) const;

  std::string name() const override { return name_; }
  bool is_finite() const override { return true; }
  std::size_t size() const override { return labels_.size(); }
  Element element(std::size_t index) const override;
  std::size_t index_of(const Element& x) const override;
  Element zero() const override { return Element::table(zero_); }
  bool has_top() const override { return top_.has_value(); }
  Element top() const override;

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

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& idempotent_indices() const { return idems_; }
  std::optional<std::size_t> element_by_label(const std::string& label) const;
  // Indices of the original algebra backing a restriction(), or identity.
  const std::vector<std::size_t>& parent_indices() const { return parent_indices_; }

private:
  FiniteAlgebra() = default;
  void finish();  // derives order, meet, idempotents, covers, hulls, lambda

  std::string name_;
  std::vector<std::string> labels_;
  std::size_t zero_ = 0;
  std::optional<std::size_t> top_;
  std::vector<std::vector<std::size_t>> oplus_;
  std::vector<std::vector<std::size_t>> join_;
  std::vector<std::vector<std::size_t>> meet_;
  std::vector<std::vector<std::size_t>> lambda_;
  std::vector<std::vector<char>> leq_;
  std::vector<char> idem_mask_;
  std::vector<std::size_t> idems_;
  std::vector<std::size_t> cover_;
  std::vector<std::size_t> a0_;
  std::vector<std::size_t> b0_;
  std::vector<std::size_t> parent_indices_;
  bool order_from_le_ = false;
};

}  // namespace emv

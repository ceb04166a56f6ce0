#include "emv/algebra.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "emv/core_ops.hpp"
#include "emv/error.hpp"

namespace emv {

std::size_t Algebra::size() const {
  throw std::invalid_argument(name() + ": size() needs a finite backend");
}

Element Algebra::element(std::size_t) const {
  throw std::invalid_argument(name() + ": element() needs a finite backend");
}

std::size_t Algebra::index_of(const Element&) const {
  throw std::invalid_argument(name() + ": index_of() needs a finite backend");
}

Element Algebra::top() const {
  throw std::invalid_argument(name() + ": algebra has no top element");
}

Element Algebra::join(const Element& x, const Element& y) const {
  auto j = try_join(x, y);
  if (!j) throw std::invalid_argument(name() + ": join undefined (lattice defect)");
  return *j;
}

Element Algebra::meet(const Element& x, const Element& y) const {
  auto m = try_meet(x, y);
  if (!m) throw std::invalid_argument(name() + ": meet undefined (lattice defect)");
  return *m;
}

bool Algebra::leq(const Element& x, const Element& y) const {
  auto j = try_join(x, y);
  return j && *j == y;
}

bool Algebra::is_idempotent(const Element& x) const { return oplus(x, x) == x; }

Element Algebra::idempotent_cover(const Element& x) const {
  auto c = try_idempotent_cover(x);
  if (!c) throw std::invalid_argument(name() + ": no idempotent above element");
  return *c;
}

Element Algebra::lambda(const Element& a, const Element& x) const {
  auto l = try_lambda(a, x);
  if (!l)
    throw std::invalid_argument(name() +
                                ": lambda undefined (no minimum complement in interval)");
  return *l;
}

Element Algebra::upper_idempotent_hull(const Element& x) const {
  auto h = try_upper_hull(x);
  if (!h) throw std::invalid_argument(name() + ": upper idempotent hull does not stabilize");
  return *h;
}

Element Algebra::lower_idempotent_hull(const Element& x) const {
  auto h = try_lower_hull(x);
  if (!h) throw std::invalid_argument(name() + ": lower idempotent hull does not stabilize");
  return *h;
}

namespace {

std::size_t checked_index(const FiniteAlgebra& alg, const Element& x) {
  if (x.kind() != Element::Kind::Table)
    throw std::invalid_argument(alg.name() + ": element belongs to another backend");
  std::size_t i = x.table_index();
  if (i >= alg.size()) throw std::invalid_argument(alg.name() + ": element index out of range");
  return i;
}

}  // namespace

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::chain(std::size_t n) {
  auto alg = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
  alg->name_ = "chain(" + std::to_string(n) + ")";
  for (std::size_t i = 0; i <= n; ++i) alg->labels_.push_back(std::to_string(i));
  std::size_t m = n + 1;
  alg->zero_ = 0;
  alg->oplus_.assign(m, std::vector<std::size_t>(m));
  alg->join_.assign(m, std::vector<std::size_t>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      alg->oplus_[i][j] = std::min(i + j, n);
      alg->join_[i][j] = std::max(i, j);
    }
  alg->finish();
  return alg;
}

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::product(
    const std::shared_ptr<const FiniteAlgebra>& a,
    const std::shared_ptr<const FiniteAlgebra>& b) {
  if (!a || !b) throw std::invalid_argument("product: null factor");
  for (const auto& factor : {a, b}) {
    AxiomReport r = check_emv_axioms(*factor);
    if (!r.ok())
      throw std::invalid_argument("product: factor " + factor->name() +
                                  " fails axiom check (" + r.first_failure()->law + ")");
  }
  auto alg = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
  alg->name_ = "product(" + a->name() + "," + b->name() + ")";
  std::size_t na = a->size(), nb = b->size(), m = na * nb;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      alg->labels_.push_back("(" + a->labels()[i] + "," + b->labels()[j] + ")");
  alg->zero_ = a->zero().table_index() * nb + b->zero().table_index();
  alg->oplus_.assign(m, std::vector<std::size_t>(m));
  alg->join_.assign(m, std::vector<std::size_t>(m));
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      std::size_t xa = x / nb, xb = x % nb, ya = y / nb, yb = y % nb;
      alg->oplus_[x][y] =
          a->oplus(Element::table(xa), Element::table(ya)).table_index() * nb +
          b->oplus(Element::table(xb), Element::table(yb)).table_index();
      alg->join_[x][y] = a->join(Element::table(xa), Element::table(ya)).table_index() * nb +
                         b->join(Element::table(xb), Element::table(yb)).table_index();
    }
  alg->finish();
  return alg;
}

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::from_tables(
    std::string name, std::vector<std::string> labels, std::size_t zero,
    std::vector<std::vector<std::size_t>> oplus_table,
    std::optional<std::vector<std::vector<std::size_t>>> join_table,
    std::optional<std::vector<std::pair<std::size_t, std::size_t>>> le_pairs) {
  std::size_t m = labels.size();
  if (m == 0) throw std::invalid_argument("from_tables: empty carrier");
  if (zero >= m) throw std::invalid_argument("from_tables: zero index out of range");
  if (join_table.has_value() == le_pairs.has_value())
    throw std::invalid_argument("from_tables: exactly one of join table / le pairs required");
  auto check_matrix = [m](const std::vector<std::vector<std::size_t>>& t, const char* what) {
    if (t.size() != m) throw std::invalid_argument(std::string("from_tables: ") + what +
                                                   " table has wrong row count");
    for (const auto& row : t) {
      if (row.size() != m)
        throw std::invalid_argument(std::string("from_tables: ") + what +
                                    " table has a row of wrong length");
      for (std::size_t v : row)
        if (v >= m)
          throw std::invalid_argument(std::string("from_tables: ") + what +
                                      " table entry out of range");
    }
  };
  check_matrix(oplus_table, "oplus");
  auto alg = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
  alg->name_ = std::move(name);
  alg->labels_ = std::move(labels);
  alg->zero_ = zero;
  alg->oplus_ = std::move(oplus_table);
  if (join_table) {
    check_matrix(*join_table, "join");
    alg->join_ = std::move(*join_table);
  } else {
    for (const auto& [lo, hi] : *le_pairs)
      if (lo >= m || hi >= m) throw std::invalid_argument("from_tables: le pair out of range");
    alg->order_from_le_ = true;
    alg->leq_.assign(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i) alg->leq_[i][i] = 1;
    for (const auto& [lo, hi] : *le_pairs) alg->leq_[lo][hi] = 1;
    // Reflexive-transitive closure (Warshall).
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < m; ++i)
        if (alg->leq_[i][k])
          for (std::size_t j = 0; j < m; ++j)
            if (alg->leq_[k][j]) alg->leq_[i][j] = 1;
  }
  alg->finish();
  return alg;
}

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::restriction(
    std::vector<std::size_t> indices, std::string name) const {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::size_t m = size();
  std::vector<std::size_t> to_new(m, npos);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= m) throw std::invalid_argument("restriction: index out of range");
    to_new[indices[k]] = k;
  }
  if (to_new[zero_] == npos) throw std::invalid_argument("restriction: subset misses zero");
  auto alg = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
  alg->name_ = std::move(name);
  std::size_t k = indices.size();
  alg->zero_ = to_new[zero_];
  alg->oplus_.assign(k, std::vector<std::size_t>(k));
  alg->join_.assign(k, std::vector<std::size_t>(k));
  for (std::size_t i = 0; i < k; ++i) {
    alg->labels_.push_back(labels_[indices[i]]);
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t s = oplus_[indices[i]][indices[j]];
      std::size_t v = join_[indices[i]][indices[j]];
      if (to_new[s] == npos || v == npos || to_new[v] == npos)
        throw std::invalid_argument("restriction: subset not closed under operations");
      alg->oplus_[i][j] = to_new[s];
      alg->join_[i][j] = to_new[v];
      std::size_t w = meet_[indices[i]][indices[j]];
      if (w == npos || to_new[w] == npos)
        throw std::invalid_argument("restriction: subset not closed under meet");
    }
  }
  for (std::size_t idx : indices)
    alg->parent_indices_.push_back(parent_indices_.empty() ? idx : parent_indices_[idx]);
  alg->finish();
  return alg;
}

std::shared_ptr<const FiniteAlgebra> FiniteAlgebra::interval(const Element& a) const {
  std::size_t ai = checked_index(*this, a);
  if (!idem_mask_[ai])
    throw std::invalid_argument(name_ + ": interval bound must be idempotent");
  std::vector<std::size_t> below;
  for (std::size_t x = 0; x < size(); ++x)
    if (leq_[x][ai]) below.push_back(x);
  return restriction(below, name_ + "[0," + labels_[ai] + "]");
}

Element FiniteAlgebra::element(std::size_t index) const {
  if (index >= size()) throw std::invalid_argument(name_ + ": element index out of range");
  return Element::table(index);
}

std::size_t FiniteAlgebra::index_of(const Element& x) const { return checked_index(*this, x); }

Element FiniteAlgebra::top() const {
  if (!top_) throw std::invalid_argument(name_ + ": algebra has no top element");
  return Element::table(*top_);
}

Element FiniteAlgebra::oplus(const Element& x, const Element& y) const {
  return Element::table(oplus_[checked_index(*this, x)][checked_index(*this, y)]);
}

std::optional<Element> FiniteAlgebra::try_join(const Element& x, const Element& y) const {
  std::size_t v = join_[checked_index(*this, x)][checked_index(*this, y)];
  if (v == npos) return std::nullopt;
  return Element::table(v);
}

std::optional<Element> FiniteAlgebra::try_meet(const Element& x, const Element& y) const {
  std::size_t v = meet_[checked_index(*this, x)][checked_index(*this, y)];
  if (v == npos) return std::nullopt;
  return Element::table(v);
}

bool FiniteAlgebra::leq(const Element& x, const Element& y) const {
  return leq_[checked_index(*this, x)][checked_index(*this, y)] != 0;
}

bool FiniteAlgebra::is_idempotent(const Element& x) const {
  return idem_mask_[checked_index(*this, x)] != 0;
}

std::optional<Element> FiniteAlgebra::try_idempotent_cover(const Element& x) const {
  std::size_t c = cover_[checked_index(*this, x)];
  if (c == npos) return std::nullopt;
  return Element::table(c);
}

std::optional<Element> FiniteAlgebra::try_lambda(const Element& a, const Element& x) const {
  std::size_t ai = checked_index(*this, a), xi = checked_index(*this, x);
  if (!idem_mask_[ai]) throw std::invalid_argument(name_ + ": lambda bound must be idempotent");
  if (!leq_[xi][ai])
    throw std::invalid_argument(name_ + ": lambda argument must lie below the bound");
  std::size_t v = lambda_[ai][xi];
  if (v == npos) return std::nullopt;
  return Element::table(v);
}

std::optional<Element> FiniteAlgebra::try_upper_hull(const Element& x) const {
  std::size_t v = a0_[checked_index(*this, x)];
  if (v == npos) return std::nullopt;
  return Element::table(v);
}

std::optional<Element> FiniteAlgebra::try_lower_hull(const Element& x) const {
  std::size_t v = b0_[checked_index(*this, x)];
  if (v == npos) return std::nullopt;
  return Element::table(v);
}

std::string FiniteAlgebra::format(const Element& x) const {
  return labels_[checked_index(*this, x)];
}

std::optional<std::size_t> FiniteAlgebra::element_by_label(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

void FiniteAlgebra::finish() {
  std::size_t m = labels_.size();
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < m; ++i)
      if (!seen.emplace(labels_[i], i).second)
        throw std::invalid_argument("finite algebra: duplicate element label '" + labels_[i] + "'");
  }
  if (parent_indices_.empty())
    for (std::size_t i = 0; i < m; ++i) parent_indices_.push_back(i);

  if (order_from_le_) {
    // Derive joins from the order: unique least common upper bound, if any.
    join_.assign(m, std::vector<std::size_t>(m, npos));
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        for (std::size_t z = 0; z < m; ++z) {
          if (!leq_[x][z] || !leq_[y][z]) continue;
          bool least = true;
          for (std::size_t w = 0; w < m && least; ++w)
            if (leq_[x][w] && leq_[y][w] && !leq_[z][w]) least = false;
          if (least) {
            join_[x][y] = z;
            break;
          }
        }
      }
  } else {
    leq_.assign(m, std::vector<char>(m, 0));
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) leq_[x][y] = (join_[x][y] == y);
  }

  meet_.assign(m, std::vector<std::size_t>(m, npos));
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t z = 0; z < m; ++z) {
        if (!leq_[z][x] || !leq_[z][y]) continue;
        bool greatest = true;
        for (std::size_t w = 0; w < m && greatest; ++w)
          if (leq_[w][x] && leq_[w][y] && !leq_[w][z]) greatest = false;
        if (greatest) {
          meet_[x][y] = z;
          break;
        }
      }

  idem_mask_.assign(m, 0);
  for (std::size_t x = 0; x < m; ++x)
    if (oplus_[x][x] == x) {
      idem_mask_[x] = 1;
      idems_.push_back(x);
    }

  // Least element of {idempotent a : x <= a}; minimality under the order,
  // ties broken by index.
  cover_.assign(m, npos);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t a : idems_) {
      if (!leq_[x][a]) continue;
      bool minimal = true;
      for (std::size_t b : idems_)
        if (b != a && leq_[x][b] && leq_[b][a] && !leq_[a][b]) {
          minimal = false;
          break;
        }
      if (minimal) {
        cover_[x] = a;
        break;
      }
    }
  }

  std::vector<std::size_t> tops;
  for (std::size_t t = 0; t < m; ++t) {
    bool all = true;
    for (std::size_t x = 0; x < m && all; ++x) all = leq_[x][t];
    if (all) tops.push_back(t);
  }
  if (!tops.empty()) top_ = tops.front();

  lambda_.assign(m, std::vector<std::size_t>(m, npos));
  for (std::size_t a : idems_) {
    for (std::size_t x = 0; x < m; ++x) {
      if (!leq_[x][a]) continue;
      std::vector<std::size_t> sols;
      for (std::size_t z = 0; z < m; ++z)
        if (leq_[z][a] && oplus_[z][x] == a) sols.push_back(z);
      for (std::size_t z : sols) {
        bool least = true;
        for (std::size_t w : sols)
          if (!leq_[z][w]) {
            least = false;
            break;
          }
        if (least) {
          lambda_[a][x] = z;
          break;
        }
      }
    }
  }

  // Hulls by iterating n.x and x^n to a fixed point.
  a0_.assign(m, npos);
  for (std::size_t x = 0; x < m; ++x) {
    std::size_t y = x;
    for (std::size_t step = 0; step <= m; ++step) {
      std::size_t next = oplus_[y][x];
      if (next == y) {
        a0_[x] = y;
        break;
      }
      y = next;
    }
  }
  b0_.assign(m, npos);
  for (std::size_t x = 0; x < m; ++x) {
    std::size_t y = x;
    for (std::size_t step = 0; step <= m; ++step) {
      // y (.) x inside [0, c] for the cover c of x v y, all in raw indices.
      std::size_t j = join_[y][x];
      if (j == npos) break;
      std::size_t c = cover_[j];
      if (c == npos) break;
      std::size_t ly = lambda_[c][y], lx = lambda_[c][x];
      if (ly == npos || lx == npos) break;
      std::size_t next = lambda_[c][oplus_[ly][lx]];
      if (next == npos) break;
      if (next == y) {
        b0_[x] = y;
        break;
      }
      y = next;
    }
  }
}

}  // namespace emv

#include "emv/backends.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace emv {

FinSupportAlgebra::FinSupportAlgebra(int order) : order_(order) {
  if (order < 1) throw std::invalid_argument("finsupport: chain order must be >= 1");
}

std::string FinSupportAlgebra::name() const {
  if (order_ == 1) return "finite_sets";
  return "finsupport(chain(" + std::to_string(order_) + "))";
}

const FsMap& FinSupportAlgebra::checked(const Element& x) const {
  if (x.kind() != Element::Kind::FinSupport)
    throw std::invalid_argument(name() + ": element belongs to another backend");
  const FsMap& m = x.fs();
  for (const auto& e : m)
    if (e.level > order_)
      throw std::invalid_argument(name() + ": level exceeds chain order");
  return m;
}

Element FinSupportAlgebra::make_element(
    const std::vector<std::pair<std::uint32_t, int>>& entries) const {
  FsMap m;
  for (const auto& [i, l] : entries) m.push_back({i, l});
  std::sort(m.begin(), m.end(), [](const FsEntry& a, const FsEntry& b) { return a.index < b.index; });
  Element e = Element::fin_support(std::move(m));
  checked(e);
  return e;
}

Element FinSupportAlgebra::singleton(std::uint32_t index, int level) const {
  return make_element({{index, level}});
}

Element FinSupportAlgebra::from_set(const std::vector<std::uint32_t>& indices) const {
  std::vector<std::uint32_t> uniq = indices;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<std::pair<std::uint32_t, int>> entries;
  for (auto i : uniq) entries.emplace_back(i, order_);
  return make_element(entries);
}

int FinSupportAlgebra::level_at(const Element& x, std::uint32_t index) const {
  for (const auto& e : checked(x))
    if (e.index == index) return e.level;
  return 0;
}

std::vector<std::uint32_t> FinSupportAlgebra::support(const Element& x) const {
  std::vector<std::uint32_t> s;
  for (const auto& e : checked(x)) s.push_back(e.index);
  return s;
}

namespace {

// Merge two sorted finite-support maps with a pointwise combiner.
template <typename F>
Element pointwise(const FsMap& a, const FsMap& b, F&& combine) {
  FsMap out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    std::uint32_t idx;
    int la = 0, lb = 0;
    if (i < a.size() && (j >= b.size() || a[i].index <= b[j].index)) idx = a[i].index;
    else idx = b[j].index;
    if (i < a.size() && a[i].index == idx) la = a[i++].level;
    if (j < b.size() && b[j].index == idx) lb = b[j++].level;
    int l = combine(la, lb);
    if (l > 0) out.push_back({idx, l});
  }
  return Element::fin_support(std::move(out));
}

}  // namespace

Element FinSupportAlgebra::oplus(const Element& x, const Element& y) const {
  int n = order_;
  return pointwise(checked(x), checked(y), [n](int a, int b) { return std::min(a + b, n); });
}

std::optional<Element> FinSupportAlgebra::try_join(const Element& x, const Element& y) const {
  return pointwise(checked(x), checked(y), [](int a, int b) { return std::max(a, b); });
}

std::optional<Element> FinSupportAlgebra::try_meet(const Element& x, const Element& y) const {
  return pointwise(checked(x), checked(y), [](int a, int b) { return std::min(a, b); });
}

bool FinSupportAlgebra::leq(const Element& x, const Element& y) const {
  const FsMap& a = checked(x);
  for (const auto& e : a)
    if (e.level > level_at(y, e.index)) return false;
  return true;
}

bool FinSupportAlgebra::is_idempotent(const Element& x) const {
  for (const auto& e : checked(x))
    if (e.level != order_) return false;
  return true;
}

std::optional<Element> FinSupportAlgebra::try_idempotent_cover(const Element& x) const {
  FsMap out;
  for (const auto& e : checked(x)) out.push_back({e.index, order_});
  return Element::fin_support(std::move(out));
}

std::optional<Element> FinSupportAlgebra::try_lambda(const Element& a, const Element& x) const {
  if (!is_idempotent(a))
    throw std::invalid_argument(name() + ": lambda bound must be idempotent");
  if (!leq(x, a))
    throw std::invalid_argument(name() + ": lambda argument must lie below the bound");
  FsMap out;
  for (const auto& e : checked(a)) {
    int l = order_ - level_at(x, e.index);
    if (l > 0) out.push_back({e.index, l});
  }
  return Element::fin_support(std::move(out));
}

std::optional<Element> FinSupportAlgebra::try_upper_hull(const Element& x) const {
  return try_idempotent_cover(x);
}

std::optional<Element> FinSupportAlgebra::try_lower_hull(const Element& x) const {
  FsMap out;
  for (const auto& e : checked(x))
    if (e.level == order_) out.push_back({e.index, order_});
  return Element::fin_support(std::move(out));
}

std::string FinSupportAlgebra::format(const Element& x) const {
  const FsMap& m = checked(x);
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& e : m) {
    if (!first) os << ",";
    first = false;
    os << e.index;
    if (order_ != 1) os << ":" << e.level;
  }
  os << "}";
  return os.str();
}

const ChangElem& ChangAlgebra::checked(const Element& x) const {
  if (x.kind() != Element::Kind::Chang)
    throw std::invalid_argument(name() + ": element belongs to another backend");
  return x.chang();
}

Element ChangAlgebra::oplus(const Element& x, const Element& y) const {
  const ChangElem& a = checked(x);
  const ChangElem& b = checked(y);
  if (!a.big && !b.big) return Element::small(a.n + b.n);
  if (a.big && b.big) return Element::big(0);
  const ChangElem& small = a.big ? b : a;
  const ChangElem& big = a.big ? a : b;
  BigInt d = big.n - small.n;
  return Element::big(d > 0 ? d : BigInt(0));
}

bool ChangAlgebra::leq(const Element& x, const Element& y) const {
  const ChangElem& a = checked(x);
  const ChangElem& b = checked(y);
  if (a.big != b.big) return b.big;
  if (!a.big) return a.n <= b.n;
  return a.n >= b.n;
}

std::optional<Element> ChangAlgebra::try_join(const Element& x, const Element& y) const {
  return leq(x, y) ? y : x;
}

std::optional<Element> ChangAlgebra::try_meet(const Element& x, const Element& y) const {
  return leq(x, y) ? x : y;
}

bool ChangAlgebra::is_idempotent(const Element& x) const {
  const ChangElem& a = checked(x);
  return a.n == 0;  // Small(0) = zero, Big(0) = top
}

std::optional<Element> ChangAlgebra::try_idempotent_cover(const Element& x) const {
  const ChangElem& a = checked(x);
  if (!a.big && a.n == 0) return zero();
  return top();
}

std::optional<Element> ChangAlgebra::try_lambda(const Element& a, const Element& x) const {
  if (!is_idempotent(a))
    throw std::invalid_argument(name() + ": lambda bound must be idempotent");
  if (!leq(x, a))
    throw std::invalid_argument(name() + ": lambda argument must lie below the bound");
  const ChangElem& bound = checked(a);
  const ChangElem& v = checked(x);
  if (!bound.big) return zero();  // [0, 0] is trivial
  return v.big ? Element::small(v.n) : Element::big(v.n);
}

std::optional<Element> ChangAlgebra::try_upper_hull(const Element& x) const {
  const ChangElem& a = checked(x);
  if (!a.big && a.n == 0) return zero();
  return top();
}

std::optional<Element> ChangAlgebra::try_lower_hull(const Element& x) const {
  const ChangElem& a = checked(x);
  if (a.big && a.n == 0) return top();
  return zero();
}

std::string ChangAlgebra::format(const Element& x) const {
  const ChangElem& a = checked(x);
  std::ostringstream os;
  os << (a.big ? "Big(" : "Small(") << a.n << ")";
  return os.str();
}

}  // namespace emv

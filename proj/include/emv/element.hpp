#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace emv {

using BigInt = boost::multiprecision::cpp_int;

// One point of a finite-support map: coordinate -> chain level (level >= 1;
// absent coordinates sit at 0).
struct FsEntry {
  std::uint32_t index;
  int level;
  friend bool operator==(const FsEntry& a, const FsEntry& b) {
    return a.index == b.index && a.level == b.level;
  }
};
using FsMap = std::vector<FsEntry>;  // sorted by index, no zero levels

struct ChangElem {
  bool big = false;
  BigInt n = 0;
  friend bool operator==(const ChangElem& a, const ChangElem& b) {
    return a.big == b.big && a.n == b.n;
  }
};

// Value handle for an element of some algebra.  The payload depends on the
// backend that produced it; operations always go through the algebra handle,
// which validates the payload kind.
class Element {
public:
  enum class Kind { Table, FinSupport, Chang };

  Element() : v_(std::size_t{0}) {}

  static Element table(std::size_t index) { return Element(index); }
  static Element fin_support(FsMap entries);
  static Element small(BigInt n);
  static Element big(BigInt n);

  Kind kind() const {
    switch (v_.index()) {
      case 0: return Kind::Table;
      case 1: return Kind::FinSupport;
      default: return Kind::Chang;
    }
  }
  std::size_t table_index() const { return expect<std::size_t>("table element"); }
  const FsMap& fs() const { return expect<FsMap>("finite-support element"); }
  const ChangElem& chang() const { return expect<ChangElem>("Chang element"); }

  friend bool operator==(const Element& a, const Element& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

  // Deterministic total order used for canonical report listings.
  static bool canonical_less(const Element& a, const Element& b);

private:
  explicit Element(std::variant<std::size_t, FsMap, ChangElem> v) : v_(std::move(v)) {}
  template <typename T>
  const T& expect(const char* what) const {
    if (const T* p = std::get_if<T>(&v_)) return *p;
    throw std::invalid_argument(std::string("Element: expected ") + what);
  }
  std::variant<std::size_t, FsMap, ChangElem> v_;
};

inline Element Element::fin_support(FsMap entries) {
  FsMap clean;
  for (const auto& e : entries) {
    if (e.level < 0) throw std::invalid_argument("Element: negative level");
    if (e.level == 0) continue;
    clean.push_back(e);
  }
  for (std::size_t i = 1; i < clean.size(); ++i)
    if (clean[i - 1].index >= clean[i].index)
      throw std::invalid_argument("Element: finite-support entries must be strictly increasing");
  return Element(std::variant<std::size_t, FsMap, ChangElem>(std::in_place_index<1>, std::move(clean)));
}

inline Element Element::small(BigInt n) {
  if (n < 0) throw std::invalid_argument("Element: Small index must be >= 0");
  return Element(std::variant<std::size_t, FsMap, ChangElem>(std::in_place_index<2>, ChangElem{false, std::move(n)}));
}

inline Element Element::big(BigInt n) {
  if (n < 0) throw std::invalid_argument("Element: Big index must be >= 0");
  return Element(std::variant<std::size_t, FsMap, ChangElem>(std::in_place_index<2>, ChangElem{true, std::move(n)}));
}

inline bool Element::canonical_less(const Element& a, const Element& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
  switch (a.v_.index()) {
    case 0:
      return std::get<0>(a.v_) < std::get<0>(b.v_);
    case 1: {
      const FsMap& x = std::get<1>(a.v_);
      const FsMap& y = std::get<1>(b.v_);
      if (x.size() != y.size()) return x.size() < y.size();
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].index != y[i].index) return x[i].index < y[i].index;
        if (x[i].level != y[i].level) return x[i].level < y[i].level;
      }
      return false;
    }
    default: {
      // Chang's natural (total) order: Smalls ascending, then Bigs descending.
      const ChangElem& x = std::get<2>(a.v_);
      const ChangElem& y = std::get<2>(b.v_);
      if (x.big != y.big) return !x.big;
      if (!x.big) return x.n < y.n;
      return x.n > y.n;
    }
  }
}

}  // namespace emv

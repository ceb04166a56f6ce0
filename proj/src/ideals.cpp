#include "emv/ideals.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "emv/backends.hpp"
#include "emv/error.hpp"

namespace emv {
namespace {

using Mask = std::uint64_t;

Mask bit(std::size_t i) { return Mask{1} << i; }

const FinSupportAlgebra* as_fin_support(const Algebra& alg) {
  return dynamic_cast<const FinSupportAlgebra*>(&alg);
}
const ChangAlgebra* as_chang(const Algebra& alg) {
  return dynamic_cast<const ChangAlgebra*>(&alg);
}

// Cached index-level op tables for one finite backend; closures work on
// uint64 masks, so 64 elements is the ceiling.
struct Tables {
  std::size_t n = 0;
  std::size_t zero = 0;
  std::size_t top = 0;
  std::vector<std::size_t> oplus, odot;
  std::vector<char> le;

  Tables(const Algebra& alg, const char* who) {
    if (!alg.is_finite())
      throw std::invalid_argument(std::string(who) + ": needs a finite backend");
    n = alg.size();
    if (n > 64) throw std::invalid_argument(std::string(who) + ": more than 64 elements");
    zero = alg.index_of(alg.zero());
    top = alg.index_of(alg.top());
    oplus.resize(n * n);
    odot.resize(n * n);
    le.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Element x = alg.element(i), y = alg.element(j);
        oplus[i * n + j] = alg.index_of(alg.oplus(x, y));
        odot[i * n + j] = alg.index_of(emv::odot(alg, x, y));
        le[i * n + j] = alg.leq(x, y);
      }
  }
  std::size_t op(std::size_t i, std::size_t j) const { return oplus[i * n + j]; }
  std::size_t od(std::size_t i, std::size_t j) const { return odot[i * n + j]; }
  bool lt(std::size_t i, std::size_t j) const { return le[i * n + j] != 0; }
  Mask full() const { return n == 64 ? ~Mask{0} : bit(n) - 1; }
};

Mask ideal_closure(const Tables& t, Mask m) {
  m |= bit(t.zero);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < t.n; ++i) {
      if (!(m & bit(i))) continue;
      for (std::size_t j = 0; j < t.n; ++j) {
        if (t.lt(j, i) && !(m & bit(j))) { m |= bit(j); changed = true; }
        if ((m & bit(j)) && !(m & bit(t.op(i, j)))) { m |= bit(t.op(i, j)); changed = true; }
      }
    }
  }
  return m;
}

Mask filter_closure(const Tables& t, Mask m) {
  m |= bit(t.top);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < t.n; ++i) {
      if (!(m & bit(i))) continue;
      for (std::size_t j = 0; j < t.n; ++j) {
        if (t.lt(i, j) && !(m & bit(j))) { m |= bit(j); changed = true; }
        if ((m & bit(j)) && !(m & bit(t.od(i, j)))) { m |= bit(t.od(i, j)); changed = true; }
      }
    }
  }
  return m;
}

// Every closed set is reachable from the least one by adding one generator at
// a time, so a breadth-first walk over closures finds them all without
// touching the powerset.
std::vector<Mask> closed_sets(const Tables& t, bool filters) {
  Mask start = filters ? filter_closure(t, 0) : ideal_closure(t, 0);
  std::set<Mask> seen{start};
  std::deque<Mask> work{start};
  while (!work.empty()) {
    Mask m = work.front();
    work.pop_front();
    for (std::size_t e = 0; e < t.n; ++e) {
      if (m & bit(e)) continue;
      Mask c = filters ? filter_closure(t, m | bit(e)) : ideal_closure(t, m | bit(e));
      if (seen.insert(c).second) work.push_back(c);
    }
  }
  std::vector<Mask> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](Mask a, Mask b) {
    int ca = __builtin_popcountll(a), cb = __builtin_popcountll(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  return out;
}

std::vector<std::size_t> mask_members(Mask m, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (m & bit(i)) out.push_back(i);
  return out;
}

bool mask_maximal_ideal(const Tables& t, Mask m) {
  if (m == t.full()) return false;
  for (std::size_t e = 0; e < t.n; ++e)
    if (!(m & bit(e)) && ideal_closure(t, m | bit(e)) != t.full()) return false;
  return true;
}

Ideal explicit_ideal(const Tables& t, Mask m) {
  Ideal id;
  id.kind = Ideal::Kind::Explicit;
  id.members = mask_members(m, t.n);
  id.proper = m != t.full();
  id.maximal = mask_maximal_ideal(t, m);
  return id;
}

Ideal make_zero_ideal() {
  Ideal id;
  id.kind = Ideal::Kind::Zero;
  id.proper = true;
  return id;
}

Ideal make_coordinate_ideal(std::uint32_t i) {
  Ideal id;
  id.kind = Ideal::Kind::Coordinate;
  id.coordinate = i;
  id.proper = true;
  id.maximal = true;
  return id;
}

Ideal make_radical_ideal() {
  Ideal id;
  id.kind = Ideal::Kind::Radical;
  id.proper = true;
  id.maximal = true;
  return id;
}

Ideal make_full_ideal() {
  Ideal id;
  id.kind = Ideal::Kind::Full;
  return id;
}

// x is radical iff every multiple n.x stays below lambda_a(x), a the cover.
// The multiples are increasing, so on backends where they stabilize the test
// is a finite loop; a non-stabilizing backend must be handled symbolically
// before calling this.
bool formula_holds(const Algebra& alg, const Element& x, std::size_t max_steps) {
  Element a = alg.idempotent_cover(x);
  Element lam = alg.lambda(a, x);
  Element y = x;
  for (std::size_t s = 0; s <= max_steps; ++s) {
    if (!alg.leq(y, lam)) return false;
    Element y2 = alg.oplus(y, x);
    if (y2 == y) return true;
    y = y2;
  }
  throw ConsistencyError("radical: multiples of " + alg.format(x) +
                         " did not stabilize within the step bound");
}

}  // namespace

bool Ideal::contains(const Algebra& alg, const Element& x) const {
  switch (kind) {
    case Kind::Explicit:
      return std::binary_search(members.begin(), members.end(), alg.index_of(x));
    case Kind::Zero:
      return x == alg.zero();
    case Kind::Coordinate: {
      const auto* fs = as_fin_support(alg);
      if (!fs) throw std::invalid_argument("coordinate ideal needs the finite-support backend");
      return fs->level_at(x, coordinate) == 0;
    }
    case Kind::Radical:
      return !x.chang().big;
    case Kind::Full:
      return true;
    case Kind::DownSet: {
      const auto* fs = as_fin_support(alg);
      if (!fs || !generator)
        throw std::invalid_argument("down-set ideal needs the finite-support backend");
      auto sx = fs->support(x);
      auto sg = fs->support(*generator);
      return std::includes(sg.begin(), sg.end(), sx.begin(), sx.end());
    }
  }
  throw std::logic_error("unreachable ideal kind");
}

std::string Ideal::describe(const Algebra& alg) const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Explicit: {
      os << "{";
      for (std::size_t k = 0; k < members.size(); ++k)
        os << (k ? "," : "") << alg.format(alg.element(members[k]));
      os << "}";
      break;
    }
    case Kind::Zero:
      os << "{" << alg.format(alg.zero()) << "}";
      break;
    case Kind::Coordinate:
      os << "{x : x(" << coordinate << ") = 0}";
      break;
    case Kind::Radical:
      os << "radical (all Small elements)";
      break;
    case Kind::Full:
      os << "all of " << alg.name();
      break;
    case Kind::DownSet:
      os << "{x : supp(x) within supp(" << alg.format(*generator) << ")}";
      break;
  }
  return os.str();
}

bool Filter::contains(const Algebra& alg, const Element& x) const {
  switch (kind) {
    case Kind::Explicit:
      return std::binary_search(members.begin(), members.end(), alg.index_of(x));
    case Kind::CoordinateFull: {
      const auto* fs = as_fin_support(alg);
      if (!fs) throw std::invalid_argument("coordinate filter needs the finite-support backend");
      return fs->level_at(x, coordinate) == fs->order();
    }
    case Kind::Bigs:
      return x.chang().big;
    case Kind::Full:
      return true;
  }
  throw std::logic_error("unreachable filter kind");
}

std::string Filter::describe(const Algebra& alg) const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Explicit: {
      os << "{";
      for (std::size_t k = 0; k < members.size(); ++k)
        os << (k ? "," : "") << alg.format(alg.element(members[k]));
      os << "}";
      break;
    }
    case Kind::CoordinateFull: {
      const auto* fs = as_fin_support(alg);
      os << "{x : x(" << coordinate << ") = " << (fs ? fs->order() : 0) << "}";
      break;
    }
    case Kind::Bigs:
      os << "all Big elements";
      break;
    case Kind::Full:
      os << "all of " << alg.name();
      break;
  }
  return os.str();
}

Ideal generated_ideal(const Algebra& alg, const std::vector<Element>& seed) {
  if (const auto* fs = as_fin_support(alg)) {
    std::vector<std::uint32_t> coords;
    for (const Element& x : seed) {
      auto s = fs->support(x);
      coords.insert(coords.end(), s.begin(), s.end());
    }
    if (coords.empty()) return make_zero_ideal();
    Ideal id;
    id.kind = Ideal::Kind::DownSet;
    id.generator = fs->from_set(coords);
    id.proper = true;
    return id;
  }
  if (as_chang(alg)) {
    bool any_big = false, any_nonzero = false;
    for (const Element& x : seed) {
      const ChangElem& c = x.chang();
      if (c.big) any_big = true;
      if (c.big || c.n != 0) any_nonzero = true;
    }
    if (any_big) return make_full_ideal();
    if (any_nonzero) return make_radical_ideal();
    return make_zero_ideal();
  }
  Tables t(alg, "generated_ideal");
  Mask m = 0;
  for (const Element& x : seed) m |= bit(alg.index_of(x));
  return explicit_ideal(t, ideal_closure(t, m));
}

IdealList enumerate_ideals(const Algebra& alg, const ProbeOptions& opts) {
  IdealList out;
  if (const auto* fs = as_fin_support(alg)) {
    out.symbolic = true;
    out.note =
        "one ideal for each coordinate set S, namely {x : supp(x) within S}; "
        "listed: zero, two finite down-sets, the coordinate complements "
        "(the maximal ideals) up to the support bound, and the whole algebra";
    out.ideals.push_back(make_zero_ideal());
    for (const auto& gen : {std::vector<std::uint32_t>{0}, std::vector<std::uint32_t>{0, 1}}) {
      Ideal id;
      id.kind = Ideal::Kind::DownSet;
      id.generator = fs->from_set(gen);
      id.proper = true;
      out.ideals.push_back(id);
    }
    for (std::uint32_t i = 0; i < opts.support_bound; ++i)
      out.ideals.push_back(make_coordinate_ideal(i));
    out.ideals.push_back(make_full_ideal());
    return out;
  }
  if (as_chang(alg)) {
    out.symbolic = true;
    out.note = "exactly three ideals: zero, the radical of all Smalls, the whole algebra";
    out.ideals.push_back(make_zero_ideal());
    out.ideals.push_back(make_radical_ideal());
    out.ideals.push_back(make_full_ideal());
    return out;
  }
  Tables t(alg, "enumerate_ideals");
  for (Mask m : closed_sets(t, false)) out.ideals.push_back(explicit_ideal(t, m));
  return out;
}

IdealList maximal_ideals(const Algebra& alg, const ProbeOptions& opts) {
  IdealList out;
  if (as_fin_support(alg)) {
    out.symbolic = true;
    out.note = "one maximal ideal per coordinate; listed up to the support bound";
    for (std::uint32_t i = 0; i < opts.support_bound; ++i)
      out.ideals.push_back(make_coordinate_ideal(i));
    return out;
  }
  if (as_chang(alg)) {
    out.symbolic = true;
    out.note = "the radical is the unique maximal ideal";
    out.ideals.push_back(make_radical_ideal());
    return out;
  }
  IdealList all = enumerate_ideals(alg, opts);
  for (Ideal& id : all.ideals)
    if (id.maximal) out.ideals.push_back(std::move(id));
  return out;
}

FilterList maximal_filters(const Algebra& alg, const ProbeOptions& opts) {
  FilterList out;
  if (as_fin_support(alg)) {
    out.symbolic = true;
    out.note = "one maximal filter per coordinate (full level there); listed up to the support bound";
    for (std::uint32_t i = 0; i < opts.support_bound; ++i) {
      Filter f;
      f.kind = Filter::Kind::CoordinateFull;
      f.coordinate = i;
      f.proper = true;
      f.maximal = true;
      out.filters.push_back(f);
    }
    return out;
  }
  if (as_chang(alg)) {
    out.symbolic = true;
    out.note = "the Bigs form the unique maximal filter";
    Filter f;
    f.kind = Filter::Kind::Bigs;
    f.proper = true;
    f.maximal = true;
    out.filters.push_back(f);
    return out;
  }
  Tables t(alg, "maximal_filters");
  std::vector<Mask> all = closed_sets(t, true);
  for (Mask m : all) {
    if (m == t.full()) continue;
    bool maximal = true;
    for (Mask other : all)
      if (other != m && other != t.full() && (other & m) == m) { maximal = false; break; }
    if (!maximal) continue;
    Filter f;
    f.kind = Filter::Kind::Explicit;
    f.members = mask_members(m, t.n);
    f.proper = true;
    f.maximal = true;
    out.filters.push_back(std::move(f));
  }
  return out;
}

Ideal ideal_of_filter(const Algebra& alg, const Filter& f, const ProbeOptions& opts) {
  if (const auto* fs = as_fin_support(alg)) {
    if (f.kind != Filter::Kind::CoordinateFull)
      throw std::invalid_argument("ideal_of_filter: unsupported filter kind for this backend");
    Ideal cand = make_coordinate_ideal(f.coordinate);
    for (const Element& x : probe_elements(alg, opts)) {
      if (f.contains(alg, x)) {
        Element a = alg.idempotent_cover(x);
        if (!cand.contains(alg, alg.lambda(a, x)))
          throw ConsistencyError("ideal_of_filter: complement of a filter member escapes the ideal");
      }
      if (cand.contains(alg, x)) {
        auto coords = fs->support(x);
        coords.push_back(f.coordinate);
        Element a = fs->from_set(coords);
        Element y = alg.lambda(a, x);
        if (!f.contains(alg, y) || !(alg.lambda(a, y) == x))
          throw ConsistencyError("ideal_of_filter: ideal member is not a complement of a filter member");
      }
    }
    return cand;
  }
  if (as_chang(alg)) {
    if (f.kind != Filter::Kind::Bigs)
      throw std::invalid_argument("ideal_of_filter: unsupported filter kind for this backend");
    Ideal cand = make_radical_ideal();
    for (const Element& x : probe_elements(alg, opts)) {
      Element y = alg.lambda(alg.top(), x);
      if (f.contains(alg, x) && !cand.contains(alg, y))
        throw ConsistencyError("ideal_of_filter: complement of a filter member escapes the ideal");
      if (cand.contains(alg, x) && !f.contains(alg, y))
        throw ConsistencyError("ideal_of_filter: ideal member is not a complement of a filter member");
    }
    return cand;
  }
  Tables t(alg, "ideal_of_filter");
  std::set<std::size_t> image;
  for (std::size_t i = 0; i < t.n; ++i) {
    Element x = alg.element(i);
    if (!f.contains(alg, x)) continue;
    for (std::size_t j = 0; j < t.n; ++j) {
      Element a = alg.element(j);
      if (alg.is_idempotent(a) && alg.leq(x, a))
        image.insert(alg.index_of(alg.lambda(a, x)));
    }
  }
  Mask m = 0;
  for (std::size_t i : image) m |= bit(i);
  if (!(m & bit(t.zero)) || ideal_closure(t, m) != m)
    throw ConsistencyError("ideal_of_filter: the complement image is not an ideal");
  return explicit_ideal(t, m);
}

RadicalReport radical(const Algebra& alg, const ProbeOptions& opts) {
  RadicalReport rep;
  if (as_fin_support(alg)) {
    for (const Element& x : probe_elements(alg, opts)) {
      bool expected = x == alg.zero();
      if (formula_holds(alg, x, opts.horizon) != expected)
        throw ConsistencyError("radical: formula disagrees with the zero radical on " + alg.format(x));
    }
    rep.via_formula = make_zero_ideal();
    rep.via_intersection = make_zero_ideal();
    rep.agree = true;
    rep.semisimple = true;
    return rep;
  }
  if (as_chang(alg)) {
    // Small(k) stays radical for every n: n.Small(k) = Small(nk) < Big(k).
    // The loop cannot see that, so sample n instead of waiting to stabilize.
    for (const Element& x : probe_elements(alg, opts)) {
      const ChangElem& c = x.chang();
      Element lam = alg.lambda(alg.top(), x);
      if (c.big) {
        if (alg.leq(x, lam))
          throw ConsistencyError("radical: a Big element passed the multiples test");
      } else {
        for (std::uint64_t nn : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{7},
                                 static_cast<std::uint64_t>(opts.horizon)})
          if (!alg.leq(nscale(alg, nn, x), lam))
            throw ConsistencyError("radical: a Small element failed the multiples test");
      }
    }
    rep.via_formula = make_radical_ideal();
    rep.via_intersection = make_radical_ideal();
    rep.agree = true;
    rep.semisimple = false;
    return rep;
  }
  Tables t(alg, "radical");
  Mask via_formula = 0;
  for (std::size_t i = 0; i < t.n; ++i)
    if (formula_holds(alg, alg.element(i), t.n + 1)) via_formula |= bit(i);
  Mask via_intersection = t.full();
  for (const Ideal& mx : maximal_ideals(alg, opts).ideals) {
    Mask m = 0;
    for (std::size_t i : mx.members) m |= bit(i);
    via_intersection &= m;
  }
  rep.via_formula = explicit_ideal(t, via_formula);
  rep.via_intersection = explicit_ideal(t, via_intersection);
  rep.agree = via_formula == via_intersection;
  rep.semisimple = rep.agree && via_formula == bit(t.zero);
  return rep;
}

bool is_semisimple(const Algebra& alg, const ProbeOptions& opts) {
  return radical(alg, opts).semisimple;
}

QuotientChain quotient_chain(const std::shared_ptr<const FiniteAlgebra>& alg, const Ideal& ideal) {
  if (!alg) throw std::invalid_argument("quotient_chain: null algebra");
  const FiniteAlgebra& A = *alg;
  if (!ideal.proper) throw std::invalid_argument("quotient_chain: ideal must be proper");
  std::size_t n = A.size();
  auto in_ideal = [&](const Element& x) { return ideal.contains(A, x); };
  auto below_mod = [&](std::size_t i, std::size_t j) {
    return in_ideal(emv::ominus(A, A.element(i), A.element(j)));
  };

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> cls(n, unset);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] != unset) continue;
    cls[i] = reps.size();
    for (std::size_t j = i + 1; j < n; ++j)
      if (cls[j] == unset && below_mod(i, j) && below_mod(j, i)) cls[j] = reps.size();
    reps.push_back(i);
  }
  std::size_t k = reps.size() - 1;

  // In the quotient the classes must be totally ordered; the level of a class
  // is the number of classes strictly below it.
  std::vector<std::size_t> level(reps.size(), 0);
  for (std::size_t p = 0; p < reps.size(); ++p)
    for (std::size_t q = 0; q < reps.size(); ++q) {
      if (p == q) continue;
      bool pq = below_mod(reps[p], reps[q]);
      bool qp = below_mod(reps[q], reps[p]);
      if (pq && qp)
        throw ConsistencyError("quotient_chain: distinct classes collapsed by the order");
      if (!pq && !qp)
        throw std::invalid_argument("quotient_chain: quotient is not a chain (ideal is not maximal)");
      if (qp) ++level[p];
    }
  {
    std::vector<char> hit(reps.size(), 0);
    for (std::size_t lv : level) hit.at(lv) = 1;
    for (char h : hit)
      if (!h) throw ConsistencyError("quotient_chain: class levels are not consecutive");
  }

  QuotientChain out;
  out.levels = k;
  out.chain = FiniteAlgebra::chain(k);
  out.class_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.class_of[i] = level[cls[i]];

  auto lvl = [&](const Element& x) { return out.class_of[A.index_of(x)]; };
  if (lvl(A.zero()) != 0)
    throw ConsistencyError("quotient_chain: zero does not land on level 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Element x = A.element(i), y = A.element(j);
      if (lvl(A.oplus(x, y)) != std::min(lvl(x) + lvl(y), k))
        throw ConsistencyError("quotient_chain: class map does not respect (+)");
      if (lvl(A.join(x, y)) != std::max(lvl(x), lvl(y)) ||
          lvl(A.meet(x, y)) != std::min(lvl(x), lvl(y)))
        throw ConsistencyError("quotient_chain: class map does not respect the lattice");
    }
  for (std::size_t ai : A.idempotent_indices()) {
    Element a = A.element(ai);
    for (std::size_t i = 0; i < n; ++i) {
      Element x = A.element(i);
      if (!A.leq(x, a)) continue;
      if (lvl(A.lambda(a, x)) != lvl(a) - lvl(x))
        throw ConsistencyError("quotient_chain: class map does not respect complements");
    }
  }
  return out;
}

}  // namespace emv

#include "emv/states.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "emv/backends.hpp"
#include "emv/error.hpp"

namespace emv {
namespace {

const FinSupportAlgebra* as_fin_support(const Algebra& alg) {
  return dynamic_cast<const FinSupportAlgebra*>(&alg);
}
const ChangAlgebra* as_chang(const Algebra& alg) {
  return dynamic_cast<const ChangAlgebra*>(&alg);
}

// Does n.x stay below y for every n?  Multiples increase, so on stabilizing
// backends this is a finite loop.
bool multiples_below(const Algebra& alg, const Element& x, const Element& y,
                     std::size_t max_steps) {
  Element m = x;
  for (std::size_t s = 0; s <= max_steps; ++s) {
    if (!alg.leq(m, y)) return false;
    Element next = alg.oplus(m, x);
    if (next == m) return true;
    m = next;
  }
  throw ConsistencyError("multiples of " + alg.format(x) + " did not stabilize");
}

struct Audit {
  std::vector<LawCheck> checks;
  std::size_t idx(const std::string& law) {
    for (std::size_t i = 0; i < checks.size(); ++i)
      if (checks[i].law == law) return i;
    checks.push_back({law, true, {}});
    return checks.size() - 1;
  }
  bool live(const std::string& law) { return checks[idx(law)].pass; }
  void fail(const std::string& law, std::vector<std::string> w) {
    LawCheck& c = checks[idx(law)];
    if (c.pass) {
      c.pass = false;
      c.witness = std::move(w);
    }
  }
};

void check_distinct(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                    const StateMorphism& t, const std::vector<Element>& sample) {
  for (const StateMorphism& s : x_set) {
    bool same = true;
    for (const Element& e : sample)
      if (s.value(alg, e) != t.value(alg, e)) {
        same = false;
        break;
      }
    if (same) throw std::invalid_argument("separating element: t must not be in the excluded set");
  }
}

std::vector<Element> carrier(const Algebra& alg) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < alg.size(); ++i) out.push_back(alg.element(i));
  return out;
}

void audit_separation(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                      const StateMorphism& t, const Element& e, bool dual, const char* who) {
  Rational want_t = dual ? Rational(0) : Rational(1);
  Rational want_s = dual ? Rational(1) : Rational(0);
  if (t.value(alg, e) != want_t)
    throw ConsistencyError(std::string(who) + ": candidate misses the target value under t");
  for (const StateMorphism& s : x_set)
    if (s.value(alg, e) != want_s)
      throw ConsistencyError(std::string(who) + ": candidate misses the target value under the excluded set");
}

// Shared core of the two constructive recipes.  For each excluded state s,
// amplify some x in Ker(t) \ Ker(s) until s passes 1/2; the direct recipe
// then meets the local complements and squares, the dual one joins the
// amplified elements and doubles.
Element recipe_element(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                       const StateMorphism& t, bool dual) {
  if (!alg.is_finite())
    throw std::invalid_argument("separating recipe: needs a finite backend");
  std::vector<Element> all = carrier(alg);
  check_distinct(alg, x_set, t, all);
  Element w = t.witness;
  if (t.value(alg, w) != Rational(1))
    throw std::invalid_argument("separating recipe: state witness does not attain 1");

  std::optional<Element> acc;
  for (const StateMorphism& s : x_set) {
    std::optional<Element> gap;
    for (const Element& x : all)
      if (t.value(alg, x) == Rational(0) && s.value(alg, x) != Rational(0)) {
        gap = x;
        break;
      }
    if (!gap)
      throw ConsistencyError("separating recipe: Ker(t) within Ker(s) contradicts maximality");
    Element m = *gap;
    std::size_t guard = 0;
    while (s.value(alg, m) <= Rational(1, 2)) {
      m = alg.oplus(m, *gap);
      if (++guard > alg.size() + 1)
        throw ConsistencyError("separating recipe: amplification did not pass 1/2");
    }
    if (dual) {
      acc = acc ? alg.join(*acc, m) : m;
    } else {
      Element b = alg.idempotent_cover(alg.join(*gap, w));
      Element term = alg.lambda(b, m);
      acc = acc ? alg.meet(*acc, term) : term;
    }
  }
  Element e = dual ? (acc ? alg.oplus(*acc, *acc) : alg.zero())
                   : (acc ? odot(alg, *acc, *acc) : odot(alg, w, w));
  audit_separation(alg, x_set, t, e, dual, "separating recipe");
  return e;
}

Element scan_element(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                     const StateMorphism& t, bool dual) {
  if (!alg.is_finite())
    throw std::invalid_argument("separating element: needs a finite backend");
  std::vector<Element> all = carrier(alg);
  check_distinct(alg, x_set, t, all);
  Rational want_t = dual ? Rational(0) : Rational(1);
  Rational want_s = dual ? Rational(1) : Rational(0);
  for (const Element& e : all) {
    if (t.value(alg, e) != want_t) continue;
    bool ok = true;
    for (const StateMorphism& s : x_set)
      if (s.value(alg, e) != want_s) {
        ok = false;
        break;
      }
    if (ok) return e;
  }
  throw ConsistencyError("separating element: exhaustive scan found no witness");
}

std::set<std::vector<std::size_t>> member_sets(const IdealList& list) {
  std::set<std::vector<std::size_t>> out;
  for (const Ideal& id : list.ideals) out.insert(id.members);
  return out;
}

}  // namespace

Rational StateMorphism::value(const Algebra& alg, const Element& x) const {
  switch (kind) {
    case Kind::FiniteTable:
      return table.at(alg.index_of(x));
    case Kind::FsCoordinate: {
      const auto* fs = as_fin_support(alg);
      if (!fs) throw std::invalid_argument("coordinate state needs the finite-support backend");
      return Rational(fs->level_at(x, coordinate), order);
    }
    case Kind::ChangCharacter:
      return Rational(x.chang().big ? 1 : 0);
  }
  throw std::logic_error("unreachable state kind");
}

StateList state_morphisms(const AlgebraPtr& alg, const ProbeOptions& opts) {
  if (!alg) throw std::invalid_argument("state_morphisms: null algebra");
  StateList out;
  if (const auto* fs = as_fin_support(*alg)) {
    out.symbolic = true;
    out.note = "one state per coordinate, s_i(x) = x(i)/" + std::to_string(fs->order()) +
               "; listed up to the support bound";
    IdealList mx = maximal_ideals(*alg, opts);
    for (std::uint32_t i = 0; i < opts.support_bound; ++i) {
      StateMorphism s;
      s.kind = StateMorphism::Kind::FsCoordinate;
      s.coordinate = i;
      s.order = fs->order();
      s.provenance = mx.ideals.at(i);
      s.witness = fs->singleton(i, fs->order());
      s.rule = "x -> x(" + std::to_string(i) + ")/" + std::to_string(fs->order());
      out.states.push_back(std::move(s));
    }
    return out;
  }
  if (as_chang(*alg)) {
    out.symbolic = true;
    out.note = "the unique state sends Smalls to 0 and Bigs to 1";
    StateMorphism s;
    s.kind = StateMorphism::Kind::ChangCharacter;
    s.provenance = maximal_ideals(*alg, opts).ideals.at(0);
    s.witness = alg->top();
    s.rule = "Small(k) -> 0, Big(k) -> 1";
    out.states.push_back(std::move(s));
    return out;
  }
  auto fin = std::dynamic_pointer_cast<const FiniteAlgebra>(alg);
  if (!fin) throw std::invalid_argument("state_morphisms: unsupported backend");
  if (fin->size() == 1) {
    out.note = "the trivial algebra admits no state-morphism";
    return out;
  }
  for (const Ideal& id : maximal_ideals(*fin, opts).ideals) {
    QuotientChain q = quotient_chain(fin, id);
    StateMorphism s;
    s.kind = StateMorphism::Kind::FiniteTable;
    s.table.reserve(fin->size());
    for (std::size_t i = 0; i < fin->size(); ++i)
      s.table.push_back(Rational(static_cast<long long>(q.class_of[i]),
                                 static_cast<long long>(q.levels)));
    for (std::size_t i = 0; i < fin->size(); ++i)
      if (q.class_of[i] == q.levels) {
        s.witness = fin->element(i);
        break;
      }
    s.provenance = id;
    s.rule = "x -> class(x)/" + std::to_string(q.levels) + " for the quotient by " +
             id.describe(*fin);
    out.states.push_back(std::move(s));
  }
  return out;
}

Ideal ker(const Algebra& alg, const StateMorphism& s, const ProbeOptions& opts) {
  if (alg.is_finite()) {
    Ideal got;
    got.kind = Ideal::Kind::Explicit;
    for (std::size_t i = 0; i < alg.size(); ++i)
      if (s.value(alg, alg.element(i)) == Rational(0)) got.members.push_back(i);
    if (s.provenance.kind != Ideal::Kind::Explicit || got.members != s.provenance.members)
      throw ConsistencyError("ker: zero set disagrees with the state's maximal ideal");
    got.proper = s.provenance.proper;
    got.maximal = s.provenance.maximal;
    return got;
  }
  for (const Element& x : probe_elements(alg, opts))
    if ((s.value(alg, x) == Rational(0)) != s.provenance.contains(alg, x))
      throw ConsistencyError("ker: zero set disagrees with the state's maximal ideal at " +
                             alg.format(x));
  return s.provenance;
}

Filter ker1(const Algebra& alg, const StateMorphism& s, const ProbeOptions& opts) {
  if (alg.is_finite()) {
    Filter got;
    got.kind = Filter::Kind::Explicit;
    for (std::size_t i = 0; i < alg.size(); ++i)
      if (s.value(alg, alg.element(i)) == Rational(1)) got.members.push_back(i);
    bool found = false;
    for (const Filter& f : maximal_filters(alg, opts).filters)
      if (f.members == got.members) {
        found = true;
        break;
      }
    if (!found) throw ConsistencyError("ker1: one set of the state is not a maximal filter");
    got.proper = true;
    got.maximal = true;
    return got;
  }
  Filter f;
  if (as_fin_support(alg)) {
    f.kind = Filter::Kind::CoordinateFull;
    f.coordinate = s.coordinate;
  } else if (as_chang(alg)) {
    f.kind = Filter::Kind::Bigs;
  } else {
    throw std::invalid_argument("ker1: unsupported backend");
  }
  f.proper = true;
  f.maximal = true;
  for (const Element& x : probe_elements(alg, opts))
    if ((s.value(alg, x) == Rational(1)) != f.contains(alg, x))
      throw ConsistencyError("ker1: one set disagrees with the claimed filter at " + alg.format(x));
  return f;
}

AxiomReport audit_state(const Algebra& alg, const StateMorphism& s, const ProbeOptions& opts) {
  AxiomReport rep;
  rep.exhaustive = alg.is_finite();
  std::vector<Element> pool = rep.exhaustive ? carrier(alg) : probe_elements(alg, opts);
  Audit a;
  auto val = [&](const Element& x) { return s.value(alg, x); };
  auto fmt = [&](const Element& x) { return alg.format(x); };

  if (val(alg.zero()) != Rational(0)) a.fail("state.zero", {fmt(alg.zero())});
  else a.idx("state.zero");
  if (val(s.witness) != Rational(1)) a.fail("state.attains_one", {fmt(s.witness)});
  else a.idx("state.attains_one");

  a.idx("state.oplus");
  a.idx("state.join");
  a.idx("state.meet");
  for (const Element& x : pool)
    for (const Element& y : pool) {
      Rational vx = val(x), vy = val(y);
      if (a.live("state.oplus") && val(alg.oplus(x, y)) != vx.oplus1(vy))
        a.fail("state.oplus", {fmt(x), fmt(y)});
      if (a.live("state.join") && val(alg.join(x, y)) != Rational::max(vx, vy))
        a.fail("state.join", {fmt(x), fmt(y)});
      if (a.live("state.meet") && val(alg.meet(x, y)) != Rational::min(vx, vy))
        a.fail("state.meet", {fmt(x), fmt(y)});
    }

  a.idx("state.idempotent_01");
  a.idx("state.lambda");
  std::vector<Element> idems;
  if (rep.exhaustive) {
    idems = idempotents(alg);
  } else {
    for (const Element& x : pool) idems.push_back(alg.idempotent_cover(x));
    if (alg.has_top()) idems.push_back(alg.top());
  }
  for (const Element& b : idems) {
    Rational vb = val(b);
    if (a.live("state.idempotent_01") && vb != Rational(0) && vb != Rational(1))
      a.fail("state.idempotent_01", {fmt(b)});
    for (const Element& x : pool) {
      if (!alg.leq(x, b)) continue;
      if (a.live("state.lambda") && val(alg.lambda(b, x)) != vb - val(x))
        a.fail("state.lambda", {fmt(b), fmt(x)});
    }
  }
  rep.checks = a.checks;
  return rep;
}

Element find_separating_element(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                                const StateMorphism& t) {
  return scan_element(alg, x_set, t, false);
}
Element find_dual_separating_element(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                                     const StateMorphism& t) {
  return scan_element(alg, x_set, t, true);
}
Element find_separating_element_recipe(const Algebra& alg, const std::vector<StateMorphism>& x_set,
                                       const StateMorphism& t) {
  return recipe_element(alg, x_set, t, false);
}
Element find_dual_separating_element_recipe(const Algebra& alg,
                                            const std::vector<StateMorphism>& x_set,
                                            const StateMorphism& t) {
  return recipe_element(alg, x_set, t, true);
}

ComparabilityReport check_general_comparability(const Algebra& alg, const ProbeOptions& opts) {
  ComparabilityReport rep;
  if (alg.is_finite()) {
    rep.exhaustive = true;
    rep.holds = true;
    std::vector<Element> idems = idempotents(alg);
    std::vector<Element> all = carrier(alg);
    for (const Element& a : idems)
      for (const Element& x : all) {
        if (!alg.leq(x, a)) continue;
        for (const Element& y : all) {
          if (!alg.leq(y, a)) continue;
          bool split = false;
          for (const Element& e : idems) {
            if (!alg.leq(e, a)) continue;
            if (alg.leq(alg.meet(x, e), y) && alg.leq(alg.meet(y, alg.lambda(a, e)), x)) {
              split = true;
              break;
            }
          }
          if (!split) {
            rep.holds = false;
            rep.witness = {alg.format(a), alg.format(x), alg.format(y)};
            return rep;
          }
        }
      }
    return rep;
  }
  // Lazy backends split pointwise (finite-support) or by linearity (Chang);
  // verify the construction on the probe set.
  const auto* fs = as_fin_support(alg);
  rep.holds = true;
  std::vector<Element> pool = probe_elements(alg, opts);
  for (const Element& x : pool)
    for (const Element& y : pool) {
      Element a = alg.idempotent_cover(alg.join(x, y));
      Element e;
      if (fs) {
        std::vector<std::uint32_t> coords;
        for (std::uint32_t i : fs->support(a))
          if (fs->level_at(x, i) <= fs->level_at(y, i)) coords.push_back(i);
        e = fs->from_set(coords);
      } else {
        e = alg.leq(x, y) ? a : alg.zero();
      }
      if (!alg.is_idempotent(e) || !alg.leq(e, a) || !alg.leq(alg.meet(x, e), y) ||
          !alg.leq(alg.meet(y, alg.lambda(a, e)), x))
        throw ConsistencyError("general comparability: pointwise splitting failed at " +
                               alg.format(x) + ", " + alg.format(y));
    }
  return rep;
}

ArchimedeanReport is_archimedean_belluce(const Algebra& alg, const ProbeOptions& opts) {
  ArchimedeanReport rep;
  if (as_chang(alg)) {
    // Small(1), Big(1): every multiple Small(n) sits below Big(1), yet
    // Small(1) (.) Big(1) = 0.  Sample the multiples, then pin the witness.
    Element x = Element::small(1), y = Element::big(1);
    for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{7},
                            static_cast<std::uint64_t>(opts.horizon)})
      if (!alg.leq(nscale(alg, n, x), y))
        throw ConsistencyError("archimedean: the Chang witness stopped being below Big(1)");
    if (odot(alg, x, y) == x)
      throw ConsistencyError("archimedean: the Chang witness fails to fail");
    rep.archimedean = false;
    rep.witness = {alg.format(x), alg.format(y)};
  } else {
    rep.exhaustive = alg.is_finite();
    rep.archimedean = true;
    std::vector<Element> pool = rep.exhaustive ? carrier(alg) : probe_elements(alg, opts);
    std::size_t max_steps = rep.exhaustive ? alg.size() + 1 : opts.horizon;
    for (const Element& x : pool) {
      for (const Element& y : pool) {
        if (!multiples_below(alg, x, y, max_steps)) continue;
        if (odot(alg, x, y) != x) {
          rep.archimedean = false;
          rep.witness = {alg.format(x), alg.format(y)};
          break;
        }
      }
      if (!rep.archimedean) break;
    }
  }
  if (rep.archimedean != is_semisimple(alg, opts))
    throw ConsistencyError("archimedean verdict disagrees with semisimplicity");
  return rep;
}

CorrespondenceMaps correspondence_maps(const std::shared_ptr<const FiniteAlgebra>& alg,
                                       const ProbeOptions& opts) {
  if (!alg) throw std::invalid_argument("correspondence_maps: null algebra");
  const FiniteAlgebra& A = *alg;
  CorrespondenceMaps out;
  out.states = state_morphisms(alg, opts).states;

  for (const StateMorphism& s : out.states) out.theta.ideals.push_back(ker(A, s, opts));
  if (member_sets(out.theta) != member_sets(maximal_ideals(A, opts)) ||
      out.theta.ideals.size() != maximal_ideals(A, opts).ideals.size())
    throw ConsistencyError("theta is not a bijection onto the maximal ideals");

  std::set<std::vector<std::size_t>> zeta_sets;
  for (const StateMorphism& s : out.states) {
    Filter f = ker1(A, s, opts);
    zeta_sets.insert(f.members);
    out.zeta.filters.push_back(std::move(f));
  }
  std::set<std::vector<std::size_t>> all_filters;
  for (const Filter& f : maximal_filters(A, opts).filters) all_filters.insert(f.members);
  if (zeta_sets != all_filters || out.zeta.filters.size() != all_filters.size())
    throw ConsistencyError("zeta is not a bijection onto the maximal filters");

  ComparabilityReport comp = check_general_comparability(A, opts);
  out.comparability = comp.holds;
  if (!comp.holds) {
    out.note = "general comparability fails, so the idempotent-algebra maps are unavailable";
    return out;
  }

  auto idem = A.restriction(A.idempotent_indices(), A.name() + " idempotents");
  out.idempotent_algebra = idem;
  std::vector<std::size_t> to_sub(A.size(), FiniteAlgebra::npos);
  for (std::size_t j = 0; j < idem->size(); ++j) to_sub[idem->parent_indices()[j]] = j;

  IdealList idem_max = maximal_ideals(*idem, opts);
  std::set<std::vector<std::size_t>> xi_sets;
  for (const Ideal& id : out.theta.ideals) {
    Ideal cut;
    cut.kind = Ideal::Kind::Explicit;
    for (std::size_t i : id.members)
      if (to_sub[i] != FiniteAlgebra::npos) cut.members.push_back(to_sub[i]);
    std::sort(cut.members.begin(), cut.members.end());
    bool found = false;
    for (const Ideal& m : idem_max.ideals)
      if (m.members == cut.members) {
        cut.proper = m.proper;
        cut.maximal = m.maximal;
        found = true;
        break;
      }
    if (!found)
      throw ConsistencyError("xi image is not a maximal ideal of the idempotent algebra");
    xi_sets.insert(cut.members);
    out.xi.ideals.push_back(std::move(cut));
  }
  if (xi_sets != member_sets(idem_max) || out.xi.ideals.size() != idem_max.ideals.size())
    throw ConsistencyError("xi is not a bijection onto the idempotent maximal ideals");

  std::set<std::vector<Rational>> eta_tables;
  for (std::size_t k = 0; k < out.states.size(); ++k) {
    StateMorphism r;
    r.kind = StateMorphism::Kind::FiniteTable;
    for (std::size_t j = 0; j < idem->size(); ++j)
      r.table.push_back(out.states[k].table.at(idem->parent_indices()[j]));
    r.witness = idem->top();
    r.provenance = out.xi.ideals[k];
    r.rule = "restriction of state " + std::to_string(k) + " to the idempotent subalgebra";
    if (!audit_state(*idem, r, opts).ok())
      throw ConsistencyError("eta image fails the state audit on the idempotent algebra");
    eta_tables.insert(r.table);
    out.eta.push_back(std::move(r));
  }
  std::size_t idem_state_count = state_morphisms(idem, opts).states.size();
  if (eta_tables.size() != out.eta.size() || out.eta.size() != idem_state_count)
    throw ConsistencyError("eta is not a bijection onto the idempotent states");
  return out;
}

}  // namespace emv

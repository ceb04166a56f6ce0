#include "emv/core_ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "emv/backends.hpp"

namespace emv {

Element odot_in(const Algebra& alg, const Element& a, const Element& x, const Element& y) {
  if (!alg.is_idempotent(a))
    throw std::invalid_argument(alg.name() + ": odot bound must be idempotent");
  if (!alg.leq(x, a) || !alg.leq(y, a))
    throw std::invalid_argument(alg.name() + ": odot operands must lie below the bound");
  Element s = alg.oplus(alg.lambda(a, x), alg.lambda(a, y));
  return alg.lambda(a, s);
}

Element odot(const Algebra& alg, const Element& x, const Element& y) {
  Element c = alg.idempotent_cover(alg.join(x, y));
  return odot_in(alg, c, x, y);
}

Element ominus(const Algebra& alg, const Element& x, const Element& y) {
  Element c = alg.idempotent_cover(alg.join(x, y));
  return odot_in(alg, c, x, alg.lambda(c, y));
}

Element nscale(const Algebra& alg, std::uint64_t n, const Element& x) {
  Element acc = alg.zero();
  for (std::uint64_t i = 0; i < n; ++i) acc = alg.oplus(acc, x);
  return acc;
}

Element npower(const Algebra& alg, std::uint64_t n, const Element& x) {
  if (n == 0) {
    if (!alg.has_top())
      throw std::invalid_argument(alg.name() + ": x^0 needs a top element");
    return alg.top();
  }
  Element acc = x;
  for (std::uint64_t i = 1; i < n; ++i) acc = odot(alg, acc, x);
  return acc;
}

std::vector<Element> idempotents(const Algebra& alg) {
  if (!alg.is_finite())
    throw std::invalid_argument(alg.name() + ": idempotent enumeration needs a finite backend");
  std::vector<Element> out;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    Element x = alg.element(i);
    if (alg.is_idempotent(x)) out.push_back(x);
  }
  return out;
}

std::vector<Element> probe_elements(const Algebra& alg, const ProbeOptions& opts) {
  std::vector<Element> out;
  if (alg.is_finite()) {
    for (std::size_t i = 0; i < alg.size(); ++i) out.push_back(alg.element(i));
    return out;
  }
  if (auto* fs = dynamic_cast<const FinSupportAlgebra*>(&alg)) {
    int n = fs->order();
    // Everything supported inside {0,1,2}.
    for (int l0 = 0; l0 <= n; ++l0)
      for (int l1 = 0; l1 <= n; ++l1)
        for (int l2 = 0; l2 <= n; ++l2)
          out.push_back(fs->make_element({{0, l0}, {1, l1}, {2, l2}}));
    // Singletons out to the support bound.
    for (std::uint32_t i = 3; i <= opts.support_bound; ++i)
      for (int l = 1; l <= n; ++l) out.push_back(fs->singleton(i, l));
    // A few wide elements touching the bound; a map so a small bound that
    // collides with the fixed indices does not duplicate an entry.
    std::map<std::uint32_t, int> wide_full{{0, n}, {opts.support_bound, n}};
    out.push_back(fs->make_element({wide_full.begin(), wide_full.end()}));
    std::map<std::uint32_t, int> wide_thin{{0, 1}, {3, 1}, {opts.support_bound, 1}};
    out.push_back(fs->make_element({wide_thin.begin(), wide_thin.end()}));
    std::mt19937_64 rng(opts.seed);
    for (std::size_t k = 0; k < opts.extra_samples; ++k) {
      std::map<std::uint32_t, int> entries;
      std::size_t width = 1 + rng() % 3;
      for (std::size_t j = 0; j < width; ++j)
        entries[(std::uint32_t)(rng() % (opts.support_bound + 1))] = 1 + (int)(rng() % n);
      out.push_back(fs->make_element({entries.begin(), entries.end()}));
    }
  } else if (dynamic_cast<const ChangAlgebra*>(&alg)) {
    for (std::uint64_t i = 0; i <= opts.chang_index_bound; ++i) {
      out.push_back(Element::small(i));
      out.push_back(Element::big(i));
    }
  } else {
    out.push_back(alg.zero());
    if (alg.has_top()) out.push_back(alg.top());
  }
  std::sort(out.begin(), out.end(), Element::canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct Checker {
  const Algebra& alg;
  std::deque<LawCheck> checks;  // deque: references stay valid across law()

  LawCheck& law(const std::string& name) {
    checks.push_back(LawCheck{name, true, {}});
    return checks.back();
  }
  void fail(LawCheck& c, std::initializer_list<Element> witness, const std::string& extra = "") {
    if (!c.pass) return;
    c.pass = false;
    for (const Element& e : witness) c.witness.push_back(alg.format(e));
    if (!extra.empty()) c.witness.push_back(extra);
  }
};

}  // namespace

AxiomReport check_emv_axioms(const Algebra& alg, const ProbeOptions& opts) {
  AxiomReport rep;
  rep.exhaustive = alg.is_finite();
  Checker ck{alg, {}};

  std::vector<Element> all = probe_elements(alg, opts);
  // Pair/triple scans need caps on lazy backends.
  std::vector<Element> pairs_set = all;
  if (!alg.is_finite() && pairs_set.size() > 26) pairs_set.resize(26);
  std::vector<Element> triples_set = pairs_set;
  if (!alg.is_finite() && triples_set.size() > 12) triples_set.resize(12);
  const Element zero = alg.zero();

  {
    LawCheck& c = ck.law("monoid.identity");
    for (const Element& x : all)
      if (!(alg.oplus(zero, x) == x && alg.oplus(x, zero) == x)) ck.fail(c, {x});
  }
  {
    LawCheck& c = ck.law("monoid.commutative");
    for (const Element& x : pairs_set)
      for (const Element& y : pairs_set)
        if (!(alg.oplus(x, y) == alg.oplus(y, x))) ck.fail(c, {x, y});
  }
  {
    LawCheck& c = ck.law("monoid.associative");
    for (const Element& x : triples_set)
      for (const Element& y : triples_set)
        for (const Element& z : triples_set)
          if (!(alg.oplus(alg.oplus(x, y), z) == alg.oplus(x, alg.oplus(y, z))))
            ck.fail(c, {x, y, z});
  }
  {
    LawCheck& d = ck.law("lattice.defined");
    LawCheck& c1 = ck.law("lattice.commutative");
    LawCheck& c2 = ck.law("lattice.idempotent");
    LawCheck& c3 = ck.law("lattice.absorption");
    LawCheck& c4 = ck.law("order.antisymmetric");
    LawCheck& c5 = ck.law("order.consistent");
    for (const Element& x : pairs_set) {
      for (const Element& y : pairs_set) {
        auto j = alg.try_join(x, y);
        auto m = alg.try_meet(x, y);
        if (!j || !m) {
          ck.fail(d, {x, y});
          continue;
        }
        if (!(*j == *alg.try_join(y, x) && *m == *alg.try_meet(y, x))) ck.fail(c1, {x, y});
        if (!(*alg.try_join(x, x) == x && *alg.try_meet(x, x) == x)) ck.fail(c2, {x});
        auto a1 = alg.try_meet(x, *j);
        auto a2 = alg.try_join(x, *m);
        if (!a1 || !a2 || !(*a1 == x) || !(*a2 == x)) ck.fail(c3, {x, y});
        if (alg.leq(x, y) && alg.leq(y, x) && !(x == y)) ck.fail(c4, {x, y});
        if ((*j == y) != (*m == x)) ck.fail(c5, {x, y});
      }
    }
  }
  {
    LawCheck& c1 = ck.law("lattice.associative");
    LawCheck& c2 = ck.law("lattice.distributive");
    for (const Element& x : triples_set)
      for (const Element& y : triples_set)
        for (const Element& z : triples_set) {
          auto jxy = alg.try_join(x, y);
          auto jyz = alg.try_join(y, z);
          auto mxy = alg.try_meet(x, y);
          auto myz = alg.try_meet(y, z);
          if (!jxy || !jyz || !mxy || !myz) continue;  // reported by lattice.defined
          auto l1 = alg.try_join(*jxy, z);
          auto r1 = alg.try_join(x, *jyz);
          auto l2 = alg.try_meet(*mxy, z);
          auto r2 = alg.try_meet(x, *myz);
          if (!l1 || !r1 || !l2 || !r2 || !(*l1 == *r1) || !(*l2 == *r2)) ck.fail(c1, {x, y, z});
          auto lhs = alg.try_meet(x, *jyz);
          auto mxz = alg.try_meet(x, z);
          if (!lhs || !mxz) continue;
          auto rhs = alg.try_join(*mxy, *mxz);
          if (!rhs || !(*lhs == *rhs)) ck.fail(c2, {x, y, z});
        }
  }
  {
    LawCheck& c = ck.law("lattice.bottom");
    for (const Element& x : all) {
      auto j = alg.try_join(zero, x);
      if (!j || !(*j == x)) ck.fail(c, {x});
    }
  }
  {
    LawCheck& c = ck.law("cover.exists");
    for (const Element& x : all) {
      auto cov = alg.try_idempotent_cover(x);
      if (!cov || !alg.is_idempotent(*cov) || !alg.leq(x, *cov)) ck.fail(c, {x});
    }
  }

  // Local MV structure on [0, a] for idempotent a.
  std::vector<Element> idems;
  if (alg.is_finite()) {
    idems = idempotents(alg);
  } else {
    std::vector<Element> uniq;
    for (const Element& x : pairs_set) {
      auto cov = alg.try_idempotent_cover(x);
      if (cov && std::find(uniq.begin(), uniq.end(), *cov) == uniq.end()) uniq.push_back(*cov);
    }
    idems = uniq;
  }
  {
    LawCheck& closed = ck.law("interval.oplus_closed");
    LawCheck& exists = ck.law("interval.lambda_exists");
    LawCheck& invol = ck.law("interval.lambda_involution");
    LawCheck& topl = ck.law("interval.top");
    LawCheck& luk = ck.law("interval.lukasiewicz");
    for (const Element& a : idems) {
      std::vector<Element> below;
      for (const Element& x : pairs_set)
        if (alg.leq(x, a)) below.push_back(x);
      std::vector<std::optional<Element>> lam(below.size());
      for (std::size_t i = 0; i < below.size(); ++i) {
        lam[i] = alg.try_lambda(a, below[i]);
        if (!lam[i]) {
          ck.fail(exists, {a, below[i]});
          continue;
        }
        auto twice = alg.try_lambda(a, *lam[i]);
        if (!twice || !(*twice == below[i])) ck.fail(invol, {a, below[i]});
        if (!(alg.oplus(below[i], a) == a)) ck.fail(topl, {a, below[i]});
      }
      for (std::size_t i = 0; i < below.size(); ++i) {
        if (!lam[i]) continue;
        for (std::size_t j = 0; j < below.size(); ++j) {
          if (!lam[j]) continue;
          Element sxy = alg.oplus(below[i], below[j]);
          if (!alg.leq(sxy, a)) {
            ck.fail(closed, {a, below[i], below[j]});
            continue;
          }
          Element u = alg.oplus(*lam[i], below[j]);
          Element v = alg.oplus(*lam[j], below[i]);
          if (!alg.leq(u, a) || !alg.leq(v, a)) {
            ck.fail(closed, {a, below[i], below[j]});
            continue;
          }
          auto lu = alg.try_lambda(a, u);
          auto lv = alg.try_lambda(a, v);
          if (!lu || !lv) {
            ck.fail(exists, {a, below[i], below[j]});
            continue;
          }
          if (!(alg.oplus(*lu, below[j]) == alg.oplus(*lv, below[i])))
            ck.fail(luk, {a, below[i], below[j]});
        }
      }
    }
  }
  rep.checks.assign(ck.checks.begin(), ck.checks.end());
  return rep;
}

namespace {

SupResult fold_probe(const Algebra& alg, const ElementSequence& seq, const ProbeOptions& opts,
                     bool want_sup) {
  auto step = [&](const Element& acc, const Element& next) {
    return want_sup ? alg.join(acc, next) : alg.meet(acc, next);
  };
  SupResult res;
  if (seq.is_finite_list()) {
    const auto& items = seq.items();
    if (items.empty())
      throw std::invalid_argument(alg.name() + ": sup/inf of an empty family");
    Element acc = items[0];
    for (std::size_t i = 1; i < items.size(); ++i) {
      Element nxt = step(acc, items[i]);
      if (!(nxt == acc)) res.stabilized_at = i;
      acc = nxt;
    }
    res.verdict = SupResult::Verdict::Exists;
    res.value = acc;
    return res;
  }
  std::size_t horizon = std::max<std::size_t>(opts.horizon, 8);
  Element acc = seq.at(0);
  std::size_t last_change = 0;
  for (std::size_t i = 1; i < horizon; ++i) {
    Element nxt = step(acc, seq.at(i));
    if (!(nxt == acc)) last_change = i;
    acc = nxt;
  }
  std::size_t window = std::max<std::size_t>(2, horizon / 8);
  if (last_change + window <= horizon - 1) {
    res.verdict = SupResult::Verdict::Exists;
    res.value = acc;
    res.stabilized_at = last_change;
    return res;
  }
  if (want_sup && seq.tail() == ElementSequence::Tail::UnboundedSupport) {
    res.verdict = SupResult::Verdict::NotExists;
    res.note = "declared unbounded support union; no finite-support upper bound exists";
    return res;
  }
  res.verdict = SupResult::Verdict::Undecided;
  res.note = "partial folds still changing at probe horizon";
  return res;
}

}  // namespace

SupResult sup_of(const Algebra& alg, const ElementSequence& seq, const ProbeOptions& opts) {
  return fold_probe(alg, seq, opts, true);
}

SupResult inf_of(const Algebra& alg, const ElementSequence& seq, const ProbeOptions& opts) {
  return fold_probe(alg, seq, opts, false);
}

}  // namespace emv

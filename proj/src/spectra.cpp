#include "emv/spectra.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include "emv/backends.hpp"
#include "emv/error.hpp"

namespace emv {
namespace {

using Points = std::vector<std::uint32_t>;

Points pts_union(const Points& a, const Points& b) {
  Points out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Points pts_intersection(const Points& a, const Points& b) {
  Points out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Points pts_difference(const Points& a, const Points& b) {
  Points out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool pts_subset(const Points& a, const Points& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool pts_member(const Points& a, std::uint32_t p) {
  return std::binary_search(a.begin(), a.end(), p);
}

std::string pts_str(const Points& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out + "}";
}

const FinSupportAlgebra* as_fs(const Algebra& alg) {
  return dynamic_cast<const FinSupportAlgebra*>(&alg);
}

const ChangAlgebra* as_chang(const Algebra& alg) {
  return dynamic_cast<const ChangAlgebra*>(&alg);
}

// Spectrum points resolved once per report: catalog indices for finite
// backends, coordinates for finite support, the single radical point for
// Chang.
struct View {
  const Algebra& alg;
  const FinSupportAlgebra* fs;
  const ChangAlgebra* chang;
  IdealList catalog;

  explicit View(const Algebra& a, const ProbeOptions& opts = {}) : alg(a) {
    fs = as_fs(a);
    chang = as_chang(a);
    if (!fs && !chang) catalog = maximal_ideals(a, opts);
  }

  Points of(const Element& x) const {
    if (fs) return fs->support(x);
    if (chang) return x.chang().big ? Points{0} : Points{};
    Points out;
    for (std::size_t i = 0; i < catalog.ideals.size(); ++i)
      if (!catalog.ideals[i].contains(alg, x)) out.push_back(static_cast<std::uint32_t>(i));
    return out;
  }

  Points full() const {
    if (chang) return {0};
    Points out;
    for (std::size_t i = 0; i < catalog.ideals.size(); ++i)
      out.push_back(static_cast<std::uint32_t>(i));
    return out;
  }
};

struct Checker {
  std::vector<LawCheck> checks;
  std::size_t at(const std::string& law) {
    for (std::size_t i = 0; i < checks.size(); ++i)
      if (checks[i].law == law) return i;
    checks.push_back({law, true, {}});
    return checks.size() - 1;
  }
  bool live(const std::string& law) { return checks[at(law)].pass; }
  void fail(const std::string& law, std::vector<std::string> witness) {
    LawCheck& c = checks[at(law)];
    c.pass = false;
    c.witness = std::move(witness);
  }
};

}  // namespace

BaseSet base_set(const Algebra& alg, const Element& x) {
  View v(alg);
  return BaseSet{x, v.of(x)};
}

AxiomReport verify_base_identities(const Algebra& alg, const ProbeOptions& opts) {
  View v(alg, opts);
  std::vector<Element> pool = probe_elements(alg, opts);
  Checker a;
  a.at("base.zero");
  a.at("base.monotone");
  a.at("base.meet");
  a.at("base.join");
  if (!v.of(alg.zero()).empty()) a.fail("base.zero", {alg.format(alg.zero())});
  for (const Element& x : pool) {
    Points mx = v.of(x);
    for (const Element& y : pool) {
      Points my = v.of(y);
      if (a.live("base.monotone") && alg.leq(x, y) && !pts_subset(mx, my))
        a.fail("base.monotone", {alg.format(x), alg.format(y)});
      if (a.live("base.meet") && v.of(alg.meet(x, y)) != pts_intersection(mx, my))
        a.fail("base.meet", {alg.format(x), alg.format(y)});
      if (a.live("base.join") && v.of(alg.join(x, y)) != pts_union(mx, my))
        a.fail("base.join", {alg.format(x), alg.format(y)});
    }
  }
  AxiomReport rep;
  rep.exhaustive = alg.is_finite();
  rep.checks = a.checks;
  return rep;
}

AxiomReport verify_difference_laws(const Algebra& alg, const ProbeOptions& opts) {
  View v(alg, opts);
  std::vector<Element> pool = probe_elements(alg, opts);
  std::vector<Element> idems;
  for (const Element& e : pool)
    if (alg.is_idempotent(e)) idems.push_back(e);
  bool semisimple = is_semisimple(alg, opts);

  Checker a;
  a.at("diff.remainder");
  a.at("diff.idempotent_equality");
  a.at("diff.relative");
  if (semisimple) {
    a.at("diff.converse_idempotent");
    a.at("diff.idempotent_relative");
  }
  if (alg.has_top()) a.at("diff.top_complement");

  for (const Element& b : idems) {
    Points mb = v.of(b);
    for (const Element& x : pool) {
      if (!alg.leq(x, b)) continue;
      Points mx = v.of(x);
      Points diff = pts_difference(mb, mx);
      Points mlam = v.of(alg.lambda(b, x));
      if (a.live("diff.remainder") && !pts_subset(diff, mlam))
        a.fail("diff.remainder", {alg.format(x), alg.format(b)});
      bool idem = alg.is_idempotent(x);
      if (a.live("diff.idempotent_equality") && idem && diff != mlam)
        a.fail("diff.idempotent_equality", {alg.format(x), alg.format(b)});
      if (semisimple && a.live("diff.converse_idempotent") && (diff == mlam) != idem)
        a.fail("diff.converse_idempotent", {alg.format(x), alg.format(b)});
      for (const Element& y : pool) {
        if (!alg.leq(y, b)) continue;
        Points my = v.of(y);
        Points left = pts_difference(my, v.of(alg.meet(x, y)));
        Points mid = pts_difference(my, mx);
        Points prod = v.of(odot_in(alg, b, y, alg.lambda(b, x)));
        if (a.live("diff.relative") &&
            !(left == mid && pts_subset(mid, prod) && pts_subset(prod, mlam)))
          a.fail("diff.relative", {alg.format(x), alg.format(y), alg.format(b)});
        if (semisimple && a.live("diff.idempotent_relative") && idem && alg.is_idempotent(y) &&
            !(left == mid && mid == prod))
          a.fail("diff.idempotent_relative", {alg.format(x), alg.format(y), alg.format(b)});
      }
    }
  }

  if (alg.has_top()) {
    Points everything = v.full();
    for (const Element& e : idems)
      if (a.live("diff.top_complement") &&
          v.of(alg.lambda(alg.top(), e)) != pts_difference(everything, v.of(e)))
        a.fail("diff.top_complement", {alg.format(e)});
  }

  AxiomReport rep;
  rep.exhaustive = alg.is_finite();
  rep.checks = a.checks;
  return rep;
}

AxiomReport verify_multiples_identity(const Algebra& alg, const Element& x,
                                      const ProbeOptions& opts) {
  View v(alg, opts);
  Points lhs = v.of(x);
  Element a = alg.idempotent_cover(x);
  Points ma = v.of(a);
  Checker c;

  AxiomReport rep;
  rep.exhaustive = alg.is_finite();

  if (v.chang && !x.chang().big && x != alg.zero()) {
    // Radical member: the multiples never stabilize, but every term of the
    // union is empty because lambda_a(n.x) stays outside the radical.
    c.at("multiples.radical_term");
    c.at("multiples.match");
    for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{7},
                            static_cast<std::uint64_t>(opts.horizon)}) {
      Points term = pts_difference(ma, v.of(alg.lambda(a, nscale(alg, n, x))));
      if (c.live("multiples.radical_term") && !term.empty())
        c.fail("multiples.radical_term", {alg.format(x), std::to_string(n)});
    }
    if (!lhs.empty()) c.fail("multiples.match", {alg.format(x), pts_str(lhs)});
    rep.exhaustive = false;
    rep.checks = c.checks;
    return rep;
  }

  Points rhs;
  Element cur = x;
  bool stable = false;
  for (std::size_t n = 1; n <= opts.horizon; ++n) {
    rhs = pts_union(rhs, pts_difference(ma, v.of(alg.lambda(a, cur))));
    Element next = alg.oplus(cur, x);
    if (next == cur) {
      stable = true;
      break;
    }
    cur = next;
  }
  if (!stable)
    throw ConsistencyError("multiples of " + alg.format(x) +
                           " did not stabilize by the horizon");
  c.at("multiples.match");
  if (rhs != lhs) c.fail("multiples.match", {alg.format(x), pts_str(lhs), pts_str(rhs)});
  rep.checks = c.checks;
  return rep;
}

SupCriterionReport sup_criterion(const Algebra& alg, const Element& x,
                                 const ElementSequence& family, const ProbeOptions& opts) {
  if (!alg.is_idempotent(x))
    throw std::invalid_argument(
        "sup criterion: x must be idempotent (a generalized Boolean slice)");
  View v(alg, opts);
  SupCriterionReport out;
  out.note = "nowhere dense read as empty: the maximal-ideal spectrum of " + alg.name() +
             " is discrete";

  std::vector<Element> items;
  if (family.is_finite_list()) {
    items = family.items();
  } else {
    std::size_t window = std::max<std::size_t>(2, opts.horizon / 8);
    Element run = alg.zero();
    std::size_t quiet = 0;
    bool stable = false;
    for (std::size_t n = 0; n < opts.horizon; ++n) {
      Element e = family.at(n);
      items.push_back(e);
      Element next = alg.join(run, e);
      if (next == run) {
        if (++quiet >= window) {
          stable = true;
          break;
        }
      } else {
        quiet = 0;
        run = next;
      }
    }
    if (!stable) {
      out.verdict = SupVerdict::Undecided;
      out.note += "; the rule family was still growing at the horizon";
      return out;
    }
    out.note += "; rule family stabilized after " + std::to_string(items.size()) + " terms";
  }

  Element sup = alg.zero();
  Points covered;
  for (const Element& e : items) {
    if (!alg.is_idempotent(e))
      throw std::invalid_argument("sup criterion: family members must be idempotent");
    if (!alg.leq(e, x))
      throw std::invalid_argument("sup criterion: the family must be majorized by x");
    sup = alg.join(sup, e);
    covered = pts_union(covered, v.of(e));
  }
  out.sup_matches = (sup == x);
  out.difference = pts_difference(v.of(x), covered);
  out.difference_empty = out.difference.empty();
  if (out.sup_matches != out.difference_empty)
    throw ConsistencyError("sup criterion: the discrete-shadow biconditional failed at " +
                           alg.format(x));
  out.verdict = out.sup_matches ? SupVerdict::Holds : SupVerdict::Fails;
  return out;
}

AxiomReport compact_basis_audit(const Algebra& alg, const std::vector<Element>& seq) {
  View v(alg);
  Checker c;
  c.at("basis.sigma_union");
  c.at("basis.injective");

  Element a = alg.zero();
  Points covered;
  for (const Element& e : seq) {
    if (!alg.is_idempotent(e))
      throw std::invalid_argument("compact basis audit: sequence members must be idempotent");
    a = alg.join(a, e);
    covered = pts_union(covered, v.of(e));
  }
  if (v.of(a) != covered) c.fail("basis.sigma_union", {alg.format(a), pts_str(covered)});

  std::vector<Element> pool = alg.is_finite() ? idempotents(alg) : seq;
  for (std::size_t i = 0; i < pool.size() && c.live("basis.injective"); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      if (pool[i] != pool[j] && v.of(pool[i]) == v.of(pool[j])) {
        c.fail("basis.injective", {alg.format(pool[i]), alg.format(pool[j])});
        break;
      }

  AxiomReport rep;
  rep.exhaustive = alg.is_finite();
  rep.checks = c.checks;
  return rep;
}

CompactnessReport compactness_shadow(const Algebra& alg) {
  CompactnessReport out;
  out.has_top = alg.has_top();
  if (as_fs(alg)) {
    out.spectrum_finite = false;
    out.note = "coordinate catalog I_0, I_1, ...: countably infinite and discrete";
  } else if (as_chang(alg)) {
    out.spectrum_finite = true;
    out.spectrum_points = 1;
    out.note = "single spectrum point: the radical";
  } else {
    IdealList catalog = maximal_ideals(alg);
    out.spectrum_finite = true;
    out.spectrum_points = catalog.ideals.size();
    out.note = "finite discrete spectrum from the maximal-ideal catalog";
  }
  out.equivalence_holds = (out.has_top == out.spectrum_finite);
  if (!out.equivalence_holds)
    throw ConsistencyError("compactness shadow: top element and finite spectrum disagree on " +
                           alg.name());
  return out;
}

HausdorffWitness hausdorff_witness(const Algebra& alg, std::uint32_t i, std::uint32_t j,
                                   const ProbeOptions& opts) {
  if (i == j)
    throw std::invalid_argument("hausdorff witness: need two distinct spectrum points");
  if (as_chang(alg))
    throw std::invalid_argument("hausdorff witness: the Chang spectrum has a single point");
  View v(alg, opts);

  Ideal A, B;
  Element x = alg.zero(), y = alg.zero();
  bool fx = false, fy = false;
  if (v.fs) {
    A.kind = B.kind = Ideal::Kind::Coordinate;
    A.coordinate = i;
    B.coordinate = j;
    A.proper = A.maximal = B.proper = B.maximal = true;
    x = v.fs->from_set({j});
    y = v.fs->from_set({i});
    fx = fy = true;
  } else {
    if (i >= v.catalog.ideals.size() || j >= v.catalog.ideals.size())
      throw std::invalid_argument("hausdorff witness: spectrum point out of range");
    A = v.catalog.ideals[i];
    B = v.catalog.ideals[j];
    for (const Element& e : probe_elements(alg, opts)) {
      if (!fx && A.contains(alg, e) && !B.contains(alg, e)) {
        x = e;
        fx = true;
      }
      if (!fy && B.contains(alg, e) && !A.contains(alg, e)) {
        y = e;
        fy = true;
      }
      if (fx && fy) break;
    }
  }
  if (!fx || !fy)
    throw std::invalid_argument("hausdorff witness: the points do not name distinct ideals");

  Element a = alg.idempotent_cover(alg.join(x, y));
  Element around_j = odot_in(alg, a, x, alg.lambda(a, y));
  Element around_i = odot_in(alg, a, y, alg.lambda(a, x));

  HausdorffWitness out;
  out.first = around_i;
  out.second = around_j;
  out.first_set = BaseSet{around_i, v.of(around_i)};
  out.second_set = BaseSet{around_j, v.of(around_j)};

  bool sides_ok = A.contains(alg, around_j) && !B.contains(alg, around_j) &&
                  B.contains(alg, around_i) && !A.contains(alg, around_i);
  bool sets_ok = pts_member(out.first_set.points, i) && !pts_member(out.first_set.points, j) &&
                 pts_member(out.second_set.points, j) && !pts_member(out.second_set.points, i) &&
                 pts_intersection(out.first_set.points, out.second_set.points).empty();
  if (!sides_ok || !sets_ok || alg.meet(around_i, around_j) != alg.zero())
    throw ConsistencyError("hausdorff witness: the separation construction failed between points " +
                           std::to_string(i) + " and " + std::to_string(j));
  return out;
}

}  // namespace emv

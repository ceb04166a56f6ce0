#include "emv/represent.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "emv/backends.hpp"
#include "emv/error.hpp"
#include "emv/ideals.hpp"

namespace emv {
namespace {

const FinSupportAlgebra* fs_base(const RepresentedMv& n) {
  return dynamic_cast<const FinSupportAlgebra*>(n.base().get());
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

}  // namespace

RepresentedMv::RepresentedMv(AlgebraPtr base) : base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("RepresentedMv: null base");
  if (base_->has_top())
    throw std::invalid_argument("RepresentedMv: base already has a top; nothing to represent");
}

NElement RepresentedMv::oplus(const NElement& a, const NElement& b) const {
  if (!a.complement && !b.complement) return direct(base_->oplus(a.base, b.base));
  if (a.complement && b.complement)
    return complement_of(emv::odot(*base_, a.base, b.base));
  const NElement& d = a.complement ? b : a;
  const NElement& c = a.complement ? a : b;
  Element bound = base_->idempotent_cover(base_->join(d.base, c.base));
  return complement_of(odot_in(*base_, bound, c.base, base_->lambda(bound, d.base)));
}

NElement RepresentedMv::odot(const NElement& a, const NElement& b) const {
  return lambda_top(oplus(lambda_top(a), lambda_top(b)));
}

NElement RepresentedMv::ominus(const NElement& a, const NElement& b) const {
  return odot(a, lambda_top(b));
}

NElement RepresentedMv::join(const NElement& a, const NElement& b) const {
  return oplus(ominus(a, b), b);
}

NElement RepresentedMv::meet(const NElement& a, const NElement& b) const {
  return odot(a, oplus(lambda_top(a), b));
}

bool RepresentedMv::leq(const NElement& a, const NElement& b) const {
  return ominus(a, b) == zero();
}

std::string RepresentedMv::format(const NElement& z) const {
  if (z.complement) return "~" + base_->format(z.base);
  return base_->format(z.base);
}

RepresentResult represent(const AlgebraPtr& m) {
  if (!m) throw std::invalid_argument("represent: null algebra");
  if (m->has_top()) return {true, nullptr};
  return {false, std::make_shared<const RepresentedMv>(m)};
}

std::vector<NElement> n_probe_elements(const RepresentedMv& n, const ProbeOptions& opts) {
  std::vector<NElement> out;
  std::vector<Element> base = probe_elements(*n.base(), opts);
  for (const Element& x : base) out.push_back(n.direct(x));
  for (const Element& x : base) out.push_back(n.complement_of(x));
  return out;
}

AxiomReport audit_representation(const RepresentedMv& n, const ProbeOptions& opts) {
  AxiomReport rep;
  rep.exhaustive = false;
  const Algebra& M = *n.base();
  std::vector<Element> base = probe_elements(M, opts);
  std::vector<NElement> pool = n_probe_elements(n, opts);
  Audit a;
  auto fmt = [&](const NElement& z) { return n.format(z); };

  a.idx("noplus.zero");
  a.idx("ntop.absorb");
  a.idx("ninvolution");
  for (const NElement& z : pool) {
    if (a.live("noplus.zero") && !(n.oplus(z, n.zero()) == z)) a.fail("noplus.zero", {fmt(z)});
    if (a.live("ntop.absorb") && !(n.oplus(z, n.top()) == n.top())) a.fail("ntop.absorb", {fmt(z)});
    if (a.live("ninvolution") && !(n.lambda_top(n.lambda_top(z)) == z))
      a.fail("ninvolution", {fmt(z)});
  }

  a.idx("noplus.commutative");
  a.idx("nlukasiewicz");
  a.idx("nlattice.absorption");
  for (const NElement& x : pool)
    for (const NElement& y : pool) {
      if (a.live("noplus.commutative") && !(n.oplus(x, y) == n.oplus(y, x)))
        a.fail("noplus.commutative", {fmt(x), fmt(y)});
      if (a.live("nlukasiewicz")) {
        NElement l = n.oplus(n.lambda_top(n.oplus(n.lambda_top(x), y)), y);
        NElement r = n.oplus(n.lambda_top(n.oplus(n.lambda_top(y), x)), x);
        if (!(l == r)) a.fail("nlukasiewicz", {fmt(x), fmt(y)});
      }
      if (a.live("nlattice.absorption") &&
          (!(n.join(x, n.meet(x, y)) == x) || !(n.meet(x, n.join(x, y)) == x)))
        a.fail("nlattice.absorption", {fmt(x), fmt(y)});
    }

  a.idx("noplus.associative");
  std::size_t cap = std::min<std::size_t>(pool.size(), 12);
  for (std::size_t i = 0; i < cap && a.live("noplus.associative"); ++i)
    for (std::size_t j = 0; j < cap && a.live("noplus.associative"); ++j)
      for (std::size_t k = 0; k < cap; ++k) {
        NElement l = n.oplus(n.oplus(pool[i], pool[j]), pool[k]);
        NElement r = n.oplus(pool[i], n.oplus(pool[j], pool[k]));
        if (!(l == r)) {
          a.fail("noplus.associative", {fmt(pool[i]), fmt(pool[j]), fmt(pool[k])});
          break;
        }
      }

  a.idx("nembedding");
  for (const Element& x : base)
    for (const Element& y : base) {
      if (!a.live("nembedding")) break;
      bool ord_n = n.leq(n.direct(x), n.direct(y));
      if (ord_n != M.leq(x, y) || !(n.oplus(n.direct(x), n.direct(y)) == n.direct(M.oplus(x, y))))
        a.fail("nembedding", {M.format(x), M.format(y)});
    }

  // The mixed sum must not depend on which idempotent cover is used.
  a.idx("nmixed.cover_free");
  if (const auto* fs = fs_base(n)) {
    for (const Element& x : base)
      for (const Element& y : base) {
        if (!a.live("nmixed.cover_free")) break;
        Element b1 = M.idempotent_cover(M.join(x, y));
        std::uint32_t fresh = 0;
        for (std::uint32_t i : fs->support(b1)) fresh = std::max(fresh, i + 1);
        Element b2 = M.oplus(b1, fs->singleton(fresh, fs->order()));
        Element r1 = odot_in(M, b1, y, M.lambda(b1, x));
        Element r2 = odot_in(M, b2, y, M.lambda(b2, x));
        if (!(r1 == r2)) a.fail("nmixed.cover_free", {M.format(x), M.format(y)});
      }
  }

  a.idx("ndirect.ideal");
  a.idx("ndirect.maximal");
  for (const NElement& z : pool) {
    if (a.live("ndirect.ideal"))
      for (const NElement& w : pool)
        if (!z.complement && n.leq(w, z) && w.complement) {
          a.fail("ndirect.ideal", {fmt(w), fmt(z)});
          break;
        }
    if (a.live("ndirect.maximal") && z.complement &&
        !(n.oplus(n.direct(z.base), z) == n.top()))
      a.fail("ndirect.maximal", {fmt(z)});
  }

  a.idx("nsigma.direct_sup");
  a.idx("nsigma.complement_sup");
  a.idx("nsigma.mixed_sup");
  for (const Element& x : base)
    for (const Element& y : base) {
      if (a.live("nsigma.direct_sup") &&
          !(n.join(n.direct(x), n.direct(y)) == n.direct(M.join(x, y))))
        a.fail("nsigma.direct_sup", {M.format(x), M.format(y)});
      if (a.live("nsigma.complement_sup") &&
          !(n.join(n.complement_of(x), n.complement_of(y)) == n.complement_of(M.meet(x, y))))
        a.fail("nsigma.complement_sup", {M.format(x), M.format(y)});
      if (a.live("nsigma.mixed_sup") &&
          !(n.join(n.direct(x), n.complement_of(y)) ==
            n.complement_of(emv::ominus(M, y, emv::odot(M, x, y)))))
        a.fail("nsigma.mixed_sup", {M.format(x), M.format(y)});
    }

  rep.checks = a.checks;
  return rep;
}

Rational ExtendedState::value(const RepresentedMv& n, const NElement& z) const {
  if (infinity) return Rational(z.complement ? 1 : 0);
  Rational v = ground.value(*n.base(), z.base);
  return z.complement ? Rational(1) - v : v;
}

namespace {

void audit_extended(const RepresentedMv& n, const ExtendedState& es, const ProbeOptions& opts) {
  std::vector<NElement> pool = n_probe_elements(n, opts);
  auto val = [&](const NElement& z) { return es.value(n, z); };
  if (val(n.zero()) != Rational(0) || val(n.top()) != Rational(1))
    throw ConsistencyError("extended state: endpoints misbehave");
  for (const NElement& z : pool)
    if (val(n.lambda_top(z)) != Rational(1) - val(z))
      throw ConsistencyError("extended state: complement law fails at " + n.format(z));
  for (const NElement& x : pool)
    for (const NElement& y : pool) {
      Rational vx = val(x), vy = val(y);
      if (val(n.oplus(x, y)) != vx.oplus1(vy))
        throw ConsistencyError("extended state: (+) law fails at " + n.format(x) + ", " +
                               n.format(y));
      if (val(n.join(x, y)) != Rational::max(vx, vy) ||
          val(n.meet(x, y)) != Rational::min(vx, vy))
        throw ConsistencyError("extended state: lattice law fails at " + n.format(x) + ", " +
                               n.format(y));
    }
}

}  // namespace

ExtendedState extend_state(const StateMorphism& s, const RepresentedMv& n,
                           const ProbeOptions& opts) {
  ExtendedState es;
  es.ground = s;
  es.rule = "extend(" + s.rule + ")";
  audit_extended(n, es, opts);
  return es;
}

ExtendedState s_infinity(const RepresentedMv&) {
  ExtendedState es;
  es.infinity = true;
  es.rule = "0 on the embedded base, 1 on complements";
  return es;
}

std::vector<ExtendedState> extended_state_catalog(const RepresentedMv& n,
                                                  const ProbeOptions& opts) {
  std::vector<ExtendedState> out;
  for (const StateMorphism& s : state_morphisms(n.base(), opts).states)
    out.push_back(extend_state(s, n, opts));
  ExtendedState inf = s_infinity(n);
  audit_extended(n, inf, opts);
  out.push_back(std::move(inf));
  return out;
}

bool NIdeal::contains(const RepresentedMv& n, const NElement& z) const {
  if (infinity) return !z.complement;
  const auto* fs = fs_base(n);
  if (!fs) throw std::invalid_argument("NIdeal: needs a finite-support base");
  int level = fs->level_at(z.base, coordinate);
  return z.complement ? level == fs->order() : level == 0;
}

std::string NIdeal::describe() const {
  if (infinity) return "the embedded base (I_infinity)";
  return "kernel of the extended coordinate-" + std::to_string(coordinate) + " state";
}

BoundedSlice bounded_slice(const RepresentedMv& n, std::uint32_t support) {
  const auto* fs = fs_base(n);
  if (!fs) throw std::invalid_argument("bounded_slice: needs a finite-support base");
  if (support == 0) throw std::invalid_argument("bounded_slice: support must be positive");

  std::vector<Element> maps;
  std::vector<int> levels(support, 0);
  for (;;) {
    std::vector<std::pair<std::uint32_t, int>> entries;
    for (std::uint32_t i = 0; i < support; ++i)
      if (levels[i] > 0) entries.push_back({i, levels[i]});
    maps.push_back(fs->make_element(entries));
    std::uint32_t pos = 0;
    while (pos < support && levels[pos] == fs->order()) levels[pos++] = 0;
    if (pos == support) break;
    ++levels[pos];
  }

  BoundedSlice out;
  out.support = support;
  for (const Element& x : maps) out.elements.push_back(n.direct(x));
  for (const Element& x : maps) out.elements.push_back(n.complement_of(x));

  std::size_t size = out.elements.size();
  auto index_of = [&](const NElement& z) {
    for (std::size_t i = 0; i < size; ++i)
      if (out.elements[i] == z) return i;
    throw ConsistencyError("bounded_slice: operation left the slice");
  };
  std::vector<std::string> labels;
  for (const NElement& z : out.elements) labels.push_back(n.format(z));
  std::vector<std::vector<std::size_t>> oplus(size, std::vector<std::size_t>(size));
  std::vector<std::pair<std::size_t, std::size_t>> le_pairs;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      oplus[i][j] = index_of(n.oplus(out.elements[i], out.elements[j]));
      if (n.leq(out.elements[i], out.elements[j])) le_pairs.push_back({i, j});
    }
  out.algebra = FiniteAlgebra::from_tables(
      n.name() + " slice(" + std::to_string(support) + ")", labels,
      index_of(n.zero()), oplus, std::nullopt, le_pairs);
  return out;
}

NIdealList maxideal_space_of_n(const RepresentedMv& n, const ProbeOptions& opts) {
  const auto* fs = fs_base(n);
  if (!fs) throw std::invalid_argument("maxideal_space_of_n: needs a finite-support base");
  NIdealList out;
  out.note =
      "kernel of each extended coordinate state (one per coordinate, listed up to the "
      "support bound) plus the embedded base; a bounded slice search finds no others";
  for (std::uint32_t i = 0; i < opts.support_bound; ++i) out.ideals.push_back({false, i});
  out.ideals.push_back({true, 0});

  std::vector<NElement> pool = n_probe_elements(n, opts);
  StateList ground = state_morphisms(n.base(), opts);
  for (const NIdeal& id : out.ideals) {
    ExtendedState es =
        id.infinity ? s_infinity(n) : extend_state(ground.states.at(id.coordinate), n, opts);
    // The entry must be the zero set of its state, a proper ideal, and
    // maximal: amplifying any outside element and adding its complement
    // (which the ideal holds) reaches the top.
    if (!id.contains(n, n.zero()) || id.contains(n, n.top()))
      throw ConsistencyError("maxideal_space_of_n: entry misses zero or holds top");
    for (const NElement& z : pool) {
      if (id.contains(n, z) != (es.value(n, z) == Rational(0)))
        throw ConsistencyError("maxideal_space_of_n: entry is not the zero set of its state");
      for (const NElement& w : pool) {
        if (id.contains(n, z) && id.contains(n, w) && !id.contains(n, n.oplus(z, w)))
          throw ConsistencyError("maxideal_space_of_n: entry not closed under (+)");
        if (id.contains(n, z) && n.leq(w, z) && !id.contains(n, w))
          throw ConsistencyError("maxideal_space_of_n: entry not downward closed");
      }
      if (!id.contains(n, z)) {
        NElement m = z;
        std::size_t guard = 0;
        while (es.value(n, m) != Rational(1)) {
          m = n.oplus(m, z);
          if (++guard > opts.horizon)
            throw ConsistencyError("maxideal_space_of_n: amplification stalled");
        }
        if (!id.contains(n, n.lambda_top(m)) || !(n.oplus(m, n.lambda_top(m)) == n.top()))
          throw ConsistencyError("maxideal_space_of_n: maximality certificate failed");
      }
    }
  }

  // Exhaustive cross-check on the finite slice: its maximal ideals are the
  // catalog entries restricted there, and nothing else.
  std::uint32_t k = 1;
  while (k + 1 <= opts.support_bound) {
    double next = 2.0;
    for (std::uint32_t i = 0; i < k + 1; ++i) next *= fs->order() + 1;
    if (next > 40) break;
    ++k;
  }
  BoundedSlice slice = bounded_slice(n, k);
  IdealList slice_max = maximal_ideals(*slice.algebra, opts);
  if (slice_max.ideals.size() != static_cast<std::size_t>(k) + 1)
    throw ConsistencyError("maxideal_space_of_n: slice search found an unexpected count");
  for (const Ideal& m : slice_max.ideals) {
    std::size_t matches = 0;
    for (const NIdeal& id : out.ideals) {
      if (!id.infinity && id.coordinate >= k) continue;
      bool same = true;
      for (std::size_t j = 0; j < slice.elements.size(); ++j) {
        bool in_m = std::binary_search(m.members.begin(), m.members.end(), j);
        if (in_m != id.contains(n, slice.elements[j])) {
          same = false;
          break;
        }
      }
      if (same) ++matches;
    }
    if (matches != 1)
      throw ConsistencyError("maxideal_space_of_n: a slice maximal ideal is not a catalog entry");
  }
  return out;
}

}  // namespace emv

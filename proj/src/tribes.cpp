#include "emv/tribes.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include "emv/error.hpp"

namespace emv {
namespace {

void check_size(const FuzzySet& f, std::size_t omega, const char* what) {
  if (f.values.size() != omega)
    throw std::invalid_argument(std::string(what) + ": domain size mismatch");
}

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

// Generators, zero, and one closure round of joins/meets/stars/sums that
// land back in the tribe.
std::vector<FuzzySet> probe_pool(const Tribe& t, std::size_t cap) {
  std::vector<FuzzySet> pool;
  auto push = [&](const FuzzySet& f) {
    if (pool.size() >= cap) return;
    if (std::find(pool.begin(), pool.end(), f) == pool.end()) pool.push_back(f);
  };
  push(fz_zero(t.omega()));
  for (const FuzzySet& g : t.generators()) push(g);
  const std::size_t base = pool.size();
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t j = i; j < base; ++j) {
      FuzzySet f = pool[i], g = pool[j];
      FuzzySet jn = fz_join(f, g);
      if (t.contains(jn)) push(jn);
      FuzzySet mt = fz_meet(f, g);
      if (t.contains(mt)) push(mt);
      FuzzySet st = fz_star(f, g);
      if (t.contains(st)) push(st);
      try {
        FuzzySet a = t.dominator(jn);
        FuzzySet op = fz_oplus(f, g, a);
        if (t.contains(op)) push(op);
      } catch (const std::invalid_argument&) {
      }
    }
  return pool;
}

bool covers_members(const Tribe& t, const std::vector<FuzzySet>& pool) {
  if (t.members().empty()) return false;
  for (const FuzzySet& m : t.members())
    if (std::find(pool.begin(), pool.end(), m) == pool.end()) return false;
  return true;
}

std::vector<std::uint32_t> set_union(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

FuzzySet fz_zero(std::size_t omega) { return FuzzySet{std::vector<Rational>(omega, Rational(0))}; }

FuzzySet fz_full(std::size_t omega) { return FuzzySet{std::vector<Rational>(omega, Rational(1))}; }

FuzzySet fz_characteristic(std::size_t omega, const std::vector<std::uint32_t>& points) {
  FuzzySet f = fz_zero(omega);
  for (std::uint32_t p : points) {
    if (p >= omega) throw std::invalid_argument("fz_characteristic: point out of range");
    f.values[p] = Rational(1);
  }
  return f;
}

bool fz_in_unit(const FuzzySet& f) {
  for (const Rational& v : f.values)
    if (v < Rational(0) || Rational(1) < v) return false;
  return true;
}

bool fz_is_characteristic(const FuzzySet& f) {
  for (const Rational& v : f.values)
    if (v != Rational(0) && v != Rational(1)) return false;
  return true;
}

bool fz_leq(const FuzzySet& f, const FuzzySet& g) {
  check_size(g, f.values.size(), "fz_leq");
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (g.values[i] < f.values[i]) return false;
  return true;
}

FuzzySet fz_oplus(const FuzzySet& f, const FuzzySet& g, const FuzzySet& cap) {
  check_size(g, f.values.size(), "fz_oplus");
  check_size(cap, f.values.size(), "fz_oplus");
  if (!fz_is_characteristic(cap) || !fz_leq(f, cap) || !fz_leq(g, cap))
    throw std::invalid_argument("fz_oplus: cap must be a dominating characteristic function");
  FuzzySet out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = Rational::min(f.values[i] + g.values[i], cap.values[i]);
  return out;
}

FuzzySet fz_odot(const FuzzySet& f, const FuzzySet& g, const FuzzySet& cap) {
  check_size(g, f.values.size(), "fz_odot");
  check_size(cap, f.values.size(), "fz_odot");
  if (!fz_is_characteristic(cap) || !fz_leq(f, cap) || !fz_leq(g, cap))
    throw std::invalid_argument("fz_odot: cap must be a dominating characteristic function");
  FuzzySet out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = Rational::max(f.values[i] + g.values[i] - cap.values[i], Rational(0));
  return out;
}

FuzzySet fz_star(const FuzzySet& f, const FuzzySet& g) {
  check_size(g, f.values.size(), "fz_star");
  FuzzySet out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = Rational::max(f.values[i] - g.values[i], Rational(0));
  return out;
}

FuzzySet fz_join(const FuzzySet& f, const FuzzySet& g) {
  check_size(g, f.values.size(), "fz_join");
  FuzzySet out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = Rational::max(f.values[i], g.values[i]);
  return out;
}

FuzzySet fz_meet(const FuzzySet& f, const FuzzySet& g) {
  check_size(g, f.values.size(), "fz_meet");
  FuzzySet out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = Rational::min(f.values[i], g.values[i]);
  return out;
}

FuzzySet fz_minus(const FuzzySet& a, const FuzzySet& f) {
  check_size(f, a.values.size(), "fz_minus");
  if (!fz_leq(f, a)) throw std::invalid_argument("fz_minus: needs f <= a");
  FuzzySet out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] - f.values[i];
  return out;
}

FuzzySet countable_oplus(const std::vector<FuzzySet>& seq, const FuzzySet& cap) {
  if (!fz_is_characteristic(cap))
    throw std::invalid_argument("countable_oplus: cap must be a characteristic function");
  FuzzySet sum = fz_zero(cap.values.size());
  for (const FuzzySet& f : seq) {
    check_size(f, cap.values.size(), "countable_oplus");
    if (!fz_leq(f, cap))
      throw std::invalid_argument("countable_oplus: every term must sit below the cap");
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] = sum.values[i] + f.values[i];
  }
  for (std::size_t i = 0; i < sum.values.size(); ++i)
    sum.values[i] = Rational::min(sum.values[i], cap.values[i]);
  return sum;
}

std::string fz_str(const FuzzySet& f) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (i) out += ",";
    out += f.values[i].str();
  }
  return out + ")";
}

std::vector<std::uint32_t> n_set(const FuzzySet& f) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i] != Rational(0)) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

std::vector<std::uint32_t> n_set_between(const FuzzySet& f, const FuzzySet& g) {
  check_size(g, f.values.size(), "n_set_between");
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i] != g.values[i]) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

Tribe Tribe::all_zero_one(std::size_t omega) {
  Tribe t;
  t.kind_ = Kind::AllZeroOne;
  t.omega_ = omega;
  t.generators_.push_back(fz_zero(omega));
  if (omega) t.generators_.push_back(fz_full(omega));
  for (std::uint32_t i = 0; i < omega; ++i)
    t.generators_.push_back(fz_characteristic(omega, {i}));
  return t;
}

Tribe Tribe::all_rational(std::size_t omega) {
  Tribe t;
  t.kind_ = Kind::AllRational;
  t.omega_ = omega;
  t.generators_.push_back(fz_zero(omega));
  if (omega) {
    t.generators_.push_back(fz_full(omega));
    FuzzySet graded = fz_zero(omega);
    for (std::size_t i = 0; i < omega; ++i)
      graded.values[i] = Rational(static_cast<long long>(i + 1),
                                  static_cast<long long>(omega + 1));
    t.generators_.push_back(graded);
  }
  for (std::uint32_t i = 0; i < omega; ++i) {
    t.generators_.push_back(fz_characteristic(omega, {i}));
    FuzzySet half = fz_zero(omega);
    half.values[i] = Rational(1, 2);
    t.generators_.push_back(half);
  }
  return t;
}

Tribe Tribe::from_members(std::size_t omega, std::vector<FuzzySet> members) {
  for (const FuzzySet& f : members) {
    check_size(f, omega, "Tribe::from_members");
    if (!fz_in_unit(f))
      throw std::invalid_argument("Tribe::from_members: values must lie in [0,1]");
  }
  Tribe t;
  t.kind_ = Kind::FromMembers;
  t.omega_ = omega;
  t.members_ = members;
  t.generators_ = std::move(members);
  return t;
}

Tribe Tribe::hat_image(const std::shared_ptr<const FiniteAlgebra>& m) {
  if (!m) throw std::invalid_argument("Tribe::hat_image: null algebra");
  StateList st = state_morphisms(m);
  std::vector<FuzzySet> members;
  for (std::size_t i = 0; i < m->size(); ++i) {
    FuzzySet f;
    f.values.reserve(st.states.size());
    for (const StateMorphism& s : st.states) f.values.push_back(s.value(*m, m->element(i)));
    if (std::find(members.begin(), members.end(), f) == members.end()) members.push_back(f);
  }
  Tribe t;
  t.kind_ = Kind::HatImage;
  t.omega_ = st.states.size();
  t.members_ = members;
  t.generators_ = std::move(members);
  return t;
}

bool Tribe::contains(const FuzzySet& f) const {
  check_size(f, omega_, "Tribe::contains");
  switch (kind_) {
    case Kind::AllZeroOne:
      return fz_is_characteristic(f) && fz_in_unit(f);
    case Kind::AllRational:
      return fz_in_unit(f);
    default:
      return std::find(members_.begin(), members_.end(), f) != members_.end();
  }
}

FuzzySet Tribe::dominator(const FuzzySet& f) const {
  check_size(f, omega_, "Tribe::dominator");
  if (kind_ == Kind::AllZeroOne || kind_ == Kind::AllRational)
    return fz_characteristic(omega_, n_set(f));
  for (const FuzzySet& c : members_)
    if (fz_is_characteristic(c) && fz_leq(f, c)) return c;
  throw std::invalid_argument("Tribe::dominator: no characteristic member dominates " + fz_str(f));
}

std::string Tribe::describe() const {
  std::string pts = std::to_string(omega_) + "-point domain";
  switch (kind_) {
    case Kind::AllZeroOne:
      return "all 0/1 functions on a " + pts;
    case Kind::AllRational:
      return "all rational fuzzy sets on a " + pts;
    case Kind::HatImage:
      return "hat image with " + std::to_string(members_.size()) + " members on a " + pts;
    default:
      return std::to_string(members_.size()) + " listed fuzzy sets on a " + pts;
  }
}

AxiomReport clan_audit(const Tribe& t, const ProbeOptions& opts) {
  std::vector<FuzzySet> pool = probe_pool(t, std::max<std::size_t>(24, opts.extra_samples * 4));
  Checker c;
  c.at("clan.zero");
  c.at("clan.dominator");
  c.at("clan.complement");
  c.at("clan.oplus");
  c.at("clan.lattice");
  c.at("clan.attains_one");

  if (!t.contains(fz_zero(t.omega()))) c.fail("clan.zero", {});

  for (const FuzzySet& f : pool) {
    if (!t.contains(f)) continue;
    if (c.live("clan.dominator")) {
      try {
        FuzzySet a = t.dominator(f);
        if (!(fz_is_characteristic(a) && t.contains(a) && fz_leq(f, a)))
          c.fail("clan.dominator", {fz_str(f), fz_str(a)});
      } catch (const std::invalid_argument&) {
        c.fail("clan.dominator", {fz_str(f)});
      }
    }
    for (const FuzzySet& g : pool) {
      if (!t.contains(g)) continue;
      if (c.live("clan.complement") && fz_is_characteristic(g) && fz_leq(f, g) &&
          !t.contains(fz_minus(g, f)))
        c.fail("clan.complement", {fz_str(g), fz_str(f)});
      if (c.live("clan.lattice") &&
          (!t.contains(fz_join(f, g)) || !t.contains(fz_meet(f, g))))
        c.fail("clan.lattice", {fz_str(f), fz_str(g)});
      if (c.live("clan.oplus")) {
        try {
          FuzzySet a = t.dominator(fz_join(f, g));
          if (!t.contains(fz_oplus(f, g, a))) c.fail("clan.oplus", {fz_str(f), fz_str(g)});
        } catch (const std::invalid_argument&) {
        }
      }
    }
  }

  for (std::size_t w = 0; w < t.omega() && c.live("clan.attains_one"); ++w) {
    bool hit = false;
    for (const FuzzySet& f : pool)
      if (t.contains(f) && f.values[w] == Rational(1)) {
        hit = true;
        break;
      }
    if (!hit) c.fail("clan.attains_one", {"point " + std::to_string(w)});
  }

  AxiomReport rep;
  rep.exhaustive = covers_members(t, pool);
  rep.checks = c.checks;
  return rep;
}

AxiomReport tribe_audit(const Tribe& t, const ProbeOptions& opts) {
  std::vector<FuzzySet> pool = probe_pool(t, std::max<std::size_t>(24, opts.extra_samples * 4));
  std::vector<FuzzySet> live;
  for (const FuzzySet& f : pool)
    if (t.contains(f)) live.push_back(f);

  Checker c;
  c.at("tribe.countable_oplus");
  c.at("tribe.cap_independent");
  c.at("tribe.pointwise_inf");
  c.at("tribe.sup_rule");

  for (const FuzzySet& f : live) {
    for (const FuzzySet& g : live) {
      FuzzySet jn = fz_join(f, g);
      FuzzySet a;
      try {
        a = t.dominator(jn);
      } catch (const std::invalid_argument&) {
        continue;
      }
      std::vector<FuzzySet> seq = {f, g, f};  // (f, g, f, 0, 0, ...)
      FuzzySet sum = countable_oplus(seq, a);
      if (c.live("tribe.countable_oplus") && !t.contains(sum))
        c.fail("tribe.countable_oplus", {fz_str(f), fz_str(g)});
      if (c.live("tribe.cap_independent"))
        for (const FuzzySet& bigger : live)
          if (fz_is_characteristic(bigger) && fz_leq(a, bigger) &&
              countable_oplus(seq, bigger) != sum) {
            c.fail("tribe.cap_independent", {fz_str(f), fz_str(g), fz_str(bigger)});
            break;
          }
      FuzzySet inf = fz_meet(f, g);
      if (c.live("tribe.pointwise_inf")) {
        bool pointwise = true;
        for (std::size_t i = 0; i < inf.values.size(); ++i)
          pointwise = pointwise && inf.values[i] == Rational::min(f.values[i], g.values[i]);
        if (!pointwise || !t.contains(inf)) c.fail("tribe.pointwise_inf", {fz_str(f), fz_str(g)});
      }
      if (c.live("tribe.sup_rule")) {
        bool pointwise = true;
        for (std::size_t i = 0; i < jn.values.size(); ++i)
          pointwise = pointwise && jn.values[i] == Rational::max(f.values[i], g.values[i]);
        if (!pointwise || !t.contains(jn)) c.fail("tribe.sup_rule", {fz_str(f), fz_str(g)});
      }
    }
  }

  AxiomReport rep;
  rep.exhaustive = covers_members(t, pool);
  rep.checks = c.checks;
  return rep;
}

AxiomReport n_set_calculus(const Tribe& t, const ProbeOptions& opts) {
  std::vector<FuzzySet> pool = probe_pool(t, std::max<std::size_t>(24, opts.extra_samples * 4));
  std::vector<FuzzySet> live;
  for (const FuzzySet& f : pool)
    if (t.contains(f)) live.push_back(f);

  Checker c;
  c.at("nset.oplus_union");
  c.at("nset.star");
  c.at("nset.star_sum");
  c.at("nset.symmetric_difference");
  c.at("nset.monotone");
  c.at("nset.odot");

  for (const FuzzySet& f : live)
    for (const FuzzySet& g : live) {
      FuzzySet a;
      try {
        a = t.dominator(fz_join(f, g));
      } catch (const std::invalid_argument&) {
        continue;
      }
      if (c.live("nset.oplus_union") &&
          n_set(fz_oplus(f, g, a)) != set_union(n_set(f), n_set(g)))
        c.fail("nset.oplus_union", {fz_str(f), fz_str(g)});

      FuzzySet fg = fz_star(f, g), gf = fz_star(g, f);
      std::vector<std::uint32_t> strict;
      for (std::size_t i = 0; i < f.values.size(); ++i)
        if (g.values[i] < f.values[i]) strict.push_back(static_cast<std::uint32_t>(i));
      if (c.live("nset.star") && n_set(fg) != strict)
        c.fail("nset.star", {fz_str(f), fz_str(g)});

      FuzzySet both = fz_oplus(fg, gf, a);
      bool plain = true;
      for (std::size_t i = 0; i < both.values.size(); ++i)
        plain = plain && both.values[i] == fg.values[i] + gf.values[i];
      if (c.live("nset.star_sum") && !plain) c.fail("nset.star_sum", {fz_str(f), fz_str(g)});
      if (c.live("nset.symmetric_difference") && n_set(both) != n_set_between(f, g))
        c.fail("nset.symmetric_difference", {fz_str(f), fz_str(g)});

      if (c.live("nset.monotone") && fz_leq(f, g)) {
        std::vector<std::uint32_t> nf = n_set(f), ng = n_set(g);
        if (!std::includes(ng.begin(), ng.end(), nf.begin(), nf.end()))
          c.fail("nset.monotone", {fz_str(f), fz_str(g)});
      }

      std::vector<std::uint32_t> excess;
      for (std::size_t i = 0; i < f.values.size(); ++i)
        if (Rational(1) < f.values[i] + g.values[i]) excess.push_back(static_cast<std::uint32_t>(i));
      if (c.live("nset.odot") && n_set(fz_odot(f, g, a)) != excess)
        c.fail("nset.odot", {fz_str(f), fz_str(g)});
    }

  AxiomReport rep;
  rep.exhaustive = covers_members(t, pool);
  rep.checks = c.checks;
  return rep;
}

Element LsWitness::h(const FuzzySet& f) const {
  for (std::size_t i = 0; i < hat.size(); ++i)
    if (hat[i] == f) return algebra->element(i);
  throw std::invalid_argument("h: the fuzzy set matches no element of " + algebra->name());
}

LsWitness ls_construct(const std::shared_ptr<const FiniteAlgebra>& m) {
  if (!m) throw std::invalid_argument("ls_construct: null algebra");
  LsWitness w;
  w.algebra = m;
  StateList st = state_morphisms(m);
  w.states = st.states;
  w.omega = st.states.size();
  for (std::size_t i = 0; i < m->size(); ++i) {
    FuzzySet f;
    f.values.reserve(w.omega);
    for (const StateMorphism& s : w.states) f.values.push_back(s.value(*m, m->element(i)));
    w.hat.push_back(f);
  }
  for (std::size_t i = 0; i < w.hat.size(); ++i)
    for (std::size_t j = i + 1; j < w.hat.size(); ++j)
      if (w.hat[i] == w.hat[j])
        throw ConsistencyError("ls_construct: hat map is not injective on " + m->name());
  w.tribe = Tribe::hat_image(m);
  w.note =
      "the state space of " + m->name() +
      " is finite and discrete, so meager sets are empty and f ~ x collapses to f = hat x";

  const std::size_t n = m->size();
  for (std::size_t i = 0; i < n; ++i)
    if (w.h(w.hat[i]) != m->element(i))
      throw ConsistencyError("ls_construct: h does not invert the hat map");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Element x = m->element(i), y = m->element(j);
      Element cv = m->idempotent_cover(m->join(x, y));
      const FuzzySet& cap = w.hat[m->index_of(cv)];
      bool ok = w.hat[m->index_of(m->oplus(x, y))] == fz_oplus(w.hat[i], w.hat[j], cap) &&
                w.hat[m->index_of(m->join(x, y))] == fz_join(w.hat[i], w.hat[j]) &&
                w.hat[m->index_of(m->meet(x, y))] == fz_meet(w.hat[i], w.hat[j]);
      if (ok && m->leq(x, cv))
        ok = w.hat[m->index_of(m->lambda(cv, x))] == fz_minus(cap, w.hat[i]);
      if (!ok)
        throw ConsistencyError("ls_construct: the hat map fails a homomorphism law at " +
                               m->format(x) + ", " + m->format(y));
    }

  // sigma shadow: finite suprema pass through h.
  const std::size_t stride = n > 12 ? n / 12 + 1 : 1;
  for (std::size_t i = 0; i < n; i += stride)
    for (std::size_t j = 0; j < n; j += stride)
      for (std::size_t k = 0; k < n; k += stride) {
        Element x = m->join(m->join(m->element(i), m->element(j)), m->element(k));
        FuzzySet f = fz_join(fz_join(w.hat[i], w.hat[j]), w.hat[k]);
        if (w.h(f) != x)
          throw ConsistencyError("ls_construct: h misses a finite supremum on " + m->name());
      }

  if (!clan_audit(w.tribe).ok() || !tribe_audit(w.tribe).ok() || !n_set_calculus(w.tribe).ok())
    throw ConsistencyError("ls_construct: the hat image fails a tribe audit on " + m->name());
  return w;
}

FuzzySet LsQuotient::apply(const FuzzySet& f) const {
  check_size(f, omega, "LsQuotient::apply");
  FuzzySet out;
  out.values.reserve(keep.size());
  for (std::uint32_t p : keep) out.values.push_back(f.values[p]);
  return out;
}

bool LsQuotient::in_kernel(const FuzzySet& f) const {
  check_size(f, omega, "LsQuotient::in_kernel");
  for (std::uint32_t p : keep)
    if (f.values[p] != Rational(0)) return false;
  return true;
}

LsQuotient ls_quotient_example(std::size_t omega, std::vector<std::uint32_t> keep) {
  if (omega == 0) throw std::invalid_argument("ls_quotient_example: empty domain");
  if (keep.empty()) throw std::invalid_argument("ls_quotient_example: keep must be nonempty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.back() >= omega)
    throw std::invalid_argument("ls_quotient_example: keep points must lie in the domain");

  LsQuotient q;
  q.omega = omega;
  q.keep = keep;
  q.source = Tribe::all_rational(omega);
  q.image = Tribe::all_rational(keep.size());
  {
    std::string pts;
    for (std::uint32_t p : keep) pts += (pts.empty() ? "" : ",") + std::to_string(p);
    q.kernel = "functions vanishing on {" + pts + "}";
  }

  std::vector<std::uint32_t> dropped;
  for (std::uint32_t p = 0; p < omega; ++p)
    if (!std::binary_search(keep.begin(), keep.end(), p)) dropped.push_back(p);

  Checker c;
  c.at("quotient.zero");
  c.at("quotient.oplus");
  c.at("quotient.lattice");
  c.at("quotient.star");
  c.at("quotient.countable");
  c.at("quotient.surjective");
  c.at("quotient.kernel");

  if (q.apply(fz_zero(omega)) != fz_zero(keep.size())) c.fail("quotient.zero", {});

  std::vector<FuzzySet> pool = probe_pool(q.source, 24);
  for (const FuzzySet& f : pool)
    for (const FuzzySet& g : pool) {
      FuzzySet a = q.source.dominator(fz_join(f, g));
      FuzzySet fa = q.apply(f), ga = q.apply(g), aa = q.apply(a);
      FuzzySet wide = q.source.dominator(fz_full(omega));  // whole-domain cap
      if (c.live("quotient.oplus") &&
          q.apply(fz_oplus(f, g, wide)) != fz_oplus(fa, ga, q.apply(wide)))
        c.fail("quotient.oplus", {fz_str(f), fz_str(g)});
      if (c.live("quotient.lattice") &&
          (q.apply(fz_join(f, g)) != fz_join(fa, ga) || q.apply(fz_meet(f, g)) != fz_meet(fa, ga)))
        c.fail("quotient.lattice", {fz_str(f), fz_str(g)});
      if (c.live("quotient.star") && q.apply(fz_star(f, g)) != fz_star(fa, ga))
        c.fail("quotient.star", {fz_str(f), fz_str(g)});
      if (c.live("quotient.countable") &&
          q.apply(countable_oplus({f, g, f}, a)) != countable_oplus({fa, ga, fa}, aa))
        c.fail("quotient.countable", {fz_str(f), fz_str(g)});
    }

  for (const FuzzySet& g : q.image.generators()) {
    FuzzySet lift = fz_zero(omega);
    for (std::size_t t = 0; t < keep.size(); ++t) lift.values[keep[t]] = g.values[t];
    if (!(q.source.contains(lift) && q.apply(lift) == g)) {
      c.fail("quotient.surjective", {fz_str(g)});
      break;
    }
  }

  {
    FuzzySet chi_dropped = fz_characteristic(omega, dropped);
    bool ok = q.in_kernel(chi_dropped) && q.apply(chi_dropped) == fz_zero(keep.size());
    FuzzySet cap = q.source.dominator(chi_dropped);
    ok = ok && q.in_kernel(countable_oplus({chi_dropped, chi_dropped}, cap));
    for (const FuzzySet& f : pool)
      ok = ok && q.in_kernel(fz_meet(f, chi_dropped));
    if (!ok) c.fail("quotient.kernel", {fz_str(chi_dropped)});
  }

  q.audit.exhaustive = false;
  q.audit.checks = c.checks;
  if (!q.audit.ok())
    throw ConsistencyError("ls_quotient_example: restriction failed a homomorphism law");
  return q;
}

SigmaRing sigma_ring_extract(const LsWitness& w) {
  if (w.omega > 16)
    throw std::invalid_argument("sigma_ring_extract: domain too large to enumerate");
  SigmaRing r;
  for (std::size_t mask = 0; mask < (std::size_t{1} << w.omega); ++mask) {
    std::vector<std::uint32_t> a;
    for (std::uint32_t p = 0; p < w.omega; ++p)
      if (mask & (std::size_t{1} << p)) a.push_back(p);
    if (w.tribe.contains(fz_characteristic(w.omega, a))) r.sets.push_back(a);
  }
  std::sort(r.sets.begin(), r.sets.end(),
            [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  for (const auto& a : r.sets) r.images.push_back(w.h(fz_characteristic(w.omega, a)));

  auto find_set = [&](const std::vector<std::uint32_t>& a) {
    return std::find(r.sets.begin(), r.sets.end(), a);
  };

  Checker c;
  c.at("ring.empty");
  c.at("ring.union");
  c.at("ring.difference");
  c.at("ring.countable_union");
  c.at("ring.hom");
  c.at("ring.idempotent");
  c.at("ring.surjective");

  if (r.sets.empty() || !r.sets.front().empty()) c.fail("ring.empty", {});

  const Algebra& alg = *w.algebra;
  for (std::size_t i = 0; i < r.sets.size(); ++i) {
    if (c.live("ring.idempotent") && !alg.is_idempotent(r.images[i]))
      c.fail("ring.idempotent", {alg.format(r.images[i])});
    for (std::size_t j = 0; j < r.sets.size(); ++j) {
      std::vector<std::uint32_t> uni = set_union(r.sets[i], r.sets[j]);
      std::vector<std::uint32_t> diff;
      std::set_difference(r.sets[i].begin(), r.sets[i].end(), r.sets[j].begin(), r.sets[j].end(),
                          std::back_inserter(diff));
      auto at_union = find_set(uni);
      if (c.live("ring.union") && at_union == r.sets.end()) c.fail("ring.union", {});
      if (c.live("ring.difference") && find_set(diff) == r.sets.end())
        c.fail("ring.difference", {});
      if (c.live("ring.hom") && at_union != r.sets.end() &&
          r.images[static_cast<std::size_t>(at_union - r.sets.begin())] !=
              alg.join(r.images[i], r.images[j]))
        c.fail("ring.hom", {alg.format(r.images[i]), alg.format(r.images[j])});
      for (std::size_t k = 0; k < r.sets.size() && c.live("ring.countable_union"); k += 2)
        if (find_set(set_union(uni, r.sets[k])) == r.sets.end())
          c.fail("ring.countable_union", {});
    }
  }

  std::vector<Element> idems = idempotents(alg);
  if (idems.size() != r.images.size()) {
    c.fail("ring.surjective", {std::to_string(idems.size()), std::to_string(r.images.size())});
  } else {
    for (const Element& e : idems)
      if (std::find(r.images.begin(), r.images.end(), e) == r.images.end()) {
        c.fail("ring.surjective", {alg.format(e)});
        break;
      }
  }

  r.audit.exhaustive = true;
  r.audit.checks = c.checks;
  if (!r.audit.ok())
    throw ConsistencyError("sigma_ring_extract: the characteristic slice is not a ring image");
  return r;
}

}  // namespace emv

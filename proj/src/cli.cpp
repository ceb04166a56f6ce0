#include "emv/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "emv/backends.hpp"
#include "emv/core_ops.hpp"
#include "emv/dsl.hpp"
#include "emv/error.hpp"
#include "emv/ideals.hpp"
#include "emv/represent.hpp"
#include "emv/spectra.hpp"
#include "emv/states.hpp"
#include "emv/tribes.hpp"

namespace emv {
namespace {

using ojson = nlohmann::ordered_json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Invocation {
  std::string command;
  std::string file;
  std::string algebra_name;
  std::string tribe_name;
  std::size_t horizon = 64;
  std::uint32_t support = 8;
  std::uint64_t seed = 12345;
  bool strict = false;
  bool timing = false;
  std::string target;
  std::vector<std::string> family;
};

struct Selected {
  AlgebraPtr alg;
  std::shared_ptr<const FiniteAlgebra> fin;
  std::shared_ptr<const FinSupportAlgebra> fs;
  std::string name;
};

struct Outcome {
  ojson payload = ojson::object();
  ojson verdicts = ojson::array();
  bool undecided = false;

  void verdict(const std::string& law, bool pass, std::vector<std::string> witness = {}) {
    ojson j;
    j["law"] = law;
    j["pass"] = pass;
    j["witness"] = witness;
    verdicts.push_back(std::move(j));
  }
  void add_checks(const std::vector<LawCheck>& checks) {
    for (const LawCheck& c : checks) verdict(c.law, c.pass, c.witness);
  }
};

std::string fnv_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ojson ideal_list_json(const Algebra& alg, const IdealList& il) {
  ojson arr = ojson::array();
  for (const Ideal& id : il.ideals) {
    ojson j;
    j["describe"] = id.describe(alg);
    j["proper"] = id.proper;
    j["maximal"] = id.maximal;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<std::string> rational_strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const Rational& r : v) out.push_back(r.str());
  return out;
}

ojson convergence_json(const WeakConvergenceReport& rep) {
  ojson j;
  j["all_match"] = rep.all_match;
  j["limit_is_state_morphism"] = rep.limit_is_state_morphism;
  j["limit_defects"] = rep.limit_defects;
  ojson rows = ojson::array();
  for (const ProbeVerdict& v : rep.probes) {
    ojson r;
    r["probe"] = v.probe;
    r["stabilized"] = v.stabilized;
    r["matches_limit"] = v.matches_limit;
    r["tail"] = v.tail_value.str();
    r["stabilized_at"] = v.stabilized_at;
    rows.push_back(std::move(r));
  }
  j["probes"] = std::move(rows);
  return j;
}

// --target syntax per backend: a label for table backends, a set literal
// {i,j,...} for finite-support ones, top for the Chang algebra.
Element resolve_element(const Selected& sel, const std::string& spec) {
  if (sel.fin) {
    auto idx = sel.fin->element_by_label(spec);
    if (!idx) throw InputError("no element labelled '" + spec + "' in " + sel.alg->name());
    return sel.fin->element(*idx);
  }
  if (sel.fs) {
    if (spec.size() < 2 || spec.front() != '{' || spec.back() != '}')
      throw InputError("finite-support targets are set literals like {0,2}");
    std::vector<std::uint32_t> pts;
    std::string body = spec.substr(1, spec.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("bad set literal '" + spec + "'");
      pts.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return sel.fs->from_set(pts);
  }
  if (spec == "top") return sel.alg->top();
  if (spec == "0" || spec == "zero") return sel.alg->zero();
  throw InputError("targets on " + sel.alg->name() + " are 'top' or 'zero'");
}

void cmd_check(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  AxiomReport rep = check_emv_axioms(*sel.alg, p);
  o.payload["exhaustive"] = rep.exhaustive;
  o.add_checks(rep.checks);
}

void cmd_ideals(Outcome& o, const Selected& sel, const ProbeOptions& p, bool maximal_only) {
  IdealList il = maximal_only ? maximal_ideals(*sel.alg, p) : enumerate_ideals(*sel.alg, p);
  o.payload["symbolic"] = il.symbolic;
  if (!il.note.empty()) o.payload["note"] = il.note;
  o.payload["count"] = il.ideals.size();
  o.payload["ideals"] = ideal_list_json(*sel.alg, il);
}

void cmd_radical(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  RadicalReport r = radical(*sel.alg, p);
  o.payload["radical"] = r.via_formula.describe(*sel.alg);
  o.payload["semisimple"] = r.semisimple;
  o.verdict("radical.two_computations_agree", r.agree);
}

void cmd_states(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  StateList sl = state_morphisms(sel.alg, p);
  o.payload["symbolic"] = sl.symbolic;
  if (!sl.note.empty()) o.payload["note"] = sl.note;
  o.payload["count"] = sl.states.size();
  ojson arr = ojson::array();
  for (const StateMorphism& s : sl.states) {
    ojson j;
    j["rule"] = s.rule;
    if (s.kind == StateMorphism::Kind::FiniteTable) j["values"] = rational_strings(s.table);
    arr.push_back(std::move(j));
  }
  o.payload["states"] = std::move(arr);
  IdealList mx = maximal_ideals(*sel.alg, p);
  o.verdict("states.match_maximal_ideals", sl.states.size() == mx.ideals.size(),
            {std::to_string(sl.states.size()), std::to_string(mx.ideals.size())});
}

void cmd_filters(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  FilterList fl = maximal_filters(*sel.alg, p);
  o.payload["symbolic"] = fl.symbolic;
  if (!fl.note.empty()) o.payload["note"] = fl.note;
  o.payload["count"] = fl.filters.size();
  ojson arr = ojson::array();
  for (const Filter& f : fl.filters) {
    ojson j;
    j["describe"] = f.describe(*sel.alg);
    j["proper"] = f.proper;
    j["maximal"] = f.maximal;
    arr.push_back(std::move(j));
  }
  o.payload["filters"] = std::move(arr);
  IdealList mx = maximal_ideals(*sel.alg, p);
  o.verdict("filters.match_maximal_ideals", fl.filters.size() == mx.ideals.size(),
            {std::to_string(fl.filters.size()), std::to_string(mx.ideals.size())});
}

void cmd_separate(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  if (!sel.fin) throw InputError("separate needs a finite backend");
  StateList sl = state_morphisms(sel.alg, p);
  const std::size_t k = sl.states.size();
  if (k == 0) {
    o.payload["pairs"] = 0;
    o.payload["note"] = "no state-morphisms to separate";
    return;
  }
  bool search_ok = true, dual_ok = true, recipe_ok = true;
  std::size_t pairs = 0;
  ojson wits = ojson::array();
  for (std::size_t t = 0; t < k; ++t) {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < k; ++i)
      if (i != t) others.push_back(i);
    std::vector<std::vector<std::size_t>> excludes;
    if (k <= 6) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
        std::vector<std::size_t> x;
        for (std::size_t b = 0; b < others.size(); ++b)
          if (mask & (std::size_t{1} << b)) x.push_back(others[b]);
        excludes.push_back(std::move(x));
      }
    } else {
      excludes.push_back({});
      for (std::size_t i : others) excludes.push_back({i});
      excludes.push_back(others);
    }
    for (const auto& ex : excludes) {
      std::vector<StateMorphism> x_set;
      for (std::size_t i : ex) x_set.push_back(sl.states[i]);
      ++pairs;
      std::string found, dual_found;
      try {
        found = sel.alg->format(find_separating_element(*sel.alg, x_set, sl.states[t]));
        find_separating_element_recipe(*sel.alg, x_set, sl.states[t]);
      } catch (const ConsistencyError&) {
        search_ok = false;
      }
      try {
        dual_found =
            sel.alg->format(find_dual_separating_element(*sel.alg, x_set, sl.states[t]));
        find_dual_separating_element_recipe(*sel.alg, x_set, sl.states[t]);
      } catch (const ConsistencyError&) {
        dual_ok = false;
      }
      if (wits.size() < 5 && !found.empty()) {
        ojson w;
        w["target"] = sl.states[t].rule;
        ojson exr = ojson::array();
        for (std::size_t i : ex) exr.push_back(sl.states[i].rule);
        w["excluded"] = std::move(exr);
        w["element"] = found;
        w["dual_element"] = dual_found;
        wits.push_back(std::move(w));
      }
    }
  }
  recipe_ok = search_ok && dual_ok;  // the recipe paths audit themselves
  o.payload["pairs"] = pairs;
  o.payload["witnesses"] = std::move(wits);
  o.verdict("separate.search", search_ok);
  o.verdict("separate.dual", dual_ok);
  o.verdict("separate.recipe", recipe_ok);
}

void cmd_represent(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  RepresentResult rr = represent(sel.alg);
  o.payload["already_mv"] = rr.already_mv;
  if (rr.already_mv) {
    o.payload["note"] = "the base has a top and is its own representation";
    return;
  }
  const RepresentedMv& n = *rr.algebra;
  o.payload["name"] = n.name();
  NIdealList nl = maxideal_space_of_n(n, p);
  ojson ids = ojson::array();
  for (const NIdeal& id : nl.ideals) ids.push_back(id.describe());
  o.payload["maximal_ideals"] = std::move(ids);
  if (!nl.note.empty()) o.payload["note"] = nl.note;
  ojson states = ojson::array();
  for (const ExtendedState& s : extended_state_catalog(n, p)) states.push_back(s.rule);
  o.payload["extended_states"] = std::move(states);
  o.add_checks(audit_representation(n, p).checks);
}

void cmd_spectrum(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  CompactnessReport cr = compactness_shadow(*sel.alg);
  o.payload["has_top"] = cr.has_top;
  o.payload["spectrum_finite"] = cr.spectrum_finite;
  if (cr.spectrum_finite) o.payload["points"] = cr.spectrum_points;
  o.payload["note"] = cr.note;
  ojson sets = ojson::array();
  std::vector<Element> pool = probe_elements(*sel.alg, p);
  for (std::size_t i = 0; i < pool.size() && i < 10; ++i) {
    BaseSet b = base_set(*sel.alg, pool[i]);
    ojson j;
    j["element"] = sel.alg->format(pool[i]);
    j["set"] = b.points;
    sets.push_back(std::move(j));
  }
  o.payload["base_sets"] = std::move(sets);
  o.add_checks(verify_base_identities(*sel.alg, p).checks);
  o.add_checks(verify_difference_laws(*sel.alg, p).checks);
  o.verdict("spectrum.compactness_equivalence", cr.equivalence_holds);
}

void cmd_hulls(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  std::vector<Element> pool = probe_elements(*sel.alg, p);
  if (pool.size() > 12) pool.resize(12);
  bool bounds_ok = true, extremal_ok = true;
  ojson rows = ojson::array();
  std::vector<Element> idems;
  if (sel.fin) idems = idempotents(*sel.alg);
  for (const Element& x : pool) {
    Element up = sel.alg->upper_idempotent_hull(x);
    Element lo = sel.alg->lower_idempotent_hull(x);
    ojson j;
    j["element"] = sel.alg->format(x);
    j["upper"] = sel.alg->format(up);
    j["lower"] = sel.alg->format(lo);
    rows.push_back(std::move(j));
    if (!(sel.alg->leq(lo, x) && sel.alg->leq(x, up) && sel.alg->is_idempotent(up) &&
          sel.alg->is_idempotent(lo)))
      bounds_ok = false;
    if (sel.fin) {
      Element expect_up = sel.alg->top();
      for (const Element& a : idems)
        if (sel.alg->leq(x, a)) expect_up = sel.alg->meet(expect_up, a);
      Element expect_lo = sel.alg->zero();
      for (const Element& a : idems)
        if (sel.alg->leq(a, x)) expect_lo = sel.alg->join(expect_lo, a);
      if (!(up == expect_up && lo == expect_lo)) extremal_ok = false;
    } else if (sel.fs) {
      if (!(up == sel.fs->from_set(sel.fs->support(x)))) extremal_ok = false;
    }
  }
  o.payload["hulls"] = std::move(rows);
  o.verdict("hulls.bounds", bounds_ok);
  o.verdict("hulls.extremal", extremal_ok);
}

void cmd_sup_criterion(Outcome& o, const Selected& sel, const Invocation& inv,
                       const ProbeOptions& p) {
  Element x = sel.alg->zero();
  std::vector<Element> fam;
  if (inv.target.empty()) {
    if (sel.fs) {
      x = sel.fs->from_set({0, 1, 2});
      for (std::uint32_t i : {0u, 1u, 2u}) fam.push_back(sel.fs->from_set({i}));
    } else {
      x = sel.alg->top();
      if (sel.fin) {
        fam = idempotents(*sel.alg);
      } else {
        fam.push_back(x);
      }
    }
  } else {
    x = resolve_element(sel, inv.target);
    if (!inv.family.empty()) {
      for (const std::string& spec : inv.family) fam.push_back(resolve_element(sel, spec));
    } else if (sel.fin) {
      for (const Element& a : idempotents(*sel.alg))
        if (sel.alg->leq(a, x)) fam.push_back(a);
    } else if (sel.fs) {
      for (std::uint32_t i : sel.fs->support(x)) fam.push_back(sel.fs->from_set({i}));
      if (fam.empty()) fam.push_back(sel.alg->zero());
    } else {
      fam.push_back(x);
    }
  }
  o.payload["target"] = sel.alg->format(x);
  ojson fj = ojson::array();
  for (const Element& e : fam) fj.push_back(sel.alg->format(e));
  o.payload["family"] = std::move(fj);
  SupCriterionReport r = sup_criterion(*sel.alg, x, ElementSequence::finite(fam), p);
  const char* verdict = r.verdict == SupVerdict::Holds    ? "holds"
                        : r.verdict == SupVerdict::Fails  ? "fails"
                                                          : "undecided";
  o.payload["verdict"] = verdict;
  o.payload["sup_matches"] = r.sup_matches;
  o.payload["difference_empty"] = r.difference_empty;
  o.payload["difference"] = r.difference;
  o.payload["note"] = r.note;
  if (r.verdict == SupVerdict::Undecided) o.undecided = true;
  o.verdict("sup.biconditional", true);
}

void cmd_ls_witness(Outcome& o, const Selected& sel, const ProbeOptions&) {
  if (!sel.fin) throw InputError("ls-witness needs a finite backend");
  LsWitness w = ls_construct(sel.fin);
  o.payload["omega"] = w.omega;
  o.payload["note"] = w.note;
  ojson states = ojson::array();
  for (const StateMorphism& s : w.states) states.push_back(s.rule);
  o.payload["states"] = std::move(states);
  ojson hats = ojson::array();
  for (std::size_t i = 0; i < w.hat.size(); ++i) {
    ojson j;
    j["element"] = sel.fin->format(sel.fin->element(i));
    j["values"] = rational_strings(w.hat[i].values);
    hats.push_back(std::move(j));
  }
  o.payload["hat"] = std::move(hats);
  o.verdict("ls.construction_audits", true);  // ls_construct throws on any defect
}

void cmd_sigma_ring(Outcome& o, const Selected& sel, const ProbeOptions&) {
  if (!sel.fin) throw InputError("sigma-ring needs a finite backend");
  LsWitness w = ls_construct(sel.fin);
  SigmaRing r = sigma_ring_extract(w);
  o.payload["sets"] = r.sets;
  ojson imgs = ojson::array();
  for (const Element& e : r.images) imgs.push_back(sel.fin->format(e));
  o.payload["images"] = std::move(imgs);
  o.add_checks(r.audit.checks);
}

void cmd_tribe_audit(Outcome& o, const Selected& sel, const Document& doc,
                     const Invocation& inv, const ProbeOptions& p) {
  const Statement* ts = nullptr;
  if (!inv.tribe_name.empty()) {
    ts = doc.find(inv.tribe_name);
    if (!ts || ts->kind != Statement::Kind::Tribe)
      throw InputError("no tribe named '" + inv.tribe_name + "'");
  } else {
    ts = doc.first(Statement::Kind::Tribe);
  }
  Tribe t = Tribe::all_zero_one(0);
  if (ts) {
    t = build_tribe(ts->tribe);
    o.payload["source"] = ts->name;
  } else if (sel.fin) {
    t = Tribe::hat_image(sel.fin);
    o.payload["source"] = "hat image of " + sel.name;
  } else {
    throw InputError("no tribe declared and no finite algebra to take a hat image of");
  }
  o.payload["tribe"] = t.describe();
  AxiomReport clan = clan_audit(t, p);
  o.payload["exhaustive"] = clan.exhaustive;
  o.add_checks(clan.checks);
  o.add_checks(tribe_audit(t, p).checks);
  o.add_checks(n_set_calculus(t, p).checks);
}

void cmd_convergence(Outcome& o, const Selected& sel, const ProbeOptions& p) {
  if (!sel.fs) throw InputError("convergence needs a finite-support backend");
  const auto& fs = *sel.fs;
  const long long ord = fs.order();

  std::vector<Element> probes = {fs.zero(), fs.singleton(0, static_cast<std::uint32_t>(ord)),
                                 fs.from_set({0, 1, 2}), fs.singleton(5, 1)};
  std::function<Rational(std::size_t, const Element&)> coord =
      [&fs, ord](std::size_t n, const Element& x) {
        return Rational(fs.level_at(x, static_cast<std::uint32_t>(n)), ord);
      };
  std::function<Rational(const Element&)> zero_limit = [](const Element&) { return Rational(0); };
  WeakConvergenceReport base =
      weak_convergence_check<FinSupportAlgebra, Element>(fs, coord, zero_limit, probes, p.horizon);
  o.payload["base"] = convergence_json(base);

  RepresentResult rr = represent(sel.alg);
  const RepresentedMv& n = *rr.algebra;
  std::vector<NElement> nprobes = {n.zero(), n.direct(fs.singleton(0, static_cast<std::uint32_t>(ord))),
                                   n.direct(fs.from_set({0, 1, 2})),
                                   n.complement_of(fs.singleton(5, 1)), n.top()};
  std::function<Rational(std::size_t, const NElement&)> tilde =
      [&fs, ord](std::size_t k, const NElement& z) {
        Rational ground(fs.level_at(z.base, static_cast<std::uint32_t>(k)), ord);
        return z.complement ? Rational(1) - ground : ground;
      };
  ExtendedState inf = s_infinity(n);
  std::function<Rational(const NElement&)> inf_limit = [&n, inf](const NElement& z) {
    return inf.value(n, z);
  };
  WeakConvergenceReport rep =
      weak_convergence_check<RepresentedMv, NElement>(n, tilde, inf_limit, nprobes, p.horizon);
  o.payload["represented"] = convergence_json(rep);

  o.verdict("convergence.extended_limit_is_state", rep.all_match && rep.limit_is_state_morphism);
  o.verdict("convergence.base_limit_flagged",
            base.all_match && !base.limit_is_state_morphism, base.limit_defects);
}

void dispatch(Outcome& o, const std::string& cmd, const Selected& sel, const Document& doc,
              const Invocation& inv, const ProbeOptions& p) {
  if (cmd != "tribe-audit" && !sel.alg)
    throw InputError("no algebra declared in " + inv.file);
  if (cmd == "check") return cmd_check(o, sel, p);
  if (cmd == "ideals") return cmd_ideals(o, sel, p, false);
  if (cmd == "maximal-ideals") return cmd_ideals(o, sel, p, true);
  if (cmd == "radical") return cmd_radical(o, sel, p);
  if (cmd == "states") return cmd_states(o, sel, p);
  if (cmd == "filters") return cmd_filters(o, sel, p);
  if (cmd == "separate") return cmd_separate(o, sel, p);
  if (cmd == "represent") return cmd_represent(o, sel, p);
  if (cmd == "spectrum") return cmd_spectrum(o, sel, p);
  if (cmd == "hulls") return cmd_hulls(o, sel, p);
  if (cmd == "sup-criterion") return cmd_sup_criterion(o, sel, inv, p);
  if (cmd == "ls-witness") return cmd_ls_witness(o, sel, p);
  if (cmd == "sigma-ring") return cmd_sigma_ring(o, sel, p);
  if (cmd == "tribe-audit") return cmd_tribe_audit(o, sel, doc, inv, p);
  if (cmd == "convergence") return cmd_convergence(o, sel, p);
  throw InputError("unknown command " + cmd);
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult res;
  Invocation inv;

  CLI::App app{"EMV-algebra toolkit: deterministic JSON reports over DSL descriptions"};
  app.require_subcommand(1);
  static const std::vector<std::pair<const char*, const char*>> commands = {
      {"check", "audit the axioms on probes (exhaustive when finite)"},
      {"ideals", "enumerate ideals"},
      {"maximal-ideals", "enumerate maximal ideals"},
      {"radical", "radical by formula and by intersection"},
      {"states", "state-morphism catalog"},
      {"filters", "maximal filter catalog"},
      {"separate", "separating elements for every (set, target) state pair"},
      {"represent", "the representing MV-algebra and its audits"},
      {"spectrum", "hull-kernel base sets and the compactness shadow"},
      {"hulls", "idempotent hulls above and below each probe"},
      {"sup-criterion", "suprema against base-set differences"},
      {"ls-witness", "state-space tribe, hat map and its inverse"},
      {"sigma-ring", "characteristic-function ring against the idempotents"},
      {"tribe-audit", "clan, tribe and N-set laws for a declared tribe"},
      {"convergence", "pointwise state limits, flagged when not a state"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("file", inv.file, "DSL input file")->required();
    sub->add_option("--algebra", inv.algebra_name, "declared algebra to use (default: first)");
    sub->add_option("--tribe", inv.tribe_name, "declared tribe to use (default: first)");
    sub->add_option("--horizon", inv.horizon, "probe horizon")->capture_default_str();
    sub->add_option("--support", inv.support, "support bound for lazy backends")
        ->capture_default_str();
    sub->add_option("--seed", inv.seed, "probe sampling seed")->capture_default_str();
    sub->add_flag("--strict", inv.strict, "treat undecided entries as failures");
    sub->add_flag("--timing", inv.timing, "include wall-clock timing in the report");
    sub->add_option("--target", inv.target, "element for sup-criterion");
    sub->add_option("--family", inv.family, "family member for sup-criterion (repeatable)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out_s, err_s;
    int code = app.exit(e, out_s, err_s);
    res.out = out_s.str();
    res.err = err_s.str();
    res.exit_code = code == 0 ? 0 : 2;
    return res;
  }
  inv.command = app.get_subcommands().front()->get_name();

  std::ifstream in(inv.file, std::ios::binary);
  if (!in) {
    res.err = "cannot read " + inv.file + "\n";
    res.exit_code = 2;
    return res;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Document doc;
  try {
    doc = parse_spec(text);
  } catch (const ParseError& e) {
    res.err = inv.file + ":" + e.diagnostic().str() + "\n";
    res.exit_code = 2;
    return res;
  }

  ProbeOptions p;
  p.horizon = inv.horizon;
  p.support_bound = inv.support;
  p.seed = inv.seed;

  Selected sel;
  const Statement* as = nullptr;
  if (!inv.algebra_name.empty()) {
    as = doc.find(inv.algebra_name);
    if (!as || as->kind != Statement::Kind::Algebra) {
      res.err = "no algebra named '" + inv.algebra_name + "' in " + inv.file + "\n";
      res.exit_code = 2;
      return res;
    }
  } else {
    as = doc.first(Statement::Kind::Algebra);
  }
  if (as) {
    try {
      sel.alg = build_algebra(as->algebra, as->name);
    } catch (const std::invalid_argument& e) {
      res.err = std::string(e.what()) + "\n";
      res.exit_code = 2;
      return res;
    }
    sel.name = as->name;
    sel.fin = std::dynamic_pointer_cast<const FiniteAlgebra>(sel.alg);
    sel.fs = std::dynamic_pointer_cast<const FinSupportAlgebra>(sel.alg);
  }

  Outcome o;
  const auto started = std::chrono::steady_clock::now();
  try {
    dispatch(o, inv.command, sel, doc, inv, p);
  } catch (const InputError& e) {
    res.err = std::string(e.what()) + "\n";
    res.exit_code = 2;
    return res;
  } catch (const ConsistencyError& e) {
    o.verdict("consistency", false, {e.what()});
  } catch (const std::invalid_argument& e) {
    res.err = std::string(e.what()) + "\n";
    res.exit_code = 2;
    return res;
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;

  bool any_fail = false;
  for (const ojson& v : o.verdicts)
    if (!v.at("pass").get<bool>()) any_fail = true;
  res.exit_code = any_fail ? 1 : (inv.strict && o.undecided ? 1 : 0);

  ojson j;
  j["schema"] = 1;
  j["command"] = inv.command;
  j["input"] = {{"file", inv.file}, {"digest", fnv_digest(text)}};
  j["options"] = {{"horizon", inv.horizon}, {"support", inv.support}, {"seed", inv.seed}};
  if (sel.alg) {
    ojson a;
    a["name"] = sel.name;
    a["backend"] = sel.alg->name();
    a["finite"] = sel.alg->is_finite();
    if (sel.alg->is_finite()) a["size"] = sel.alg->size();
    j["algebra"] = std::move(a);
  }
  for (auto& [key, value] : o.payload.items()) j[key] = value;
  j["verdicts"] = std::move(o.verdicts);
  j["exit"] = res.exit_code;
  if (inv.timing)
    j["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  res.out = j.dump(2) + "\n";
  return res;
}

}  // namespace emv

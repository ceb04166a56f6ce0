#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <fstream>

#include "emv/backends.hpp"
#include "emv/cli.hpp"
#include "emv/core_ops.hpp"
#include "emv/dsl.hpp"
#include "emv/error.hpp"
#include "emv/ideals.hpp"
#include "emv/represent.hpp"
#include "emv/spectra.hpp"
#include "emv/states.hpp"
#include "emv/tribes.hpp"

namespace py = pybind11;
using namespace emv;

namespace {

// The C++ API hands out shared_ptr<const T>; pybind holders want non-const.
// Every bound method is const, so the cast cannot enable mutation.
template <typename T>
std::shared_ptr<T> unconst(std::shared_ptr<const T> p) {
  return std::const_pointer_cast<T>(p);
}

ProbeOptions opts_from(std::size_t horizon, std::uint32_t support, std::uint64_t seed) {
  ProbeOptions o;
  o.horizon = horizon;
  o.support_bound = support;
  o.seed = seed;
  return o;
}

py::list report_to_list(const AxiomReport& r) {
  py::list out;
  for (const LawCheck& c : r.checks) {
    py::dict d;
    d["law"] = c.law;
    d["pass"] = c.pass;
    d["witness"] = c.witness;
    out.append(d);
  }
  return out;
}

py::dict state_to_dict(const Algebra& alg, const StateMorphism& s) {
  py::dict d;
  d["rule"] = s.rule;
  if (s.kind == StateMorphism::Kind::FiniteTable)
    d["values"] = s.table;
  else
    d["values"] = py::none();
  d["witness"] = alg.format(s.witness);
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::invalid_argument("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PYBIND11_MODULE(_emvkit, m) {
  m.doc() = "EMV-algebra toolkit: finite and lazy backends, ideals, states, "
            "spectra, the representing MV-algebra and fuzzy-set witnesses";

  py::register_exception<ConsistencyError>(m, "ConsistencyError");

  py::class_<Rational>(m, "Rational")
      .def(py::init<long long>(), py::arg("num"))
      .def(py::init<long long, long long>(), py::arg("num"), py::arg("den"))
      .def_property_readonly("num", &Rational::num)
      .def_property_readonly("den", &Rational::den)
      .def("__str__", &Rational::str)
      .def("__repr__", [](const Rational& r) { return "Rational(" + r.str() + ")"; })
      .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; })
      .def("__lt__", [](const Rational& a, const Rational& b) { return a < b; })
      .def("__le__", [](const Rational& a, const Rational& b) { return a <= b; })
      .def("__hash__",
           [](const Rational& r) { return py::hash(py::make_tuple(r.num(), r.den())); })
      .def("__float__",
           [](const Rational& r) { return static_cast<double>(r.num()) / r.den(); })
      .def("__add__", [](const Rational& a, const Rational& b) { return a + b; })
      .def("__sub__", [](const Rational& a, const Rational& b) { return a - b; })
      .def("__mul__", [](const Rational& a, const Rational& b) { return a * b; })
      .def("oplus1", &Rational::oplus1)
      .def("odot1", &Rational::odot1)
      .def_static("parse", &Rational::parse);

  py::class_<Element>(m, "Element")
      .def("__eq__", [](const Element& a, const Element& b) { return a == b; })
      .def("__ne__", [](const Element& a, const Element& b) { return a != b; })
      .def("__repr__", [](const Element& e) {
        switch (e.kind()) {
          case Element::Kind::Table: return std::string("<table element>");
          case Element::Kind::FinSupport: return std::string("<finite-support element>");
          default: return std::string("<chang element>");
        }
      })
      .def_static("small", [](long long n) { return Element::small(BigInt(n)); }, py::arg("n"))
      .def_static("big", [](long long n) { return Element::big(BigInt(n)); }, py::arg("n"));

  py::class_<Algebra, std::shared_ptr<Algebra>>(m, "Algebra")
      .def_property_readonly("name", &Algebra::name)
      .def_property_readonly("is_finite", &Algebra::is_finite)
      .def_property_readonly("has_top", &Algebra::has_top)
      .def("zero", &Algebra::zero)
      .def("top", &Algebra::top)
      .def("oplus", &Algebra::oplus)
      .def("join", &Algebra::join)
      .def("meet", &Algebra::meet)
      .def("leq", &Algebra::leq)
      .def("is_idempotent", &Algebra::is_idempotent)
      .def("idempotent_cover", &Algebra::idempotent_cover)
      .def("local_complement", &Algebra::lambda, py::arg("bound"), py::arg("x"))
      .def("upper_hull", &Algebra::upper_idempotent_hull)
      .def("lower_hull", &Algebra::lower_idempotent_hull)
      .def("odot", [](const Algebra& a, const Element& x, const Element& y) {
        return odot(a, x, y);
      })
      .def("ominus", [](const Algebra& a, const Element& x, const Element& y) {
        return ominus(a, x, y);
      })
      .def("nscale", [](const Algebra& a, std::uint64_t n, const Element& x) {
        return nscale(a, n, x);
      })
      .def("format", &Algebra::format)
      .def("__repr__", [](const Algebra& a) { return "<algebra " + a.name() + ">"; });

  py::class_<FiniteAlgebra, Algebra, std::shared_ptr<FiniteAlgebra>>(m, "FiniteAlgebra")
      .def_property_readonly("size", &FiniteAlgebra::size)
      .def_property_readonly("labels", &FiniteAlgebra::labels)
      .def_property_readonly("idempotent_indices", &FiniteAlgebra::idempotent_indices)
      .def("element", &FiniteAlgebra::element, py::arg("index"))
      .def("by_label",
           [](const FiniteAlgebra& a, const std::string& label) {
             auto i = a.element_by_label(label);
             if (!i) throw py::key_error("no element labelled '" + label + "'");
             return a.element(*i);
           },
           py::arg("label"))
      .def("interval", [](const FiniteAlgebra& a, const Element& e) {
        return unconst(a.interval(e));
      }, py::arg("bound"));

  py::class_<FinSupportAlgebra, Algebra, std::shared_ptr<FinSupportAlgebra>>(m,
      "FinSupportAlgebra")
      .def_property_readonly("order", &FinSupportAlgebra::order)
      .def("make_element",
           [](const FinSupportAlgebra& a, const std::map<std::uint32_t, int>& entries) {
             return a.make_element({entries.begin(), entries.end()});
           },
           py::arg("entries"))
      .def("from_set", &FinSupportAlgebra::from_set, py::arg("indices"))
      .def("singleton", &FinSupportAlgebra::singleton, py::arg("index"), py::arg("level"))
      .def("support", &FinSupportAlgebra::support)
      .def("level_at", &FinSupportAlgebra::level_at, py::arg("x"), py::arg("index"));

  py::class_<ChangAlgebra, Algebra, std::shared_ptr<ChangAlgebra>>(m, "ChangAlgebra")
      .def_static("small", [](long long n) { return Element::small(BigInt(n)); })
      .def_static("big", [](long long n) { return Element::big(BigInt(n)); });

  m.def("chain", [](std::size_t n) { return unconst(FiniteAlgebra::chain(n)); },
        py::arg("n"), "MV-chain 0 < 1 < ... < n");
  m.def("product",
        [](std::shared_ptr<FiniteAlgebra> a, std::shared_ptr<FiniteAlgebra> b) {
          return unconst(FiniteAlgebra::product(a, b));
        },
        py::arg("a"), py::arg("b"));
  m.def("from_tables",
        [](std::string name, std::vector<std::string> labels, std::size_t zero,
           std::vector<std::vector<std::size_t>> oplus,
           std::optional<std::vector<std::vector<std::size_t>>> join,
           std::optional<std::vector<std::pair<std::size_t, std::size_t>>> le) {
          return unconst(FiniteAlgebra::from_tables(std::move(name), std::move(labels), zero,
                                                    std::move(oplus), std::move(join),
                                                    std::move(le)));
        },
        py::arg("name"), py::arg("labels"), py::arg("zero"), py::arg("oplus"),
        py::arg("join") = py::none(), py::arg("le") = py::none());
  m.def("finsupport", [](int order) { return unconst(FinSupportAlgebra::make(order)); },
        py::arg("order"), "Finite-support maps into chain(order); no top element");
  m.def("finite_sets", []() { return unconst(FinSupportAlgebra::make(1)); },
        "Finite subsets of the natural numbers");
  m.def("chang", []() { return unconst(ChangAlgebra::make()); },
        "Chang's perfect MV-algebra; not semisimple");

  m.def("check_axioms",
        [](std::shared_ptr<Algebra> a, std::size_t horizon, std::uint32_t support,
           std::uint64_t seed) {
          AxiomReport r = check_emv_axioms(*a, opts_from(horizon, support, seed));
          py::dict d;
          d["ok"] = r.ok();
          d["exhaustive"] = r.exhaustive;
          d["checks"] = report_to_list(r);
          return d;
        },
        py::arg("algebra"), py::arg("horizon") = 64, py::arg("support") = 8,
        py::arg("seed") = 12345);
  m.def("idempotents",
        [](std::shared_ptr<Algebra> a) { return idempotents(*a); }, py::arg("algebra"));
  m.def("probe_elements",
        [](std::shared_ptr<Algebra> a, std::size_t horizon, std::uint32_t support,
           std::uint64_t seed) {
          return probe_elements(*a, opts_from(horizon, support, seed));
        },
        py::arg("algebra"), py::arg("horizon") = 64, py::arg("support") = 8,
        py::arg("seed") = 12345);

  m.def("maximal_ideals",
        [](std::shared_ptr<Algebra> a, std::uint32_t support) {
          ProbeOptions o;
          o.support_bound = support;
          IdealList il = maximal_ideals(*a, o);
          py::list out;
          for (const Ideal& i : il.ideals) out.append(i.describe(*a));
          return out;
        },
        py::arg("algebra"), py::arg("support") = 8);
  m.def("radical",
        [](std::shared_ptr<Algebra> a) {
          RadicalReport r = radical(*a);
          py::dict d;
          d["radical"] = r.via_formula.describe(*a);
          d["semisimple"] = r.semisimple;
          d["agree"] = r.agree;
          return d;
        },
        py::arg("algebra"));

  m.def("state_morphisms",
        [](std::shared_ptr<Algebra> a, std::uint32_t support) {
          ProbeOptions o;
          o.support_bound = support;
          StateList sl = state_morphisms(a, o);
          py::list out;
          for (const StateMorphism& s : sl.states) out.append(state_to_dict(*a, s));
          return out;
        },
        py::arg("algebra"), py::arg("support") = 8);
  m.def("state_value",
        [](std::shared_ptr<Algebra> a, std::size_t state, const Element& x) {
          StateList sl = state_morphisms(a);
          return sl.states.at(state).value(*a, x);
        },
        py::arg("algebra"), py::arg("state"), py::arg("x"));
  m.def("separating_element",
        [](std::shared_ptr<Algebra> a, std::size_t target, std::vector<std::size_t> exclude,
           bool dual, bool recipe) {
          StateList sl = state_morphisms(a);
          std::vector<StateMorphism> x_set;
          for (std::size_t i : exclude) x_set.push_back(sl.states.at(i));
          const StateMorphism& t = sl.states.at(target);
          if (dual)
            return recipe ? find_dual_separating_element_recipe(*a, x_set, t)
                          : find_dual_separating_element(*a, x_set, t);
          return recipe ? find_separating_element_recipe(*a, x_set, t)
                        : find_separating_element(*a, x_set, t);
        },
        py::arg("algebra"), py::arg("target"), py::arg("exclude") = std::vector<std::size_t>{},
        py::arg("dual") = false, py::arg("recipe") = false);

  m.def("base_set",
        [](std::shared_ptr<Algebra> a, const Element& x) { return base_set(*a, x).points; },
        py::arg("algebra"), py::arg("x"),
        "Spectrum points whose maximal ideal misses x");
  m.def("sup_criterion",
        [](std::shared_ptr<Algebra> a, const Element& x, std::vector<Element> family) {
          SupCriterionReport r = sup_criterion(*a, x, ElementSequence::finite(family));
          py::dict d;
          d["verdict"] = r.verdict == SupVerdict::Holds
                             ? "holds"
                             : (r.verdict == SupVerdict::Fails ? "fails" : "undecided");
          d["sup_matches"] = r.sup_matches;
          d["difference_empty"] = r.difference_empty;
          d["difference"] = r.difference;
          d["note"] = r.note;
          return d;
        },
        py::arg("algebra"), py::arg("x"), py::arg("family"));
  m.def("compactness",
        [](std::shared_ptr<Algebra> a) {
          CompactnessReport r = compactness_shadow(*a);
          py::dict d;
          d["has_top"] = r.has_top;
          d["spectrum_finite"] = r.spectrum_finite;
          d["spectrum_points"] = r.spectrum_points;
          d["equivalence_holds"] = r.equivalence_holds;
          d["note"] = r.note;
          return d;
        },
        py::arg("algebra"));

  py::class_<RepresentedMv, std::shared_ptr<RepresentedMv>>(m, "RepresentedMv")
      .def_property_readonly("name", &RepresentedMv::name)
      .def_property_readonly("base",
                             [](const RepresentedMv& n) { return unconst(n.base()); })
      .def("zero", &RepresentedMv::zero)
      .def("top", &RepresentedMv::top)
      .def("direct", &RepresentedMv::direct, py::arg("x"))
      .def("complement_of", &RepresentedMv::complement_of, py::arg("x"))
      .def("oplus", &RepresentedMv::oplus)
      .def("odot", &RepresentedMv::odot)
      .def("join", &RepresentedMv::join)
      .def("meet", &RepresentedMv::meet)
      .def("leq", &RepresentedMv::leq)
      .def("negate", &RepresentedMv::lambda_top, py::arg("x"))
      .def("format", &RepresentedMv::format)
      .def("__repr__", [](const RepresentedMv& n) { return "<" + n.name() + ">"; });

  py::class_<NElement>(m, "NElement")
      .def("__eq__", [](const NElement& a, const NElement& b) { return a == b; })
      .def_property_readonly("is_complement",
                             [](const NElement& z) { return z.complement; })
      .def_property_readonly("base", [](const NElement& z) { return z.base; });

  m.def("represent",
        [](std::shared_ptr<Algebra> a) -> py::object {
          RepresentResult r = represent(a);
          if (r.already_mv) return py::none();
          return py::cast(std::const_pointer_cast<RepresentedMv>(r.algebra));
        },
        py::arg("algebra"),
        "The representing MV-algebra over a proper base, or None for topped ones");
  m.def("audit_representation",
        [](std::shared_ptr<RepresentedMv> n) {
          AxiomReport r = audit_representation(*n);
          py::dict d;
          d["ok"] = r.ok();
          d["checks"] = report_to_list(r);
          return d;
        },
        py::arg("n"));
  m.def("extended_state_rules",
        [](std::shared_ptr<RepresentedMv> n, std::uint32_t support) {
          ProbeOptions o;
          o.support_bound = support;
          py::list out;
          for (const ExtendedState& s : extended_state_catalog(*n, o)) out.append(s.rule);
          return out;
        },
        py::arg("n"), py::arg("support") = 8);

  py::class_<LsWitness>(m, "LsWitness")
      .def_property_readonly("omega", [](const LsWitness& w) { return w.omega; })
      .def_property_readonly("note", [](const LsWitness& w) { return w.note; })
      .def_property_readonly("algebra",
                             [](const LsWitness& w) { return unconst(w.algebra); })
      .def_property_readonly("state_rules",
                             [](const LsWitness& w) {
                               py::list out;
                               for (const StateMorphism& s : w.states) out.append(s.rule);
                               return out;
                             })
      .def("hat",
           [](const LsWitness& w, const Element& x) {
             return w.hat.at(w.algebra->index_of(x)).values;
           },
           py::arg("x"), "Row of state values for x")
      .def("h",
           [](const LsWitness& w, std::vector<Rational> values) {
             return w.h(FuzzySet{std::move(values)});
           },
           py::arg("values"), "The unique element whose hat row equals the given values");

  m.def("ls_construct",
        [](std::shared_ptr<FiniteAlgebra> a) { return ls_construct(a); },
        py::arg("algebra"),
        "Fuzzy-set witness: hat rows over the state space plus the inverse h");
  m.def("sigma_ring",
        [](const LsWitness& w) {
          SigmaRing r = sigma_ring_extract(w);
          py::dict d;
          d["sets"] = r.sets;
          py::list images;
          for (const Element& e : r.images) images.append(w.algebra->format(e));
          d["images"] = images;
          d["ok"] = r.audit.ok();
          return d;
        },
        py::arg("witness"),
        "Sets whose characteristic functions live in the tribe, with their images");

  m.def("parse_check",
        [](const std::string& text) { return print_spec(parse_spec(text)); },
        py::arg("text"), "Parse a DSL document and return its canonical printed form");
  m.def("load_algebra",
        [](const std::string& path, std::optional<std::string> name) {
          Document doc = parse_spec(read_file(path));
          const Statement* st = nullptr;
          if (name) {
            st = doc.find(*name);
            if (!st || st->kind != Statement::Kind::Algebra)
              throw std::invalid_argument("no algebra named '" + *name + "' in " + path);
          } else {
            st = doc.first(Statement::Kind::Algebra);
            if (!st) throw std::invalid_argument("no algebra declaration in " + path);
          }
          return unconst(build_algebra(st->algebra, st->name));
        },
        py::arg("path"), py::arg("name") = py::none());
  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          CliResult r = run_cli(args);
          return py::make_tuple(r.exit_code, r.out, r.err);
        },
        py::arg("args"), "Run a toolkit command in-process; returns (exit, stdout, stderr)");
}

#include "doctest.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "emv/backends.hpp"
#include "emv/cli.hpp"
#include "emv/core_ops.hpp"
#include "emv/dsl.hpp"
#include "emv/tribes.hpp"

using namespace emv;
using njson = nlohmann::json;

namespace {

std::string data_path(const std::string& file) {
  return std::string(EMV_TEST_DATA_DIR) + "/" + file;
}

std::string slurp(const std::string& file) {
  std::ifstream in(data_path(file), std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Diagnostic diag_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e.diagnostic();
  }
  FAIL("expected a parse error for: ", text);
  return {};
}

const std::vector<std::string>& specimens() {
  static const std::vector<std::string> files = {
      "01_chain1.emv",     "02_chain2.emv",      "03_chain4.emv",  "04_chain6.emv",
      "05_product_12.emv", "06_product_23.emv",  "07_product_nested.emv",
      "08_table_square.emv", "09_table_chain3.emv", "10_finite_sets.emv",
      "11_finsupport2.emv", "12_chang.emv",      "13_tribe_pair.emv",
      "14_tribe_halves.emv", "15_mixed.emv"};
  return files;
}

}  // namespace

TEST_CASE("expression parsing produces the expected trees") {
  Document d = parse_spec("algebra P = product(chain(1), chain(2))");
  REQUIRE(d.statements.size() == 1);
  const AlgebraExpr& e = d.statements[0].algebra;
  CHECK(d.statements[0].name == "P");
  CHECK(e.node == AlgebraExpr::Node::Product);
  REQUIRE(e.args.size() == 2);
  CHECK(e.args[0].node == AlgebraExpr::Node::Chain);
  CHECK(e.args[0].order == 1);
  CHECK(e.args[1].order == 2);

  CHECK(parse_spec("algebra T = finite_sets").statements[0].algebra.node ==
        AlgebraExpr::Node::FiniteSets);
  CHECK(parse_spec("algebra C = chang").statements[0].algebra.node == AlgebraExpr::Node::Chang);
  AlgebraExpr fsup = parse_spec("algebra G = finsupport(chain(3))").statements[0].algebra;
  CHECK(fsup.node == AlgebraExpr::Node::FinSupport);
  CHECK(fsup.order == 3);

  Document two = parse_spec("# two declarations\nalgebra A = chain(1)\n\nalgebra B = chain(2)\n");
  CHECK(two.statements.size() == 2);
  CHECK(two.find("B") != nullptr);
  CHECK(two.find("missing") == nullptr);
  CHECK(two.first(Statement::Kind::Tribe) == nullptr);

  Document tr = parse_spec("tribe S on {0,1} = {(0,0), (1/2,1)}");
  REQUIRE(tr.statements.size() == 1);
  CHECK(tr.statements[0].kind == Statement::Kind::Tribe);
  CHECK(tr.statements[0].tribe.omega == 2);
  REQUIRE(tr.statements[0].tribe.generators.size() == 2);
  CHECK(tr.statements[0].tribe.generators[1] ==
        std::vector<Rational>{Rational(1, 2), Rational(1)});
}

TEST_CASE("diagnostics carry positions and distinct codes") {
  Diagnostic d = diag_of("algebra B = chain(0)");
  CHECK(d.code == Diagnostic::Code::Arity);
  CHECK(d.line == 1);
  CHECK(d.column == 19);
  CHECK(d.str() == "1:19: arity error: chain order must be at least 1");

  d = diag_of("algebra = chain(1)");
  CHECK(d.code == Diagnostic::Code::Syntax);
  CHECK(d.column == 9);
  CHECK(d.message.find("expected") != std::string::npos);

  d = diag_of("algebra T = table {\n  elements: 0, 1\n  zero: 0\n  oplus: [0,1; 1]\n  join: [0,1; 1,1]\n}");
  CHECK(d.code == Diagnostic::Code::Table);
  CHECK(d.line == 4);

  CHECK(diag_of("algebra P = product(chain(1))").code == Diagnostic::Code::Syntax);
  CHECK(diag_of("algebra P = product(chang, chain(1))").code == Diagnostic::Code::Arity);
  CHECK(diag_of("algebra G = finsupport(chang)").code == Diagnostic::Code::Arity);
  CHECK(diag_of("algebra C = chain(900)").code == Diagnostic::Code::Arity);
  CHECK(diag_of("algebra chain = chain(1)").code == Diagnostic::Code::Syntax);
  CHECK(diag_of("algebra A = chain(1)\nalgebra A = chain(2)").code == Diagnostic::Code::Syntax);

  // table-shape defects
  CHECK(diag_of("algebra T = table { elements: 0, 1; zero: 2; oplus: [0,1; 1,1]; join: [0,1; 1,1] }")
            .message.find("not an element") != std::string::npos);
  CHECK(diag_of("algebra T = table { elements: 0, 1; zero: 0; oplus: [0,1; 1,1] }")
            .message.find("exactly one") != std::string::npos);
  CHECK(diag_of("algebra T = table { elements: 0, 1; zero: 0; oplus: [0,1; 1,1]; "
                "join: [0,1; 1,1]; le: [0<1] }")
            .code == Diagnostic::Code::Table);
  CHECK(diag_of("algebra T = table { zero: 0; oplus: [0]; join: [0] }")
            .message.find("elements") != std::string::npos);

  // tribe-shape defects
  CHECK(diag_of("tribe U on {1} = {(0)}").message.find("0..k-1") != std::string::npos);
  CHECK(diag_of("tribe U on {0,1} = {(0)}").message.find("arity") != std::string::npos);
  CHECK(diag_of("tribe U on {0} = {(2)}").message.find("[0,1]") != std::string::npos);
  CHECK(diag_of("tribe U on {0} = {(1/0)}").message.find("denominator") != std::string::npos);
}

TEST_CASE("printer round trip is stable on every specimen") {
  for (const std::string& file : specimens()) {
    INFO(file);
    Document d1 = parse_spec(slurp(file));
    std::string printed = print_spec(d1);
    Document d2 = parse_spec(printed);
    CHECK(d1 == d2);
    CHECK(print_spec(d2) == printed);
  }
}

TEST_CASE("printing uses the canonical one-line forms") {
  Document d = parse_spec("algebra R = product(chain(1), product(chain(1), chain(2)))");
  CHECK(print_expr(d.statements[0].algebra) ==
        "product(chain(1), product(chain(1), chain(2)))");

  d = parse_spec(slurp("09_table_chain3.emv"));
  CHECK(print_expr(d.statements[0].algebra) ==
        "table { elements: z, u, d, t; zero: z; "
        "oplus: [z,u,d,t; u,d,t,t; d,t,t,t; t,t,t,t]; le: [z<u, u<d, d<t] }");

  d = parse_spec("tribe S on {0} = {(0), (1/2), (1)}");
  CHECK(print_spec(d) == "tribe S on {0} = {(0), (1/2), (1)}\n");
}

TEST_CASE("build_algebra realizes each constructor") {
  AlgebraPtr c2 = build_algebra(parse_spec("algebra A = chain(2)").statements[0].algebra, "A");
  CHECK(c2->name() == "chain(2)");
  CHECK(c2->size() == 3);

  AlgebraPtr p = build_algebra(parse_spec(slurp("05_product_12.emv")).statements[0].algebra, "P");
  CHECK(p->size() == 6);

  Document tbl = parse_spec(slurp("08_table_square.emv"));
  AlgebraPtr b = build_algebra(tbl.statements[0].algebra, tbl.statements[0].name);
  CHECK(b->name() == "B");
  CHECK(b->size() == 4);
  CHECK(b->has_top());
  CHECK(check_emv_axioms(*b).ok());

  Document k3 = parse_spec(slurp("09_table_chain3.emv"));
  AlgebraPtr k = build_algebra(k3.statements[0].algebra, k3.statements[0].name);
  CHECK(k->size() == 4);
  CHECK(check_emv_axioms(*k).ok());

  auto fs = std::dynamic_pointer_cast<const FinSupportAlgebra>(
      build_algebra(parse_spec("algebra F = finite_sets").statements[0].algebra, "F"));
  REQUIRE(fs);
  CHECK(fs->order() == 1);
  auto fs2 = std::dynamic_pointer_cast<const FinSupportAlgebra>(
      build_algebra(parse_spec("algebra G = finsupport(chain(2))").statements[0].algebra, "G"));
  REQUIRE(fs2);
  CHECK(fs2->order() == 2);

  CHECK(build_algebra(parse_spec("algebra C = chang").statements[0].algebra, "C")->name() ==
        "chang");

  AlgebraExpr big = parse_spec("algebra H = product(chain(70), chain(70))").statements[0].algebra;
  CHECK_THROWS_AS(build_algebra(big, "H"), std::invalid_argument);
}

TEST_CASE("build_tribe matches the declared members") {
  Document d = parse_spec(slurp("13_tribe_pair.emv"));
  const Statement* ts = d.first(Statement::Kind::Tribe);
  REQUIRE(ts);
  Tribe t = build_tribe(ts->tribe);
  CHECK(t.omega() == 2);
  CHECK(t.members().size() == 6);
  CHECK(clan_audit(t).ok());
  CHECK(tribe_audit(t).ok());
  CHECK(n_set_calculus(t).ok());

  Tribe bad = build_tribe(parse_spec(slurp("corrupt_tribe.emv")).statements[0].tribe);
  AxiomReport rep = clan_audit(bad);
  CHECK_FALSE(rep.ok());
  REQUIRE(rep.first_failure());
  CHECK(rep.first_failure()->law == "clan.zero");
}

TEST_CASE("cli check: passing and failing tables") {
  CliResult r = run_cli({"check", data_path("05_product_12.emv")});
  CHECK(r.exit_code == 0);
  CHECK(r.err.empty());
  njson j = njson::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "check");
  CHECK(j["algebra"]["backend"] == "product(chain(1),chain(2))");
  CHECK(j["algebra"]["size"] == 6);
  CHECK(j["exhaustive"] == true);
  CHECK(j["exit"] == 0);
  CHECK(j["input"]["digest"].get<std::string>().size() == 16);
  for (const auto& v : j["verdicts"]) CHECK(v["pass"] == true);

  r = run_cli({"check", data_path("corrupt_semantics.emv")});
  CHECK(r.exit_code == 1);
  j = njson::parse(r.out);
  CHECK(j["exit"] == 1);
  bool commutative_failed = false;
  for (const auto& v : j["verdicts"])
    if (v["law"] == "monoid.commutative" && v["pass"] == false) commutative_failed = true;
  CHECK(commutative_failed);
}

TEST_CASE("cli: corrupted inputs exit 2 with positioned diagnostics") {
  CliResult r = run_cli({"check", data_path("corrupt_chain0.emv")});
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find(":1:19: arity error") != std::string::npos);

  r = run_cli({"check", data_path("corrupt_syntax.emv")});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find(":1:9: syntax error") != std::string::npos);

  r = run_cli({"check", data_path("corrupt_table.emv")});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("table error") != std::string::npos);

  CHECK(run_cli({"check", data_path("no_such_file.emv")}).exit_code == 2);
  CHECK(run_cli({"frobnicate", data_path("01_chain1.emv")}).exit_code == 2);
  CHECK(run_cli({}).exit_code == 2);
  CHECK(run_cli({"ls-witness", data_path("12_chang.emv")}).exit_code == 2);
  CHECK(run_cli({"convergence", data_path("02_chain2.emv")}).exit_code == 2);
  CHECK(run_cli({"check", data_path("15_mixed.emv"), "--algebra", "nope"}).exit_code == 2);
  CHECK(run_cli({"tribe-audit", data_path("12_chang.emv")}).exit_code == 2);
}

TEST_CASE("cli: reports are byte-stable and timing is opt-in") {
  std::vector<std::string> args = {"spectrum", data_path("10_finite_sets.emv"), "--seed", "99"};
  CliResult a = run_cli(args), b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("timing_ms") == std::string::npos);

  CliResult t = run_cli({"check", data_path("01_chain1.emv"), "--timing"});
  CHECK(t.out.find("timing_ms") != std::string::npos);
}

TEST_CASE("cli: declaration selection flags") {
  CliResult r = run_cli({"check", data_path("15_mixed.emv"), "--algebra", "B"});
  njson j = njson::parse(r.out);
  CHECK(j["algebra"]["name"] == "B");
  CHECK(j["algebra"]["backend"] == "product(chain(1),chain(2))");

  r = run_cli({"check", data_path("15_mixed.emv"), "--algebra", "K"});
  j = njson::parse(r.out);
  CHECK(j["algebra"]["backend"] == "K");
  CHECK(j["exit"] == 0);

  r = run_cli({"tribe-audit", data_path("13_tribe_pair.emv")});
  CHECK(r.exit_code == 0);
  j = njson::parse(r.out);
  CHECK(j["source"] == "H");
  CHECK(j["tribe"] == "6 listed fuzzy sets on a 2-point domain");

  // no tribe declared: fall back to the hat image of the finite algebra
  r = run_cli({"tribe-audit", data_path("02_chain2.emv")});
  CHECK(r.exit_code == 0);
  j = njson::parse(r.out);
  CHECK(j["source"] == "hat image of C2");

  r = run_cli({"tribe-audit", data_path("corrupt_tribe.emv")});
  CHECK(r.exit_code == 1);
}

TEST_CASE("cli sup-criterion: defaults and explicit targets") {
  njson j = njson::parse(run_cli({"sup-criterion", data_path("10_finite_sets.emv")}).out);
  CHECK(j["verdict"] == "holds");
  CHECK(j["target"] == "{0,1,2}");

  j = njson::parse(run_cli({"sup-criterion", data_path("05_product_12.emv"), "--target", "(1,2)",
                            "--family", "(1,0)", "--family", "(0,2)"})
                       .out);
  CHECK(j["verdict"] == "holds");
  CHECK(j["difference"].empty());

  j = njson::parse(run_cli({"sup-criterion", data_path("05_product_12.emv"), "--target", "(1,2)",
                            "--family", "(1,0)"})
                       .out);
  CHECK(j["verdict"] == "fails");
  CHECK_FALSE(j["difference"].empty());

  CHECK(run_cli({"sup-criterion", data_path("05_product_12.emv"), "--target", "(9,9)"})
            .exit_code == 2);
  j = njson::parse(
      run_cli({"sup-criterion", data_path("10_finite_sets.emv"), "--target", "{0,1}"}).out);
  CHECK(j["verdict"] == "holds");
}

TEST_CASE("cli ls-witness and sigma-ring payloads") {
  njson j = njson::parse(run_cli({"ls-witness", data_path("02_chain2.emv")}).out);
  CHECK(j["omega"] == 1);
  REQUIRE(j["hat"].size() == 3);
  CHECK(j["hat"][1]["values"] == njson::array({"1/2"}));
  CHECK(j["note"].get<std::string>().find("meager") != std::string::npos);

  j = njson::parse(run_cli({"sigma-ring", data_path("05_product_12.emv")}).out);
  CHECK(j["sets"] == njson::array({njson::array(), {0}, {1}, {0, 1}}));
  CHECK(j["images"] == njson::array({"(0,0)", "(0,2)", "(1,0)", "(1,2)"}));
  CHECK(j["exit"] == 0);
}

TEST_CASE("cli convergence reproduces both limits") {
  njson j = njson::parse(run_cli({"convergence", data_path("10_finite_sets.emv")}).out);
  CHECK(j["base"]["all_match"] == true);
  CHECK(j["base"]["limit_is_state_morphism"] == false);
  CHECK(j["base"]["limit_defects"][0].get<std::string>().find("value 1") != std::string::npos);
  CHECK(j["represented"]["all_match"] == true);
  CHECK(j["represented"]["limit_is_state_morphism"] == true);
  for (const auto& v : j["verdicts"]) CHECK(v["pass"] == true);
}

TEST_CASE("cli state and radical payloads") {
  njson j = njson::parse(run_cli({"radical", data_path("12_chang.emv")}).out);
  CHECK(j["semisimple"] == false);
  CHECK(j["radical"].get<std::string>().find("Small") != std::string::npos);
  CHECK(j["exit"] == 0);

  j = njson::parse(run_cli({"states", data_path("10_finite_sets.emv"), "--support", "5"}).out);
  CHECK(j["symbolic"] == true);
  CHECK(j["count"] == 5);

  j = njson::parse(run_cli({"separate", data_path("06_product_23.emv")}).out);
  CHECK(j["exit"] == 0);
  CHECK(j["pairs"] == 4);  // two states: per target, X = {} and the other one

  j = njson::parse(run_cli({"hulls", data_path("12_chang.emv")}).out);
  CHECK(j["exit"] == 0);
  j = njson::parse(run_cli({"represent", data_path("11_finsupport2.emv")}).out);
  CHECK(j["already_mv"] == false);
  CHECK(j["exit"] == 0);
}

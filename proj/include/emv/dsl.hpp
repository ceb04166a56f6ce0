#pragma once

// Line-oriented description language for algebras and tribes.
//
//   # comment
//   algebra NAME = EXPR
//   tribe NAME on {0,1,...} = {(p/q, ...), ...}
//
// EXPR is one of chain(n), product(EXPR, EXPR), finsupport(chain(n)),
// finite_sets, chang, or an explicit table block
//
//   table { elements: a, b; zero: a; oplus: [a,b; b,b]; join: [a,b; b,b] }
//
// with `le: [a<b, ...]` accepted in place of the join matrix.  Statements end
// at a newline; newlines inside parentheses, brackets or braces are plain
// whitespace, so blocks may span lines.  parse errors carry a position and a
// code: Syntax (token-level, with the expected-token set), Arity (argument
// counts and ranges), Table (malformed table or tribe payloads).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "emv/algebra.hpp"
#include "emv/rational.hpp"
#include "emv/tribes.hpp"

namespace emv {

struct Diagnostic {
  enum class Code { Syntax, Arity, Table };
  Code code = Code::Syntax;
  std::size_t line = 0;  // 1-based
  std::size_t column = 0;
  std::string message;

  std::string str() const;  // "LINE:COL: CODE error: MESSAGE"
};

class ParseError : public std::runtime_error {
public:
  explicit ParseError(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

private:
  Diagnostic diag_;
};

struct AlgebraExpr {
  enum class Node { Chain, Product, Table, FinSupport, FiniteSets, Chang };
  Node node = Node::Chain;
  std::size_t order = 0;          // Chain and FinSupport: the chain order n
  std::vector<AlgebraExpr> args;  // Product: exactly two

  // Table payload; oplus is required, join_rows and le_pairs are exclusive.
  std::vector<std::string> labels;
  std::string zero_label;
  std::vector<std::vector<std::string>> oplus_rows;
  std::vector<std::vector<std::string>> join_rows;
  std::vector<std::pair<std::string, std::string>> le_pairs;

  bool operator==(const AlgebraExpr& o) const;
  bool operator!=(const AlgebraExpr& o) const { return !(*this == o); }
};

struct TribeDecl {
  std::size_t omega = 0;
  std::vector<std::vector<Rational>> generators;

  bool operator==(const TribeDecl& o) const {
    return omega == o.omega && generators == o.generators;
  }
  bool operator!=(const TribeDecl& o) const { return !(*this == o); }
};

struct Statement {
  enum class Kind { Algebra, Tribe };
  Kind kind = Kind::Algebra;
  std::string name;
  AlgebraExpr algebra;
  TribeDecl tribe;

  bool operator==(const Statement& o) const;
  bool operator!=(const Statement& o) const { return !(*this == o); }
};

struct Document {
  std::vector<Statement> statements;

  const Statement* find(const std::string& name) const;
  const Statement* first(Statement::Kind kind) const;

  bool operator==(const Document& o) const { return statements == o.statements; }
  bool operator!=(const Document& o) const { return !(*this == o); }
};

// Throws ParseError; a returned Document is structurally valid.
Document parse_spec(const std::string& text);

// Canonical one-line-per-statement form; print_spec(d) reparses to d.
std::string print_expr(const AlgebraExpr& e);
std::string print_spec(const Document& doc);

// Construction of checked DSL output.  build_algebra can still throw
// std::invalid_argument (for example a product too large to materialize);
// whether the result satisfies the axioms is check_emv_axioms' business.
AlgebraPtr build_algebra(const AlgebraExpr& e, const std::string& name);
Tribe build_tribe(const TribeDecl& t);

}  // namespace emv

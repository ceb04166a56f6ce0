#include "emv/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "emv/backends.hpp"

namespace emv {
namespace {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Equals,
  Less,
  Slash,
  End,  // statement terminator (newline at nesting depth zero)
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  long long num = 0;
  std::size_t line = 1;
  std::size_t col = 1;
};

std::string token_name(const Token& t) {
  switch (t.kind) {
    case Tok::Ident:
      return "'" + t.text + "'";
    case Tok::Int:
      return "'" + t.text + "'";
    case Tok::End:
      return "end of line";
    case Tok::Eof:
      return "end of input";
    default:
      return "'" + t.text + "'";
  }
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "algebra", "tribe", "on",      "chain", "product", "table", "finsupport",
      "finite_sets", "chang", "elements", "zero",  "oplus",   "join",  "le"};
  return k;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, depth = 0;
  auto push = [&](Tok kind, std::string s, std::size_t l, std::size_t c) {
    Token t;
    t.kind = kind;
    t.text = std::move(s);
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };
  for (std::size_t i = 0; i < text.size();) {
    char ch = text[i];
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ch == '\n') {
      if (depth == 0 && !out.empty() && out.back().kind != Tok::End) push(Tok::End, "", line, col);
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++col;
      ++i;
      continue;
    }
    std::size_t l = line, c = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string s;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        s += text[i++];
        ++col;
      }
      push(Tok::Int, s, l, c);
      out.back().num = std::stoll(out.back().text);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string s;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        s += text[i++];
        ++col;
      }
      push(Tok::Ident, s, l, c);
      continue;
    }
    Tok kind;
    switch (ch) {
      case '(':
        kind = Tok::LParen;
        ++depth;
        break;
      case ')':
        kind = Tok::RParen;
        if (depth) --depth;
        break;
      case '{':
        kind = Tok::LBrace;
        ++depth;
        break;
      case '}':
        kind = Tok::RBrace;
        if (depth) --depth;
        break;
      case '[':
        kind = Tok::LBracket;
        ++depth;
        break;
      case ']':
        kind = Tok::RBracket;
        if (depth) --depth;
        break;
      case ',':
        kind = Tok::Comma;
        break;
      case ';':
        kind = Tok::Semi;
        break;
      case ':':
        kind = Tok::Colon;
        break;
      case '=':
        kind = Tok::Equals;
        break;
      case '<':
        kind = Tok::Less;
        break;
      case '/':
        kind = Tok::Slash;
        break;
      default: {
        Diagnostic d;
        d.code = Diagnostic::Code::Syntax;
        d.line = l;
        d.column = c;
        d.message = std::string("unexpected character '") + ch + "'";
        throw ParseError(d);
      }
    }
    push(kind, std::string(1, ch), l, c);
    ++i;
    ++col;
  }
  Token eof;
  eof.kind = Tok::Eof;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Document parse() {
    Document doc;
    skip_ends();
    while (peek().kind != Tok::Eof) {
      doc.statements.push_back(statement());
      if (peek().kind == Tok::End)
        advance();
      else if (peek().kind != Tok::Eof)
        fail_syntax("end of line or end of input");
      skip_ends();
    }
    std::set<std::string> names;
    for (const Statement& s : doc.statements)
      if (!names.insert(s.name).second)
        fail_at(Diagnostic::Code::Syntax, toks_.front(), "duplicate name '" + s.name + "'");
    return doc;
  }

private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;

  const Token& peek() const { return toks_[at_]; }
  const Token& advance() { return toks_[at_++]; }
  void skip_ends() {
    while (peek().kind == Tok::End) advance();
  }

  [[noreturn]] void fail_at(Diagnostic::Code code, const Token& t, std::string msg) {
    Diagnostic d;
    d.code = code;
    d.line = t.line;
    d.column = t.col;
    d.message = std::move(msg);
    throw ParseError(d);
  }
  [[noreturn]] void fail_syntax(const std::string& expected) {
    fail_at(Diagnostic::Code::Syntax, peek(), "expected " + expected + ", found " + token_name(peek()));
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail_syntax(what);
    return advance();
  }
  bool is_kw(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail_syntax(std::string("'") + kw + "'");
    advance();
  }

  Statement statement() {
    Statement s;
    if (is_kw("algebra")) {
      advance();
      s.kind = Statement::Kind::Algebra;
      s.name = parse_name();
      expect(Tok::Equals, "'='");
      s.algebra = expr();
      return s;
    }
    if (is_kw("tribe")) {
      advance();
      s.kind = Statement::Kind::Tribe;
      s.name = parse_name();
      expect_kw("on");
      s.tribe = tribe_body();
      return s;
    }
    fail_syntax("'algebra' or 'tribe'");
  }

  std::string parse_name() {
    if (peek().kind != Tok::Ident) fail_syntax("a name");
    if (keywords().count(peek().text))
      fail_at(Diagnostic::Code::Syntax, peek(), "'" + peek().text + "' is reserved");
    return advance().text;
  }

  AlgebraExpr expr() {
    if (is_kw("chain")) return chain_expr();
    if (is_kw("product")) return product_expr();
    if (is_kw("finsupport")) return finsupport_expr();
    if (is_kw("finite_sets")) {
      advance();
      AlgebraExpr e;
      e.node = AlgebraExpr::Node::FiniteSets;
      return e;
    }
    if (is_kw("chang")) {
      advance();
      AlgebraExpr e;
      e.node = AlgebraExpr::Node::Chang;
      return e;
    }
    if (is_kw("table")) return table_expr();
    fail_syntax("'chain', 'product', 'table', 'finsupport', 'finite_sets' or 'chang'");
  }

  AlgebraExpr chain_expr() {
    advance();
    expect(Tok::LParen, "'('");
    const Token& n = expect(Tok::Int, "a chain order");
    if (n.num < 1) fail_at(Diagnostic::Code::Arity, n, "chain order must be at least 1");
    if (n.num > 255) fail_at(Diagnostic::Code::Arity, n, "chain order must be at most 255");
    expect(Tok::RParen, "')'");
    AlgebraExpr e;
    e.node = AlgebraExpr::Node::Chain;
    e.order = static_cast<std::size_t>(n.num);
    return e;
  }

  AlgebraExpr product_expr() {
    advance();
    expect(Tok::LParen, "'('");
    AlgebraExpr e;
    e.node = AlgebraExpr::Node::Product;
    const Token& first = peek();
    e.args.push_back(expr());
    expect(Tok::Comma, "','");
    const Token& second = peek();
    e.args.push_back(expr());
    expect(Tok::RParen, "')'");
    auto finite = [](const AlgebraExpr& a) {
      return a.node == AlgebraExpr::Node::Chain || a.node == AlgebraExpr::Node::Product ||
             a.node == AlgebraExpr::Node::Table;
    };
    if (!finite(e.args[0]))
      fail_at(Diagnostic::Code::Arity, first,
              "product arguments must be finite (chain, product or table)");
    if (!finite(e.args[1]))
      fail_at(Diagnostic::Code::Arity, second,
              "product arguments must be finite (chain, product or table)");
    return e;
  }

  AlgebraExpr finsupport_expr() {
    advance();
    expect(Tok::LParen, "'('");
    const Token& inner = peek();
    AlgebraExpr arg = expr();
    if (arg.node != AlgebraExpr::Node::Chain)
      fail_at(Diagnostic::Code::Arity, inner, "finsupport takes chain(n)");
    expect(Tok::RParen, "')'");
    AlgebraExpr e;
    e.node = AlgebraExpr::Node::FinSupport;
    e.order = arg.order;
    return e;
  }

  std::string label_token() {
    if (peek().kind != Tok::Ident && peek().kind != Tok::Int) fail_syntax("an element label");
    if (peek().kind == Tok::Ident && keywords().count(peek().text))
      fail_at(Diagnostic::Code::Table, peek(),
              "label '" + peek().text + "' collides with a keyword");
    return advance().text;
  }

  std::vector<std::vector<std::string>> matrix() {
    expect(Tok::LBracket, "'['");
    std::vector<std::vector<std::string>> rows;
    for (;;) {
      std::vector<std::string> row;
      row.push_back(label_token());
      while (peek().kind == Tok::Comma) {
        advance();
        row.push_back(label_token());
      }
      rows.push_back(std::move(row));
      if (peek().kind == Tok::Semi) {
        advance();
        continue;
      }
      expect(Tok::RBracket, "']'");
      return rows;
    }
  }

  AlgebraExpr table_expr() {
    const Token& tab = peek();
    advance();
    expect(Tok::LBrace, "'{'");
    AlgebraExpr e;
    e.node = AlgebraExpr::Node::Table;
    bool saw_elements = false, saw_zero = false, saw_oplus = false, saw_join = false,
         saw_le = false;
    Token zero_tok = tab, oplus_tok = tab, join_tok = tab;
    while (peek().kind != Tok::RBrace) {
      if (is_kw("elements")) {
        const Token& here = peek();
        if (saw_elements) fail_at(Diagnostic::Code::Table, here, "duplicate elements field");
        saw_elements = true;
        advance();
        expect(Tok::Colon, "':'");
        e.labels.push_back(label_token());
        while (peek().kind == Tok::Comma) {
          advance();
          e.labels.push_back(label_token());
        }
      } else if (is_kw("zero")) {
        zero_tok = peek();
        if (saw_zero) fail_at(Diagnostic::Code::Table, zero_tok, "duplicate zero field");
        saw_zero = true;
        advance();
        expect(Tok::Colon, "':'");
        e.zero_label = label_token();
      } else if (is_kw("oplus")) {
        oplus_tok = peek();
        if (saw_oplus) fail_at(Diagnostic::Code::Table, oplus_tok, "duplicate oplus field");
        saw_oplus = true;
        advance();
        expect(Tok::Colon, "':'");
        e.oplus_rows = matrix();
      } else if (is_kw("join")) {
        join_tok = peek();
        if (saw_join) fail_at(Diagnostic::Code::Table, join_tok, "duplicate join field");
        saw_join = true;
        advance();
        expect(Tok::Colon, "':'");
        e.join_rows = matrix();
      } else if (is_kw("le")) {
        const Token& here = peek();
        if (saw_le) fail_at(Diagnostic::Code::Table, here, "duplicate le field");
        saw_le = true;
        advance();
        expect(Tok::Colon, "':'");
        expect(Tok::LBracket, "'['");
        for (;;) {
          std::string lo = label_token();
          expect(Tok::Less, "'<'");
          std::string hi = label_token();
          e.le_pairs.emplace_back(std::move(lo), std::move(hi));
          if (peek().kind == Tok::Comma) {
            advance();
            continue;
          }
          expect(Tok::RBracket, "']'");
          break;
        }
      } else {
        fail_syntax("'elements', 'zero', 'oplus', 'join', 'le' or '}'");
      }
      if (peek().kind == Tok::Semi) advance();
    }
    advance();  // RBrace

    if (!saw_elements || e.labels.empty())
      fail_at(Diagnostic::Code::Table, tab, "a table needs an elements field");
    std::set<std::string> seen(e.labels.begin(), e.labels.end());
    if (seen.size() != e.labels.size())
      fail_at(Diagnostic::Code::Table, tab, "duplicate element label");
    if (!saw_zero) fail_at(Diagnostic::Code::Table, tab, "a table needs a zero field");
    if (!seen.count(e.zero_label))
      fail_at(Diagnostic::Code::Table, zero_tok, "zero label '" + e.zero_label + "' is not an element");
    if (!saw_oplus) fail_at(Diagnostic::Code::Table, tab, "a table needs an oplus matrix");
    if (saw_join == saw_le)
      fail_at(Diagnostic::Code::Table, tab, "give exactly one of a join matrix or le pairs");
    auto check_matrix = [&](const std::vector<std::vector<std::string>>& rows, const Token& at,
                            const char* which) {
      if (rows.size() != e.labels.size())
        fail_at(Diagnostic::Code::Table, at,
                std::string(which) + " matrix must have one row per element");
      for (const auto& row : rows) {
        if (row.size() != e.labels.size())
          fail_at(Diagnostic::Code::Table, at, std::string(which) + " matrix must be square");
        for (const std::string& cell : row)
          if (!seen.count(cell))
            fail_at(Diagnostic::Code::Table, at,
                    std::string(which) + " entry '" + cell + "' is not an element");
      }
    };
    check_matrix(e.oplus_rows, oplus_tok, "oplus");
    if (saw_join) check_matrix(e.join_rows, join_tok, "join");
    for (const auto& [lo, hi] : e.le_pairs)
      if (!seen.count(lo) || !seen.count(hi))
        fail_at(Diagnostic::Code::Table, tab, "le pair mentions a label that is not an element");
    return e;
  }

  Rational rational_token() {
    const Token& p = expect(Tok::Int, "a rational p or p/q");
    if (peek().kind != Tok::Slash) return Rational(p.num);
    advance();
    const Token& q = expect(Tok::Int, "a denominator");
    if (q.num == 0) fail_at(Diagnostic::Code::Table, q, "zero denominator");
    return Rational(p.num, q.num);
  }

  TribeDecl tribe_body() {
    TribeDecl t;
    expect(Tok::LBrace, "'{'");
    std::size_t expected = 0;
    for (;;) {
      const Token& n = expect(Tok::Int, "a domain point");
      if (static_cast<std::size_t>(n.num) != expected)
        fail_at(Diagnostic::Code::Table, n, "tribe domain must list 0..k-1 in order");
      ++expected;
      if (peek().kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBrace, "'}'");
      break;
    }
    t.omega = expected;
    expect(Tok::Equals, "'='");
    expect(Tok::LBrace, "'{'");
    while (peek().kind != Tok::RBrace) {
      const Token& open = expect(Tok::LParen, "'('");
      std::vector<Rational> tuple;
      if (peek().kind != Tok::RParen) {
        tuple.push_back(rational_token());
        while (peek().kind == Tok::Comma) {
          advance();
          tuple.push_back(rational_token());
        }
      }
      expect(Tok::RParen, "')'");
      if (tuple.size() != t.omega)
        fail_at(Diagnostic::Code::Table, open, "tribe member arity must match the domain");
      for (const Rational& v : tuple)
        if (v < Rational(0) || Rational(1) < v)
          fail_at(Diagnostic::Code::Table, open, "tribe member values must lie in [0,1]");
      t.generators.push_back(std::move(tuple));
      if (peek().kind == Tok::Comma) advance();
    }
    advance();  // RBrace
    return t;
  }
};

std::string join_labels(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string Diagnostic::str() const {
  const char* kind = code == Code::Syntax ? "syntax" : code == Code::Arity ? "arity" : "table";
  return std::to_string(line) + ":" + std::to_string(column) + ": " + kind + " error: " + message;
}

bool AlgebraExpr::operator==(const AlgebraExpr& o) const {
  return node == o.node && order == o.order && args == o.args && labels == o.labels &&
         zero_label == o.zero_label && oplus_rows == o.oplus_rows && join_rows == o.join_rows &&
         le_pairs == o.le_pairs;
}

bool Statement::operator==(const Statement& o) const {
  return kind == o.kind && name == o.name && algebra == o.algebra && tribe == o.tribe;
}

const Statement* Document::find(const std::string& name) const {
  for (const Statement& s : statements)
    if (s.name == name) return &s;
  return nullptr;
}

const Statement* Document::first(Statement::Kind kind) const {
  for (const Statement& s : statements)
    if (s.kind == kind) return &s;
  return nullptr;
}

Document parse_spec(const std::string& text) { return Parser(lex(text)).parse(); }

std::string print_expr(const AlgebraExpr& e) {
  switch (e.node) {
    case AlgebraExpr::Node::Chain:
      return "chain(" + std::to_string(e.order) + ")";
    case AlgebraExpr::Node::Product:
      return "product(" + print_expr(e.args.at(0)) + ", " + print_expr(e.args.at(1)) + ")";
    case AlgebraExpr::Node::FinSupport:
      return "finsupport(chain(" + std::to_string(e.order) + "))";
    case AlgebraExpr::Node::FiniteSets:
      return "finite_sets";
    case AlgebraExpr::Node::Chang:
      return "chang";
    case AlgebraExpr::Node::Table:
      break;
  }
  std::string out = "table { elements: " + join_labels(e.labels, ", ");
  out += "; zero: " + e.zero_label;
  auto rows = [&](const std::vector<std::vector<std::string>>& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) s += "; ";
      s += join_labels(m[i], ",");
    }
    return s + "]";
  };
  out += "; oplus: " + rows(e.oplus_rows);
  if (!e.join_rows.empty()) {
    out += "; join: " + rows(e.join_rows);
  } else {
    out += "; le: [";
    for (std::size_t i = 0; i < e.le_pairs.size(); ++i) {
      if (i) out += ", ";
      out += e.le_pairs[i].first + "<" + e.le_pairs[i].second;
    }
    out += "]";
  }
  return out + " }";
}

std::string print_spec(const Document& doc) {
  std::string out;
  for (const Statement& s : doc.statements) {
    if (s.kind == Statement::Kind::Algebra) {
      out += "algebra " + s.name + " = " + print_expr(s.algebra) + "\n";
    } else {
      out += "tribe " + s.name + " on {";
      for (std::size_t i = 0; i < s.tribe.omega; ++i) {
        if (i) out += ",";
        out += std::to_string(i);
      }
      out += "} = {";
      for (std::size_t i = 0; i < s.tribe.generators.size(); ++i) {
        if (i) out += ", ";
        out += "(";
        for (std::size_t j = 0; j < s.tribe.generators[i].size(); ++j) {
          if (j) out += ",";
          out += s.tribe.generators[i][j].str();
        }
        out += ")";
      }
      out += "}\n";
    }
  }
  return out;
}

AlgebraPtr build_algebra(const AlgebraExpr& e, const std::string& name) {
  switch (e.node) {
    case AlgebraExpr::Node::Chain:
      return FiniteAlgebra::chain(e.order);
    case AlgebraExpr::Node::Product: {
      auto a = std::dynamic_pointer_cast<const FiniteAlgebra>(
          build_algebra(e.args.at(0), name + ".lhs"));
      auto b = std::dynamic_pointer_cast<const FiniteAlgebra>(
          build_algebra(e.args.at(1), name + ".rhs"));
      if (!a || !b) throw std::invalid_argument("build_algebra: product of non-finite parts");
      if (a->size() * b->size() > 4096)
        throw std::invalid_argument("build_algebra: product too large to materialize");
      return FiniteAlgebra::product(a, b);
    }
    case AlgebraExpr::Node::FinSupport:
      return FinSupportAlgebra::make(static_cast<std::uint32_t>(e.order));
    case AlgebraExpr::Node::FiniteSets:
      return FinSupportAlgebra::make(1);
    case AlgebraExpr::Node::Chang:
      return ChangAlgebra::make();
    case AlgebraExpr::Node::Table:
      break;
  }
  auto idx = [&](const std::string& label) {
    for (std::size_t i = 0; i < e.labels.size(); ++i)
      if (e.labels[i] == label) return i;
    throw std::invalid_argument("build_algebra: unknown label " + label);
  };
  std::vector<std::vector<std::size_t>> oplus;
  for (const auto& row : e.oplus_rows) {
    std::vector<std::size_t> r;
    for (const auto& cell : row) r.push_back(idx(cell));
    oplus.push_back(std::move(r));
  }
  std::optional<std::vector<std::vector<std::size_t>>> join;
  if (!e.join_rows.empty()) {
    join.emplace();
    for (const auto& row : e.join_rows) {
      std::vector<std::size_t> r;
      for (const auto& cell : row) r.push_back(idx(cell));
      join->push_back(std::move(r));
    }
  }
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> le;
  if (!e.le_pairs.empty() || e.join_rows.empty()) {
    le.emplace();
    for (const auto& [lo, hi] : e.le_pairs) le->emplace_back(idx(lo), idx(hi));
  }
  return FiniteAlgebra::from_tables(name, e.labels, idx(e.zero_label), std::move(oplus),
                                    std::move(join), std::move(le));
}

Tribe build_tribe(const TribeDecl& t) {
  std::vector<FuzzySet> members;
  members.reserve(t.generators.size());
  for (const auto& g : t.generators) members.push_back(FuzzySet{g});
  return Tribe::from_members(t.omega, std::move(members));
}

}  // namespace emv

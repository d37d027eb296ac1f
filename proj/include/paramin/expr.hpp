// Cost-expression language: u(x, y) as a tree, its parser and printer, an
// exact evaluator, and `specialize`, which folds everything that depends on x
// alone and returns a flat program in y used by the slice analysis.
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <type_traits>
#include <memory>
#include <string>
#include <vector>

#include "paramin/number.hpp"

namespace paramin {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

enum class Op : std::uint8_t {
  // numeric
  Const, X, Y, Neg, Add, Sub, Mul, Div, Abs, Min, Max, Indicator, Piecewise,
  // boolean
  Lt, Le, Gt, Ge, Eq, Ne, IsRat, And, Or, Not, True, False,
};

inline bool is_predicate_op(Op op) { return op >= Op::Lt; }

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  ExtendedReal value;  // Const only
  std::vector<NodePtr> kids;
  bool has_x = false;
  bool has_y = false;
  bool has_is_rat = false;
};

inline NodePtr make_node(Op op, std::vector<NodePtr> kids = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->has_x = op == Op::X;
  n->has_y = op == Op::Y;
  n->has_is_rat = op == Op::IsRat;
  for (const auto& k : kids) {
    n->has_x |= k->has_x;
    n->has_y |= k->has_y;
    n->has_is_rat |= k->has_is_rat;
  }
  n->kids = std::move(kids);
  return n;
}

inline NodePtr make_const(ExtendedReal v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = std::move(v);
  return n;
}

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
  if (a.op == Op::Const) {
    if (a.value.kind() != b.value.kind()) return false;
    if (a.value.is_finite() && !(a.value.is_exact() && b.value.is_exact() && *a.value.exact() == *b.value.exact()))
      return false;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!structurally_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------- lexer

struct Token {
  enum Kind { Number, Ident, Sym, End } kind;
  std::string text;
  int line, column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) { tokenize(src); }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  void tokenize(const std::string& s) {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::string t, int c) { tokens_.push_back({k, std::move(t), line, c}); };
    while (i < s.size()) {
      unsigned char ch = static_cast<unsigned char>(s[i]);
      int start_col = col;
      if (ch == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (std::isspace(ch)) {
        ++i;
        ++col;
        continue;
      }
      if (std::isdigit(ch) || (ch == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j < s.size() && s[j] == '.') {
          ++j;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
          if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
            while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
            j = k;
          }
        }
        push(Token::Number, s.substr(i, j - i), start_col);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      if (std::isalpha(ch) || ch == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        push(Token::Ident, s.substr(i, j - i), start_col);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      // UTF-8 operators
      static const std::pair<const char*, const char*> utf8[] = {
          {"\xE2\x88\x92", "-"}, {"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="},
          {"\xE2\x89\xA0", "!="}, {"\xC3\x97", "*"},     {"\xE2\x88\x9E", "inf"},
      };
      bool matched = false;
      for (const auto& [seq, rep] : utf8) {
        std::size_t n = std::strlen(seq);
        if (s.compare(i, n, seq) == 0) {
          push(std::string(rep) == "inf" ? Token::Ident : Token::Sym, rep, start_col);
          i += n;
          ++col;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      static const char* two[] = {"<=", ">=", "==", "!=", "&&", "||"};
      for (const char* t : two) {
        if (s.compare(i, 2, t) == 0) {
          push(Token::Sym, t, start_col);
          i += 2;
          col += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::strchr("+-*/(){}[],<>!=", ch) != nullptr) {
        push(Token::Sym, std::string(1, static_cast<char>(ch)), start_col);
        ++i;
        ++col;
        continue;
      }
      throw ParseError(std::string("unexpected character '") + static_cast<char>(ch) + "'", line, start_col);
    }
    tokens_.push_back({Token::End, "", line, col});
  }

  std::vector<Token> tokens_;
};

/// Exact value of a decimal literal such as "0.25" or "1e-3".
inline Rational parse_decimal(const std::string& text) {
  std::string mant = text, exp_part;
  auto epos = text.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = text.substr(0, epos);
    exp_part = text.substr(epos + 1);
  }
  std::string digits;
  long scale = 0;
  auto dot = mant.find('.');
  if (dot == std::string::npos) {
    digits = mant;
  } else {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    scale = static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty()) digits = "0";
  long e = exp_part.empty() ? 0 : std::stol(exp_part);
  mpz_class num(digits, 10);
  long p = e - scale;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(p >= 0 ? p : -p));
  Rational q = p >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- parser

/// Recursive-descent parser over a token stream; shared with the set grammar.
class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src), toks_(lex_.tokens()) {}

  NodePtr parse_full_expr() {
    NodePtr e = expr();
    expect_end();
    return e;
  }
  NodePtr parse_full_predicate() {
    NodePtr p = pred();
    expect_end();
    return p;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (is_sym("+") || is_sym("-")) {
      Op op = next().text == "+" ? Op::Add : Op::Sub;
      lhs = make_node(op, {lhs, term()});
    }
    return lhs;
  }

  NodePtr pred() {
    NodePtr lhs = conj();
    while (is_ident("or") || is_sym("||")) {
      next();
      lhs = make_node(Op::Or, {lhs, conj()});
    }
    return lhs;
  }

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_sym(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Sym && peek(ahead).text == s;
  }
  bool is_ident(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Ident && peek(ahead).text == s;
  }
  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    next();
  }
  void expect_end() {
    if (peek().kind != Token::End) fail("unexpected trailing input '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.line, t.column);
  }
  std::size_t position() const { return pos_; }
  void rewind(std::size_t p) { pos_ = p; }

 private:
  NodePtr term() {
    NodePtr lhs = unary();
    while (is_sym("*") || is_sym("/")) {
      Op op = next().text == "*" ? Op::Mul : Op::Div;
      lhs = make_node(op, {lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    if (is_sym("-")) {
      next();
      // a minus directly before a literal is part of the literal
      if (peek().kind == Token::Number) return make_const(ExtendedReal(Rational(-parse_decimal(next().text))));
      if (is_ident("inf")) {
        next();
        return make_const(ExtendedReal::neg_inf());
      }
      return make_node(Op::Neg, {unary()});
    }
    if (is_sym("+")) {
      next();
      return unary();
    }
    return primary();
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Token::Number) {
      next();
      return make_const(ExtendedReal(parse_decimal(t.text)));
    }
    if (is_sym("(")) {
      next();
      NodePtr e = expr();
      expect_sym(")");
      return e;
    }
    if (t.kind != Token::Ident) fail("expected an expression");
    std::string id = t.text;
    next();
    if (id == "x") return make_node(Op::X);
    if (id == "y") return make_node(Op::Y);
    if (id == "inf") return make_const(ExtendedReal::pos_inf());
    if (id == "sqrt2") return make_const(ExtendedReal(TaggedPoint::sqrt2()));
    if (id == "rat") {
      expect_sym("(");
      Rational p = signed_integer();
      expect_sym(",");
      Rational q = signed_integer();
      expect_sym(")");
      if (sgn(q) == 0) fail("rat() with zero denominator");
      Rational r = p / q;
      return make_const(ExtendedReal(r));
    }
    if (id == "abs") {
      expect_sym("(");
      NodePtr a = expr();
      expect_sym(")");
      return make_node(Op::Abs, {a});
    }
    if (id == "min" || id == "max") {
      Op op = id == "min" ? Op::Min : Op::Max;
      expect_sym("(");
      NodePtr acc = expr();
      expect_sym(",");
      acc = make_node(op, {acc, expr()});
      while (is_sym(",")) {
        next();
        acc = make_node(op, {acc, expr()});
      }
      expect_sym(")");
      return acc;
    }
    if (id == "piecewise") {
      expect_sym("(");
      NodePtr p = pred();
      expect_sym(",");
      NodePtr a = expr();
      expect_sym(",");
      NodePtr b = expr();
      expect_sym(")");
      return make_node(Op::Piecewise, {p, a, b});
    }
    if (id == "I") {
      expect_sym("{");
      NodePtr p = pred();
      expect_sym("}");
      return make_node(Op::Indicator, {p});
    }
    rewind(position() - 1);
    fail("unknown identifier '" + id + "'");
  }

  Rational signed_integer() {
    bool neg = false;
    if (is_sym("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Token::Number || peek().text.find_first_of(".eE") != std::string::npos)
      fail("expected an integer");
    Rational v = parse_decimal(next().text);
    return neg ? Rational(-v) : v;
  }

  NodePtr conj() {
    NodePtr lhs = negation();
    while (is_ident("and") || is_sym("&&")) {
      next();
      lhs = make_node(Op::And, {lhs, negation()});
    }
    return lhs;
  }

  NodePtr negation() {
    if (is_ident("not") || is_sym("!")) {
      next();
      return make_node(Op::Not, {negation()});
    }
    return atom();
  }

  NodePtr atom() {
    if (is_ident("true")) {
      next();
      return make_node(Op::True);
    }
    if (is_ident("false")) {
      next();
      return make_node(Op::False);
    }
    if (is_ident("is_rat")) {
      next();
      expect_sym("(");
      NodePtr e = expr();
      expect_sym(")");
      return make_node(Op::IsRat, {e});
    }
    if (is_sym("(")) {
      // either a parenthesized predicate or the start of an arithmetic operand
      std::size_t save = position();
      try {
        next();
        NodePtr p = pred();
        expect_sym(")");
        if (!is_comparison()) return p;
      } catch (const ParseError&) {
      }
      rewind(save);
    }
    NodePtr lhs = expr();
    if (!is_comparison()) fail("expected a comparison operator");
    std::string op = next().text;
    NodePtr rhs = expr();
    Op o = op == "<" ? Op::Lt : op == "<=" ? Op::Le : op == ">" ? Op::Gt : op == ">=" ? Op::Ge : op == "==" || op == "=" ? Op::Eq : Op::Ne;
    return make_node(o, {lhs, rhs});
  }

  bool is_comparison() const {
    return is_sym("<") || is_sym("<=") || is_sym(">") || is_sym(">=") || is_sym("==") || is_sym("!=") || is_sym("=");
  }

  Lexer lex_;
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
};

inline NodePtr parse_expr(const std::string& text) { return Parser(text).parse_full_expr(); }
inline NodePtr parse_predicate(const std::string& text) { return Parser(text).parse_full_predicate(); }

// ---------------------------------------------------------------- printer

inline std::string print_const(const ExtendedReal& v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  TaggedPoint t = v.to_tagged();
  auto rat_str = [](const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "rat(" + q.get_num().get_str() + "," + q.get_den().get_str() + ")";
  };
  if (t.is_rational()) return rat_str(t.value());
  if (sgn(t.value()) == 0 && t.sqrt2_coeff() == 1) return "sqrt2";
  return "(" + rat_str(t.value()) + "+" + rat_str(t.sqrt2_coeff()) + "*sqrt2)";
}

/// Fully parenthesized; parse_expr(print(e)) reproduces e for parsed trees.
inline std::string print(const Node& n) {
  auto bin = [&](const char* op) { return "(" + print(*n.kids[0]) + " " + op + " " + print(*n.kids[1]) + ")"; };
  switch (n.op) {
    case Op::Const: return print_const(n.value);
    case Op::X: return "x";
    case Op::Y: return "y";
    case Op::Neg: return "-(" + print(*n.kids[0]) + ")";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Abs: return "abs(" + print(*n.kids[0]) + ")";
    case Op::Min: return "min(" + print(*n.kids[0]) + ", " + print(*n.kids[1]) + ")";
    case Op::Max: return "max(" + print(*n.kids[0]) + ", " + print(*n.kids[1]) + ")";
    case Op::Indicator: return "I{" + print(*n.kids[0]) + "}";
    case Op::Piecewise:
      return "piecewise(" + print(*n.kids[0]) + ", " + print(*n.kids[1]) + ", " + print(*n.kids[2]) + ")";
    case Op::Lt: return bin("<");
    case Op::Le: return bin("<=");
    case Op::Gt: return bin(">");
    case Op::Ge: return bin(">=");
    case Op::Eq: return bin("==");
    case Op::Ne: return bin("!=");
    case Op::IsRat: return "is_rat(" + print(*n.kids[0]) + ")";
    case Op::And: return "(" + print(*n.kids[0]) + " and " + print(*n.kids[1]) + ")";
    case Op::Or: return "(" + print(*n.kids[0]) + " or " + print(*n.kids[1]) + ")";
    case Op::Not: return "not " + print(*n.kids[0]);
    case Op::True: return "true";
    case Op::False: return "false";
  }
  return "?";
}

// ---------------------------------------------------------------- exact evaluation

struct EvalOptions {
  /// is_rat of an inexact value is false instead of an error.
  bool float_is_irrational = false;
};

namespace detail {

inline ExtendedReal checked_mul(const ExtendedReal& a, const ExtendedReal& b) { return a * b; }

inline bool compare_op(Op op, int c) {
  switch (op) {
    case Op::Lt: return c < 0;
    case Op::Le: return c <= 0;
    case Op::Gt: return c > 0;
    case Op::Ge: return c >= 0;
    case Op::Eq: return c == 0;
    case Op::Ne: return c != 0;
    default: return false;
  }
}

inline std::string point_str(const TaggedPoint& x, const TaggedPoint* y) {
  return "(x=" + x.str() + (y ? ", y=" + y->str() : std::string()) + ")";
}

}  // namespace detail

/// Lazy exact evaluation; only the taken branch of piecewise/I is evaluated.
/// y may be null for expressions that do not mention y.
inline ExtendedReal eval_expr(const Node& n, const TaggedPoint& x, const TaggedPoint* y, const EvalOptions& opt = {});

inline bool eval_pred(const Node& n, const TaggedPoint& x, const TaggedPoint* y, const EvalOptions& opt = {}) {
  switch (n.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_pred(*n.kids[0], x, y, opt);
    case Op::And: {
      bool a = eval_pred(*n.kids[0], x, y, opt);
      bool b = eval_pred(*n.kids[1], x, y, opt);
      return a && b;
    }
    case Op::Or: {
      bool a = eval_pred(*n.kids[0], x, y, opt);
      bool b = eval_pred(*n.kids[1], x, y, opt);
      return a || b;
    }
    case Op::IsRat: {
      ExtendedReal v = eval_expr(*n.kids[0], x, y, opt);
      if (!v.is_finite()) throw EvalError("is_rat of an infinite value at " + detail::point_str(x, y));
      if (!v.is_exact()) {
        if (opt.float_is_irrational) return false;
        throw EvalError("is_rat of an inexact value at " + detail::point_str(x, y));
      }
      return v.exact()->is_rational();
    }
    default: {
      ExtendedReal a = eval_expr(*n.kids[0], x, y, opt);
      ExtendedReal b = eval_expr(*n.kids[1], x, y, opt);
      return detail::compare_op(n.op, compare(a, b));
    }
  }
}

inline ExtendedReal eval_expr(const Node& n, const TaggedPoint& x, const TaggedPoint* y, const EvalOptions& opt) {
  try {
    switch (n.op) {
      case Op::Const: return n.value;
      case Op::X: return ExtendedReal(x);
      case Op::Y:
        if (!y) throw EvalError("expression mentions y where only x is available");
        return ExtendedReal(*y);
      case Op::Neg: return -eval_expr(*n.kids[0], x, y, opt);
      case Op::Add: return eval_expr(*n.kids[0], x, y, opt) + eval_expr(*n.kids[1], x, y, opt);
      case Op::Sub: return eval_expr(*n.kids[0], x, y, opt) - eval_expr(*n.kids[1], x, y, opt);
      case Op::Mul: return eval_expr(*n.kids[0], x, y, opt) * eval_expr(*n.kids[1], x, y, opt);
      case Op::Div: return eval_expr(*n.kids[0], x, y, opt) / eval_expr(*n.kids[1], x, y, opt);
      case Op::Abs: return abs(eval_expr(*n.kids[0], x, y, opt));
      case Op::Min: return min(eval_expr(*n.kids[0], x, y, opt), eval_expr(*n.kids[1], x, y, opt));
      case Op::Max: return max(eval_expr(*n.kids[0], x, y, opt), eval_expr(*n.kids[1], x, y, opt));
      case Op::Indicator: return ExtendedReal(eval_pred(*n.kids[0], x, y, opt) ? 1 : 0);
      case Op::Piecewise:
        return eval_pred(*n.kids[0], x, y, opt) ? eval_expr(*n.kids[1], x, y, opt) : eval_expr(*n.kids[2], x, y, opt);
      default: throw EvalError("predicate used where a number is expected");
    }
  } catch (const DomainError& e) {
    throw EvalError(std::string(e.what()) + " at " + detail::point_str(x, y));
  }
}

// ---------------------------------------------------------------- programs in y

/// Decision state of a node: sign of its discriminant, or kErrorState.
using Trace = std::vector<std::int8_t>;
constexpr std::int8_t kErrorState = 2;

enum class YOp : std::uint8_t {
  Const, Y, Neg, Add, Sub, Mul, Div, Abs, Min, Max, Select, Cmp, And, Or, Not, BoolConst, Error,
};

struct YNode {
  YOp op;
  Op cmp = Op::Lt;  // for Cmp
  int a = -1, b = -1, c = -1;
  ExtendedReal k;   // Const / BoolConst (0 or 1)
  double kd = 0.0;
  std::string error;  // Error
};

/// u(x, .) for one fixed x, as a post-order program: children precede parents.
/// Decision nodes (Abs, Min, Max, Div, Cmp) carry a sign in the trace.
class YProgram {
 public:
  const std::vector<YNode>& nodes() const { return nodes_; }
  int root() const { return static_cast<int>(nodes_.size()) - 1; }
  bool constant() const { return constant_; }
  std::size_t size() const { return nodes_.size(); }
  static bool is_decision(YOp op) {
    return op == YOp::Abs || op == YOp::Min || op == YOp::Max || op == YOp::Div || op == YOp::Cmp;
  }

  int add(YNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  void finalize() {
    constant_ = !reaches(root(), YOp::Y);
  }
  /// True if the subtree at i contains a node with the given op.
  bool reaches(int i, YOp op) const {
    if (i < 0) return false;
    const YNode& n = nodes_[i];
    if (n.op == op) return true;
    return reaches(n.a, op) || reaches(n.b, op) || reaches(n.c, op);
  }

  /// Double evaluation of every node; errors become NaN.  Fills `trace`.
  /// Returns the smallest relative discriminant magnitude seen, so callers can
  /// detect decisions too close to call in floating point.
  double eval_double(double y, Trace& trace, double& out) const;

  /// Exact evaluation of every node (errors recorded, not thrown).
  /// Throws EvalError only if the root itself errors.
  ExtendedReal eval_exact(const TaggedPoint& y, Trace* trace) const;

  /// Evaluation with every decision forced from `frozen`.  A division whose
  /// denominator vanishes exactly yields the signed infinity implied by the
  /// frozen denominator sign.  `node` selects a subtree (default root).
  ExtendedReal eval_frozen(const TaggedPoint& y, const Trace& frozen, int node = -1) const;
  double eval_frozen_double(double y, const Trace& frozen, int node = -1) const;

  /// Discriminant of decision node i evaluated with descendants frozen.
  ExtendedReal discriminant(int i, const TaggedPoint& y, const Trace& frozen) const;

 private:
  std::vector<YNode> nodes_;
  bool constant_ = true;
};

namespace detail {

inline std::int8_t sign_state(double d) { return static_cast<std::int8_t>((d > 0) - (d < 0)); }

inline double mul_double(double a, double b) {
  if (a == 0.0 || b == 0.0) {
    if (std::isnan(a) || std::isnan(b)) return std::nan("");
    return 0.0;
  }
  return a * b;
}

inline double div_double(double a, double b) {
  if (b == 0.0 || std::isnan(a) || std::isnan(b)) return std::nan("");
  if (std::isinf(b)) return std::isinf(a) ? std::nan("") : 0.0;
  return a / b;
}

inline int cmp_double(double a, double b) { return (a > b) - (a < b); }

}  // namespace detail

inline double YProgram::eval_double(double y, Trace& trace, double& out) const {
  thread_local std::vector<double> v;
  v.resize(nodes_.size());
  trace.assign(nodes_.size(), 0);
  double closest = std::numeric_limits<double>::infinity();
  auto note = [&](double disc, double scale) {
    if (std::isfinite(disc)) closest = std::min(closest, std::fabs(disc) / std::max(1.0, scale));
  };
  const double nan = std::nan("");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const YNode& n = nodes_[i];
    double r = 0.0;
    switch (n.op) {
      case YOp::Const: r = n.kd; break;
      case YOp::Y: r = y; break;
      case YOp::Neg: r = -v[n.a]; break;
      case YOp::Add: r = v[n.a] + v[n.b]; break;
      case YOp::Sub: r = v[n.a] - v[n.b]; break;
      case YOp::Mul: r = detail::mul_double(v[n.a], v[n.b]); break;
      case YOp::Div: {
        double den = v[n.b];
        trace[i] = std::isnan(den) ? kErrorState : detail::sign_state(den);
        note(den, std::fabs(v[n.a]));
        r = detail::div_double(v[n.a], den);
        break;
      }
      case YOp::Abs: {
        double a = v[n.a];
        trace[i] = std::isnan(a) ? kErrorState : detail::sign_state(a);
        note(a, 1.0);
        r = std::fabs(a);
        break;
      }
      case YOp::Min:
      case YOp::Max: {
        double a = v[n.a], b = v[n.b];
        if (std::isnan(a) || std::isnan(b)) {
          trace[i] = kErrorState;
          r = nan;
        } else {
          int c = detail::cmp_double(a, b);
          trace[i] = static_cast<std::int8_t>(c);
          if (std::isfinite(a) && std::isfinite(b)) note(a - b, std::max(std::fabs(a), std::fabs(b)));
          r = (n.op == YOp::Min) == (c <= 0) ? a : b;
        }
        break;
      }
      case YOp::Cmp: {
        double a = v[n.a], b = v[n.b];
        if (std::isnan(a) || std::isnan(b)) {
          trace[i] = kErrorState;
          r = nan;
        } else {
          int c = detail::cmp_double(a, b);
          trace[i] = static_cast<std::int8_t>(c);
          if (std::isfinite(a) && std::isfinite(b)) note(a - b, std::max(std::fabs(a), std::fabs(b)));
          r = detail::compare_op(n.cmp, c) ? 1.0 : 0.0;
        }
        break;
      }
      case YOp::Select: {
        double p = v[n.a];
        r = std::isnan(p) ? nan : (p != 0.0 ? v[n.b] : v[n.c]);
        break;
      }
      case YOp::And: r = (std::isnan(v[n.a]) || std::isnan(v[n.b])) ? nan : ((v[n.a] != 0 && v[n.b] != 0) ? 1.0 : 0.0); break;
      case YOp::Or: r = (std::isnan(v[n.a]) || std::isnan(v[n.b])) ? nan : ((v[n.a] != 0 || v[n.b] != 0) ? 1.0 : 0.0); break;
      case YOp::Not: r = std::isnan(v[n.a]) ? nan : (v[n.a] != 0 ? 0.0 : 1.0); break;
      case YOp::BoolConst: r = n.kd; break;
      case YOp::Error: r = nan; break;
    }
    v[i] = r;
  }
  out = v.back();
  return closest;
}

inline ExtendedReal YProgram::eval_exact(const TaggedPoint& y, Trace* trace) const {
  struct Slot {
    bool ok = true;
    ExtendedReal v;
  };
  std::vector<Slot> s(nodes_.size());
  if (trace) trace->assign(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const YNode& n = nodes_[i];
    Slot& out = s[i];
    auto bad = [&]() {
      out.ok = false;
      if (trace && is_decision(n.op)) (*trace)[i] = kErrorState;
    };
    try {
      switch (n.op) {
        case YOp::Const:
        case YOp::BoolConst: out.v = n.k; break;
        case YOp::Y: out.v = ExtendedReal(y); break;
        case YOp::Error: bad(); break;
        case YOp::Neg:
          if (!s[n.a].ok) bad(); else out.v = -s[n.a].v;
          break;
        case YOp::Add:
        case YOp::Sub:
        case YOp::Mul:
          if (!s[n.a].ok || !s[n.b].ok) {
            bad();
          } else if (n.op == YOp::Add) {
            out.v = s[n.a].v + s[n.b].v;
          } else if (n.op == YOp::Sub) {
            out.v = s[n.a].v - s[n.b].v;
          } else {
            out.v = s[n.a].v * s[n.b].v;
          }
          break;
        case YOp::Div:
          if (!s[n.a].ok || !s[n.b].ok) {
            bad();
          } else {
            if (trace) (*trace)[i] = static_cast<std::int8_t>(s[n.b].v.sign());
            out.v = s[n.a].v / s[n.b].v;
          }
          break;
        case YOp::Abs:
          if (!s[n.a].ok) {
            bad();
          } else {
            if (trace) (*trace)[i] = static_cast<std::int8_t>(s[n.a].v.sign());
            out.v = abs(s[n.a].v);
          }
          break;
        case YOp::Min:
        case YOp::Max:
        case YOp::Cmp: {
          if (!s[n.a].ok || !s[n.b].ok) {
            bad();
            break;
          }
          int c = compare(s[n.a].v, s[n.b].v);
          if (trace) (*trace)[i] = static_cast<std::int8_t>(c);
          if (n.op == YOp::Cmp) {
            out.v = ExtendedReal(detail::compare_op(n.cmp, c) ? 1 : 0);
          } else {
            out.v = (n.op == YOp::Min) == (c <= 0) ? s[n.a].v : s[n.b].v;
          }
          break;
        }
        case YOp::Select:
          if (!s[n.a].ok) {
            bad();
          } else {
            const Slot& pick = s[n.a].v.sign() != 0 ? s[n.b] : s[n.c];
            if (!pick.ok) bad(); else out.v = pick.v;
          }
          break;
        case YOp::And:
        case YOp::Or:
          if (!s[n.a].ok || !s[n.b].ok) {
            bad();
          } else {
            bool a = s[n.a].v.sign() != 0, b = s[n.b].v.sign() != 0;
            out.v = ExtendedReal((n.op == YOp::And ? (a && b) : (a || b)) ? 1 : 0);
          }
          break;
        case YOp::Not:
          if (!s[n.a].ok) bad(); else out.v = ExtendedReal(s[n.a].v.sign() != 0 ? 0 : 1);
          break;
      }
    } catch (const DomainError&) {
      bad();
    }
  }
  if (!s.back().ok) {
    std::string why = "undefined value";
    for (const auto& n : nodes_)
      if (n.op == YOp::Error) why = n.error;
    throw EvalError(why + " at y=" + y.str());
  }
  return s.back().v;
}

namespace detail {

/// Frozen evaluation over value type V (double or ExtendedReal), recursive
/// over the subtree rooted at `i`.
template <class V>
struct FrozenEval {
  const std::vector<YNode>& nodes;
  const Trace& frozen;
  V y;

  static V from_const(const YNode& n) {
    if constexpr (std::is_same_v<V, double>) return n.kd; else return n.k;
  }
  static int sign_of(const V& v) {
    if constexpr (std::is_same_v<V, double>) return (v > 0) - (v < 0); else return v.sign();
  }
  static V inf(int s) {
    if constexpr (std::is_same_v<V, double>) {
      return s > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    } else {
      return ExtendedReal::infinity(s);
    }
  }
  static V num(int k) { return V(k); }
  [[noreturn]] static void undefined(const std::string& why) { throw EvalError(why); }

  bool truth(int i) {
    const YNode& n = nodes[i];
    switch (n.op) {
      case YOp::BoolConst: return sign_of(from_const(n)) != 0;
      case YOp::Cmp: {
        std::int8_t st = frozen[i];
        if (st == kErrorState) undefined("comparison of undefined values");
        return compare_op(n.cmp, st);
      }
      case YOp::And: {
        bool a = truth(n.a), b = truth(n.b);
        return a && b;
      }
      case YOp::Or: {
        bool a = truth(n.a), b = truth(n.b);
        return a || b;
      }
      case YOp::Not: return !truth(n.a);
      case YOp::Error: undefined(n.error);
      default: return sign_of(value(i)) != 0;
    }
  }

  V value(int i) {
    const YNode& n = nodes[i];
    std::int8_t st = frozen[i];
    switch (n.op) {
      case YOp::Const: return from_const(n);
      case YOp::BoolConst: return from_const(n);
      case YOp::Y: return y;
      case YOp::Neg: return -value(n.a);
      case YOp::Add: return value(n.a) + value(n.b);
      case YOp::Sub: return value(n.a) - value(n.b);
      case YOp::Mul: {
        V a = value(n.a), b = value(n.b);
        if constexpr (std::is_same_v<V, double>) return mul_double(a, b); else return a * b;
      }
      case YOp::Div: {
        if (st == kErrorState) undefined("division by zero");
        V a = value(n.a), b = value(n.b);
        if (sign_of(b) == 0) {
          int sa = sign_of(a);
          if (sa == 0 || st == 0) undefined("indeterminate quotient 0/0");
          return inf(sa * st);
        }
        if constexpr (std::is_same_v<V, double>) return div_double(a, b); else return a / b;
      }
      case YOp::Abs: {
        V a = value(n.a);
        if (st == kErrorState) undefined("undefined value");
        if (st < 0) return -a;
        if (st > 0) return a;
        return sign_of(a) < 0 ? V(-a) : a;
      }
      case YOp::Min:
      case YOp::Max: {
        if (st == kErrorState) undefined("undefined value");
        bool first = (n.op == YOp::Min) == (st <= 0);
        return first ? value(n.a) : value(n.b);
      }
      case YOp::Select: return truth(n.a) ? value(n.b) : value(n.c);
      case YOp::Cmp:
      case YOp::And:
      case YOp::Or:
      case YOp::Not: return num(truth(i) ? 1 : 0);
      case YOp::Error: undefined(n.error);
    }
    undefined("bad node");
  }
};

}  // namespace detail

inline ExtendedReal YProgram::eval_frozen(const TaggedPoint& y, const Trace& frozen, int node) const {
  detail::FrozenEval<ExtendedReal> ev{nodes_, frozen, ExtendedReal(y)};
  try {
    return ev.value(node < 0 ? root() : node);
  } catch (const DomainError& e) {
    throw EvalError(std::string(e.what()) + " at y=" + y.str());
  }
}

inline double YProgram::eval_frozen_double(double y, const Trace& frozen, int node) const {
  detail::FrozenEval<double> ev{nodes_, frozen, y};
  try {
    return ev.value(node < 0 ? root() : node);
  } catch (const EvalError&) {
    return std::nan("");
  }
}

inline ExtendedReal YProgram::discriminant(int i, const TaggedPoint& y, const Trace& frozen) const {
  const YNode& n = nodes_[i];
  switch (n.op) {
    case YOp::Abs: return eval_frozen(y, frozen, n.a);
    case YOp::Div: return eval_frozen(y, frozen, n.b);
    case YOp::Min:
    case YOp::Max:
    case YOp::Cmp: return eval_frozen(y, frozen, n.a) - eval_frozen(y, frozen, n.b);
    default: throw EvalError("not a decision node");
  }
}

/// Folds every y-free subtree at the exact point x.  Subtrees whose folding
/// fails (e.g. 1/x at x = 0) become Error nodes, which only matter if the
/// branch containing them is taken.
inline YProgram specialize(const Node& root, const TaggedPoint& x, const EvalOptions& opt = {}) {
  YProgram prog;
  std::function<int(const Node&)> build = [&](const Node& n) -> int {
    if (!n.has_y) {
      YNode c;
      try {
        if (is_predicate_op(n.op)) {
          c.op = YOp::BoolConst;
          c.k = ExtendedReal(eval_pred(n, x, nullptr, opt) ? 1 : 0);
        } else {
          c.op = YOp::Const;
          c.k = eval_expr(n, x, nullptr, opt);
        }
        c.kd = c.k.numeric();
      } catch (const Error& e) {
        c = YNode{};
        c.op = YOp::Error;
        c.error = e.what();
      }
      return prog.add(std::move(c));
    }
    YNode r;
    switch (n.op) {
      case Op::Y: r.op = YOp::Y; break;
      case Op::Neg: r.op = YOp::Neg; r.a = build(*n.kids[0]); break;
      case Op::Add: r.op = YOp::Add; break;
      case Op::Sub: r.op = YOp::Sub; break;
      case Op::Mul: r.op = YOp::Mul; break;
      case Op::Div: r.op = YOp::Div; break;
      case Op::Min: r.op = YOp::Min; break;
      case Op::Max: r.op = YOp::Max; break;
      case Op::And: r.op = YOp::And; break;
      case Op::Or: r.op = YOp::Or; break;
      case Op::Abs: r.op = YOp::Abs; r.a = build(*n.kids[0]); break;
      case Op::Not: r.op = YOp::Not; r.a = build(*n.kids[0]); break;
      case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: case Op::Eq: case Op::Ne:
        r.op = YOp::Cmp;
        r.cmp = n.op;
        break;
      case Op::IsRat:
        throw EvalError("is_rat of an expression in y is not supported by the slice analysis");
      case Op::Indicator:
      case Op::Piecewise: {
        const Node& p = *n.kids[0];
        if (!p.has_y) {
          // branch fixed at this x
          try {
            bool taken = eval_pred(p, x, nullptr, opt);
            if (n.op == Op::Indicator) {
              YNode c;
              c.op = YOp::Const;
              c.k = ExtendedReal(taken ? 1 : 0);
              c.kd = taken ? 1.0 : 0.0;
              return prog.add(std::move(c));
            }
            return build(*n.kids[taken ? 1 : 2]);
          } catch (const Error& e) {
            YNode c;
            c.op = YOp::Error;
            c.error = e.what();
            return prog.add(std::move(c));
          }
        }
        r.op = YOp::Select;
        r.a = build(p);
        if (n.op == Op::Indicator) {
          YNode one, zero;
          one.op = zero.op = YOp::Const;
          one.k = ExtendedReal(1);
          one.kd = 1.0;
          zero.k = ExtendedReal(0);
          r.b = prog.add(std::move(one));
          r.c = prog.add(std::move(zero));
        } else {
          r.b = build(*n.kids[1]);
          r.c = build(*n.kids[2]);
        }
        return prog.add(std::move(r));
      }
      default: throw EvalError("unexpected node in cost expression");
    }
    if (r.a < 0 && !n.kids.empty()) {
      r.a = build(*n.kids[0]);
      if (n.kids.size() > 1) r.b = build(*n.kids[1]);
    }
    if (r.op == YOp::Mul) {
      // 0 * g(y) == 0 whenever g is defined; y ranges over finite reals
      auto zero = [&](int i) {
        const YNode& k = prog.nodes()[i];
        return k.op == YOp::Const && k.k.is_exact() && k.k.sign() == 0;
      };
      auto total = [&](int i) { return !prog.reaches(i, YOp::Error) && !prog.reaches(i, YOp::Div); };
      if ((zero(r.a) && total(r.b)) || (zero(r.b) && total(r.a))) {
        YNode c;
        c.op = YOp::Const;
        c.k = ExtendedReal(0);
        return prog.add(std::move(c));
      }
    }
    return prog.add(std::move(r));
  };
  build(root);
  prog.finalize();
  return prog;
}

}  // namespace paramin

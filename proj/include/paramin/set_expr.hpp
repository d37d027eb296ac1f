// Feasible-set expressions Phi(x): interval literals with x-dependent
// endpoints, finite sets, rays, unions and conditionals on x.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "paramin/expr.hpp"
#include "paramin/interval_set.hpp"

namespace paramin {

enum class SetOp : std::uint8_t { Empty, Reals, Interval, Finite, Union, Ray, If };

struct SetNode;
using SetNodePtr = std::shared_ptr<const SetNode>;

struct SetNode {
  SetOp op;
  NodePtr lo, hi;                // Interval; Ray uses lo as the finite end
  bool lo_closed = true, hi_closed = true;
  int ray_direction = 0;         // +1 towards +inf, -1 towards -inf
  bool ray_closed = true;
  std::vector<NodePtr> elems;    // Finite
  std::vector<SetNodePtr> kids;  // Union, If (then, else)
  NodePtr pred;                  // If
};

namespace detail {

class SetParser {
 public:
  explicit SetParser(const std::string& src) : p_(src) {}

  SetNodePtr parse_full() {
    SetNodePtr s = set();
    p_.expect_end();
    return s;
  }

 private:
  NodePtr x_expr() {
    const Token& at = p_.peek();
    NodePtr e = p_.expr();
    if (e->has_y) throw ParseError("set expressions may depend on x only", at.line, at.column);
    return e;
  }

  SetNodePtr set() {
    auto n = std::make_shared<SetNode>();
    if (p_.is_ident("empty")) {
      p_.next();
      n->op = SetOp::Empty;
      return n;
    }
    if (p_.is_ident("reals")) {
      p_.next();
      n->op = SetOp::Reals;
      return n;
    }
    if (p_.is_ident("union")) {
      p_.next();
      n->op = SetOp::Union;
      p_.expect_sym("(");
      n->kids.push_back(set());
      while (p_.is_sym(",")) {
        p_.next();
        n->kids.push_back(set());
      }
      p_.expect_sym(")");
      return n;
    }
    if (p_.is_ident("ray")) {
      p_.next();
      n->op = SetOp::Ray;
      p_.expect_sym("(");
      n->lo = x_expr();
      p_.expect_sym(",");
      bool neg = false;
      if (p_.is_sym("+")) {
        p_.next();
      } else if (p_.is_sym("-")) {
        p_.next();
        neg = true;
      }
      if (!p_.is_ident("inf")) p_.fail("expected +inf or -inf");
      p_.next();
      n->ray_direction = neg ? -1 : 1;
      p_.expect_sym(",");
      if (p_.is_ident("open")) {
        n->ray_closed = false;
      } else if (p_.is_ident("closed")) {
        n->ray_closed = true;
      } else {
        p_.fail("expected 'open' or 'closed'");
      }
      p_.next();
      p_.expect_sym(")");
      return n;
    }
    if (p_.is_ident("if")) {
      p_.next();
      n->op = SetOp::If;
      n->pred = p_.pred();
      if (n->pred->has_y) p_.fail("set conditions may depend on x only");
      if (!p_.is_ident("then")) p_.fail("expected 'then'");
      p_.next();
      n->kids.push_back(set());
      if (!p_.is_ident("else")) p_.fail("expected 'else'");
      p_.next();
      n->kids.push_back(set());
      return n;
    }
    if (p_.is_sym("{")) {
      p_.next();
      n->op = SetOp::Finite;
      n->elems.push_back(x_expr());
      while (p_.is_sym(",")) {
        p_.next();
        n->elems.push_back(x_expr());
      }
      p_.expect_sym("}");
      return n;
    }
    if (p_.is_sym("[") || p_.is_sym("(")) {
      n->op = SetOp::Interval;
      n->lo_closed = p_.next().text == "[";
      n->lo = x_expr();
      p_.expect_sym(",");
      n->hi = x_expr();
      if (p_.is_sym("]")) {
        n->hi_closed = true;
      } else if (p_.is_sym(")")) {
        n->hi_closed = false;
      } else {
        p_.fail("expected ']' or ')'");
      }
      p_.next();
      return n;
    }
    p_.fail("expected a set expression");
  }

  Parser p_;
};

}  // namespace detail

inline SetNodePtr parse_set(const std::string& text) { return detail::SetParser(text).parse_full(); }

inline std::string print_set(const SetNode& n) {
  switch (n.op) {
    case SetOp::Empty: return "empty";
    case SetOp::Reals: return "reals";
    case SetOp::Interval:
      return std::string(n.lo_closed ? "[" : "(") + print(*n.lo) + ", " + print(*n.hi) + (n.hi_closed ? "]" : ")");
    case SetOp::Finite: {
      std::string s = "{";
      for (std::size_t i = 0; i < n.elems.size(); ++i) s += (i ? ", " : "") + print(*n.elems[i]);
      return s + "}";
    }
    case SetOp::Union: {
      std::string s = "union(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) s += (i ? ", " : "") + print_set(*n.kids[i]);
      return s + ")";
    }
    case SetOp::Ray:
      return "ray(" + print(*n.lo) + ", " + (n.ray_direction > 0 ? "+inf" : "-inf") + ", " +
             (n.ray_closed ? "closed" : "open") + ")";
    case SetOp::If:
      return "if " + print(*n.pred) + " then " + print_set(*n.kids[0]) + " else " + print_set(*n.kids[1]);
  }
  return "?";
}

inline bool set_mentions_is_rat(const SetNode& n) {
  bool r = false;
  if (n.lo) r |= n.lo->has_is_rat;
  if (n.hi) r |= n.hi->has_is_rat;
  if (n.pred) r |= n.pred->has_is_rat;
  for (const auto& e : n.elems) r |= e->has_is_rat;
  for (const auto& k : n.kids) r |= set_mentions_is_rat(*k);
  return r;
}

/// Canonical IntervalSet at the exact point x.  An endpoint that cannot be
/// evaluated, or lo > hi, is an EvalError.
inline IntervalSet eval_set(const SetNode& n, const TaggedPoint& x, const EvalOptions& opt = {}) {
  auto end = [&](const NodePtr& e) { return eval_expr(*e, x, nullptr, opt); };
  switch (n.op) {
    case SetOp::Empty: return {};
    case SetOp::Reals: return IntervalSet::reals();
    case SetOp::Interval: {
      ExtendedReal lo = end(n.lo), hi = end(n.hi);
      if (lo > hi) throw EvalError("interval with lo > hi (" + lo.str() + " > " + hi.str() + ") at x=" + x.str());
      auto iv = Interval::make(lo, hi, n.lo_closed, n.hi_closed);
      return iv ? IntervalSet(*iv) : IntervalSet();
    }
    case SetOp::Finite: {
      std::vector<Interval> pts;
      for (const auto& e : n.elems) {
        ExtendedReal v = end(e);
        if (!v.is_finite()) throw EvalError("infinite element in a finite set at x=" + x.str());
        pts.push_back(Interval::point(v));
      }
      return IntervalSet::normalize(std::move(pts));
    }
    case SetOp::Union: {
      std::vector<Interval> all;
      for (const auto& k : n.kids) {
        IntervalSet s = eval_set(*k, x, opt);
        all.insert(all.end(), s.pieces().begin(), s.pieces().end());
      }
      return IntervalSet::normalize(std::move(all));
    }
    case SetOp::Ray: {
      ExtendedReal a = end(n.lo);
      if (!a.is_finite()) throw EvalError("ray with an infinite end point at x=" + x.str());
      auto iv = n.ray_direction > 0 ? Interval::make(a, ExtendedReal::pos_inf(), n.ray_closed, false)
                                    : Interval::make(ExtendedReal::neg_inf(), a, false, n.ray_closed);
      return IntervalSet(*iv);
    }
    case SetOp::If: return eval_pred(*n.pred, x, nullptr, opt) ? eval_set(*n.kids[0], x, opt) : eval_set(*n.kids[1], x, opt);
  }
  return {};
}

}  // namespace paramin

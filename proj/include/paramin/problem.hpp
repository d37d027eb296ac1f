// Problem description, YAML loading and validation.
#pragma once

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paramin/expr.hpp"
#include "paramin/set_expr.hpp"

namespace paramin {

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A constant expression (no x, no y) evaluated exactly, e.g. "1/2", "sqrt2/2".
inline TaggedPoint parse_point(const std::string& text) {
  NodePtr e = parse_expr(text);
  if (e->has_x || e->has_y) throw SchemaError("point literal '" + text + "' must not mention x or y");
  ExtendedReal v = eval_expr(*e, TaggedPoint(0), nullptr);
  if (!v.is_finite()) throw SchemaError("point literal '" + text + "' is not finite");
  return v.to_tagged();
}

inline ExtendedReal parse_extended(const std::string& text) {
  NodePtr e = parse_expr(text);
  if (e->has_x || e->has_y) throw SchemaError("literal '" + text + "' must not mention x or y");
  return eval_expr(*e, TaggedPoint(0), nullptr);
}

inline bool set_mentions_x(const SetNode& n) {
  bool r = false;
  if (n.lo) r |= n.lo->has_x;
  if (n.hi) r |= n.hi->has_x;
  if (n.pred) r |= n.pred->has_x;
  for (const auto& e : n.elems) r |= e->has_x;
  for (const auto& k : n.kids) r |= set_mentions_x(*k);
  return r;
}

struct Problem {
  std::string name;
  IntervalSet x_domain;
  IntervalSet y_domain;
  NodePtr u;
  SetNodePtr phi;
  bool nonempty_required = true;
  EvalOptions eval;
  std::string notes;
  /// Bounded analysis window in x (the x_domain hull unless declared).
  Rational window_lo, window_hi;

  bool mentions_is_rat() const { return u->has_is_rat || set_mentions_is_rat(*phi); }
  Rational window_width() const { return window_hi - window_lo; }
  bool in_x_domain(const TaggedPoint& x) const { return x_domain.member(ExtendedReal(x)); }
  bool in_window(const TaggedPoint& x) const {
    return x_domain.member(ExtendedReal(x)) && TaggedPoint(window_lo) <= x && x <= TaggedPoint(window_hi);
  }

  IntervalSet feasible(const TaggedPoint& x) const { return eval_set(*phi, x, eval); }
};

// ---------------------------------------------------------------- x breakpoints

namespace detail {

/// Decision probes on y-free, x-dependent subtrees of u and Phi.
struct XProbe {
  const Node* node;
};

inline void collect_x_probes(const Node& n, std::vector<XProbe>& out) {
  bool decision = n.op == Op::Abs || n.op == Op::Min || n.op == Op::Max || n.op == Op::Div ||
                  (n.op >= Op::Lt && n.op <= Op::Ne);
  if (decision && n.has_x && !n.has_y && !n.has_is_rat) out.push_back({&n});
  for (const auto& k : n.kids) collect_x_probes(*k, out);
}

inline void collect_x_probes(const SetNode& n, std::vector<XProbe>& out) {
  if (n.lo) collect_x_probes(*n.lo, out);
  if (n.hi) collect_x_probes(*n.hi, out);
  if (n.pred) collect_x_probes(*n.pred, out);
  for (const auto& e : n.elems) collect_x_probes(*e, out);
  for (const auto& k : n.kids) collect_x_probes(*k, out);
}

inline ExtendedReal probe_discriminant(const Node& n, const TaggedPoint& x, const EvalOptions& opt) {
  switch (n.op) {
    case Op::Abs: return eval_expr(*n.kids[0], x, nullptr, opt);
    case Op::Div: return eval_expr(*n.kids[1], x, nullptr, opt);
    default: {
      ExtendedReal a = eval_expr(*n.kids[0], x, nullptr, opt);
      ExtendedReal b = eval_expr(*n.kids[1], x, nullptr, opt);
      if (!a.is_finite() || !b.is_finite()) return ExtendedReal(compare(a, b));
      return a - b;
    }
  }
}

inline std::vector<std::int8_t> x_signature(const std::vector<XProbe>& probes, const TaggedPoint& x,
                                            const EvalOptions& opt) {
  std::vector<std::int8_t> sig;
  sig.reserve(probes.size());
  for (const auto& p : probes) {
    try {
      sig.push_back(static_cast<std::int8_t>(probe_discriminant(*p.node, x, opt).sign()));
    } catch (const Error&) {
      sig.push_back(kErrorState);
    }
  }
  return sig;
}

}  // namespace detail

/// Points of [lo, hi] where some x-only decision of u or Phi changes, located
/// by bisection on a grid and snapped to the exact root of the responsible
/// discriminant when a secant step finds it.
inline std::vector<TaggedPoint> x_breakpoints(const Problem& p, const Rational& lo, const Rational& hi, int grid = 64) {
  std::vector<detail::XProbe> probes;
  detail::collect_x_probes(*p.u, probes);
  detail::collect_x_probes(*p.phi, probes);
  std::vector<TaggedPoint> out;
  if (probes.empty() || !(lo < hi)) return out;

  auto sig = [&](const Rational& x) { return detail::x_signature(probes, TaggedPoint(x), p.eval); };
  const Rational tiny = rational_from_double(1e-13) * (1 + abs(lo) + abs(hi));

  std::function<void(Rational, const std::vector<std::int8_t>&, Rational, const std::vector<std::int8_t>&, int)> locate =
      [&](Rational a, const std::vector<std::int8_t>& sa, Rational b, const std::vector<std::int8_t>& sb, int depth) {
        if (sa == sb) return;
        if (b - a <= tiny || depth > 60) {
          std::size_t k = 0;
          while (k < sa.size() && sa[k] == sb[k]) ++k;
          // secant on the responsible discriminant
          TaggedPoint best(a);
          bool exact = false;
          try {
            ExtendedReal ga = detail::probe_discriminant(*probes[k].node, TaggedPoint(a), p.eval);
            ExtendedReal gb = detail::probe_discriminant(*probes[k].node, TaggedPoint(b), p.eval);
            if (ga.sign() == 0) {
              best = TaggedPoint(a);
              exact = true;
            } else if (gb.sign() == 0) {
              best = TaggedPoint(b);
              exact = true;
            } else if (ga.is_finite() && gb.is_finite() && compare(ga, gb) != 0) {
              ExtendedReal t = ExtendedReal(a) - ga * (ExtendedReal(b) - ExtendedReal(a)) / (gb - ga);
              TaggedPoint tt = t.to_tagged();
              if (detail::probe_discriminant(*probes[k].node, tt, p.eval).sign() == 0) {
                best = tt;
                exact = true;
              }
            }
          } catch (const Error&) {
          }
          if (!exact) best = TaggedPoint(Rational((a + b) / 2));
          for (const auto& q : out)
            if (q == best) return;
          out.push_back(best);
          return;
        }
        Rational m = (a + b) / 2;
        auto sm = sig(m);
        locate(a, sa, m, sm, depth + 1);
        locate(m, sm, b, sb, depth + 1);
      };

  Rational step = (hi - lo) / grid;
  Rational prev = lo;
  auto sprev = sig(prev);
  for (int i = 1; i <= grid; ++i) {
    Rational cur = i == grid ? hi : Rational(lo + step * i);
    auto scur = sig(cur);
    locate(prev, sprev, cur, scur, 0);
    prev = cur;
    sprev = std::move(scur);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- loading

namespace detail {

inline std::string yaml_scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw SchemaError("field '" + key + "' must be a scalar");
  return n.as<std::string>();
}

/// A constant set such as "[0,1]" or "reals"; sequences [a, b] mean a closed interval.
inline IntervalSet yaml_const_set(const YAML::Node& n, const std::string& key) {
  if (n.IsSequence()) {
    if (n.size() != 2) throw SchemaError("field '" + key + "' must be a set expression or [lo, hi]");
    ExtendedReal lo = parse_extended(n[0].as<std::string>());
    ExtendedReal hi = parse_extended(n[1].as<std::string>());
    if (lo > hi) throw SchemaError("field '" + key + "': malformed interval, lo > hi");
    auto iv = Interval::make(lo, hi, true, true);
    return iv ? IntervalSet(*iv) : IntervalSet();
  }
  SetNodePtr s = parse_set(yaml_scalar(n, key));
  if (set_mentions_x(*s)) throw SchemaError("field '" + key + "' must not depend on x");
  try {
    return eval_set(*s, TaggedPoint(0));
  } catch (const EvalError& e) {
    throw SchemaError("field '" + key + "': " + e.what());
  }
}

}  // namespace detail

struct LoadOptions {
  int validation_grid = 33;
};

/// Checks Phi(x) is inside y_domain (and nonempty when required) on a grid of
/// the window plus every x breakpoint.
inline void validate_problem(const Problem& p, const LoadOptions& opt = {}) {
  std::vector<TaggedPoint> xs;
  for (int i = 0; i <= opt.validation_grid; ++i)
    xs.emplace_back(p.window_lo + (p.window_hi - p.window_lo) * make_rational(i, opt.validation_grid));
  for (auto& b : x_breakpoints(p, p.window_lo, p.window_hi)) xs.push_back(b);
  for (const auto& x : xs) {
    if (!p.in_x_domain(x)) continue;
    IntervalSet s;
    try {
      s = p.feasible(x);
    } catch (const EvalError& e) {
      throw SchemaError("phi cannot be evaluated: " + std::string(e.what()));
    }
    if (p.nonempty_required && s.empty())
      throw SchemaError("phi(x) is empty at x=" + x.str() + " but nonempty_required is true");
    if (!s.subset_of(p.y_domain))
      throw SchemaError("phi(x) = " + s.str() + " is not contained in y_domain at x=" + x.str());
  }
}

inline Problem problem_from_yaml(const YAML::Node& doc, const LoadOptions& opt = {}) {
  if (!doc.IsMap()) throw SchemaError("problem document must be a mapping");
  static const char* known[] = {"name", "x_domain", "y_domain", "u", "phi", "window", "nonempty_required",
                                "float_is_irrational", "notes", "expected", "focus", "lambda", "k_set",
                                "anchor", "skip", "variants", "derived", "oracle_points"};
  for (const auto& kv : doc) {
    std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    if (!ok) throw SchemaError("unknown field '" + key + "'");
  }
  for (const char* req : {"name", "x_domain", "y_domain", "u", "phi"})
    if (!doc[req]) throw SchemaError(std::string("missing required field '") + req + "'");

  Problem p;
  p.name = detail::yaml_scalar(doc["name"], "name");
  try {
    p.x_domain = detail::yaml_const_set(doc["x_domain"], "x_domain");
    p.y_domain = detail::yaml_const_set(doc["y_domain"], "y_domain");
    p.u = parse_expr(detail::yaml_scalar(doc["u"], "u"));
    p.phi = parse_set(detail::yaml_scalar(doc["phi"], "phi"));
  } catch (const ParseError& e) {
    throw SchemaError(e.what());
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }
  if (p.x_domain.empty()) throw SchemaError("x_domain is empty");
  if (doc["nonempty_required"]) p.nonempty_required = doc["nonempty_required"].as<bool>();
  if (doc["float_is_irrational"]) p.eval.float_is_irrational = doc["float_is_irrational"].as<bool>();
  if (doc["notes"]) p.notes = doc["notes"].as<std::string>();

  if (doc["window"]) {
    IntervalSet w = detail::yaml_const_set(doc["window"], "window");
    if (w.empty() || !w.is_bounded() || w.pieces().size() != 1) throw SchemaError("window must be a bounded interval");
    TaggedPoint lo = w.inf().to_tagged(), hi = w.sup().to_tagged();
    if (!lo.is_rational() || !hi.is_rational()) throw SchemaError("window endpoints must be rational");
    p.window_lo = lo.value();
    p.window_hi = hi.value();
  } else {
    if (!p.x_domain.is_bounded()) throw SchemaError("x_domain is unbounded; a bounded 'window' is required");
    TaggedPoint lo = p.x_domain.inf().to_tagged(), hi = p.x_domain.sup().to_tagged();
    if (!lo.is_rational() || !hi.is_rational()) throw SchemaError("x_domain endpoints must be rational");
    p.window_lo = lo.value();
    p.window_hi = hi.value();
  }
  if (!(p.window_lo < p.window_hi)) throw SchemaError("analysis window must have positive width");
  validate_problem(p, opt);
  return p;
}

inline Problem load_problem_text(const std::string& text, const LoadOptions& opt = {}) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("malformed YAML: ") + e.what());
  }
  return problem_from_yaml(doc, opt);
}

inline Problem load_problem_file(const std::string& path, const LoadOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_problem_text(ss.str(), opt);
}

}  // namespace paramin

// Sequential semicontinuity and compactness checks with replayable witnesses.
//
// Every check is a measurement family (a name plus string arguments) applied to
// the tail of a sequence prefix.  The search and the replay build the same
// measurement from the same strings, which is what makes witnesses replayable.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "paramin/minimizer.hpp"
#include "paramin/verdict.hpp"

namespace paramin {

struct CheckConfig {
  Tolerances tol;
  SequencePlan plan;
  int y_grid = 33;         // grid points per piece when sampling y
  std::size_t y_cap = 48;  // at most this many y samples per set
  int global_grid = 6;     // window grid for "on the whole domain" forms
  bool tagged = false;     // add rational/irrational schemes even if the problem has no is_rat
};

namespace detail {

/// a - b as a double, with inf - inf of equal sign read as 0.
inline double diff(const ExtendedReal& a, const ExtendedReal& b) {
  if (!a.is_finite() && !b.is_finite() && a.kind() == b.kind()) return 0.0;
  return (a - b).numeric();
}

/// inf{|a - b| : a in A, b in B}; +inf if either is empty.
inline ExtendedReal set_gap(const IntervalSet& a, const IntervalSet& b) {
  ExtendedReal best = ExtendedReal::pos_inf();
  for (const auto& p : a.pieces()) {
    for (const auto& q : b.pieces()) {
      ExtendedReal g(0);
      if (p.hi() < q.lo()) {
        g = q.lo() - p.hi();
      } else if (q.hi() < p.lo()) {
        g = p.lo() - q.hi();
      }
      if (g < best) best = g;
    }
  }
  return best;
}

inline ExtendedReal parse_er(const std::string& s) {
  if (s == "inf" || s == "+inf") return ExtendedReal::pos_inf();
  if (s == "-inf") return ExtendedReal::neg_inf();
  return parse_extended(s);
}

inline const std::string& arg(const Args& a, const std::string& key) {
  auto it = a.find(key);
  if (it == a.end()) throw DomainError("witness argument '" + key + "' missing");
  return it->second;
}

/// The radius is rounded up to an 8-bit dyadic so sums with c stay cheap.
inline IntervalSet closed_ball(const ExtendedReal& c, double r) {
  Rational q(0);
  if (r > 0) {
    int e = 0;
    double f = std::frexp(r, &e);
    q = Rational(static_cast<long>(std::ceil(f * 256)));
    if (e - 8 >= 0) q *= Rational(mpz_class(1) << (e - 8));
    else q /= Rational(mpz_class(1) << (8 - e));
  }
  ExtendedReal rr(q);
  return IntervalSet(Interval::closed(c - rr, c + rr));
}

/// Finite endpoints of a set, used to anchor accumulation extrapolation.
inline std::vector<ExtendedReal> endpoints(const IntervalSet& s) {
  std::vector<ExtendedReal> out;
  for (const auto& iv : s.pieces()) {
    if (iv.lo().is_finite()) out.push_back(iv.lo());
    if (iv.hi().is_finite()) out.push_back(iv.hi());
  }
  return out;
}

/// An endpoint of `ref` that is excluded from ref but lies in `acc`.
inline std::optional<ExtendedReal> open_end_hit(const IntervalSet& ref, const IntervalSet& acc) {
  for (const auto& iv : ref.pieces()) {
    if (iv.lo().is_finite() && !iv.lo_closed() && !ref.member(iv.lo()) && acc.member(iv.lo())) return iv.lo();
    if (iv.hi().is_finite() && !iv.hi_closed() && !ref.member(iv.hi()) && acc.member(iv.hi())) return iv.hi();
  }
  return std::nullopt;
}

/// The point of `a` farthest from `b` among endpoints (a bounded, nonempty).
inline ExtendedReal farthest_point(const IntervalSet& a, const IntervalSet& b) {
  ExtendedReal best_p = a.inf(), best_d = ExtendedReal::neg_inf();
  for (const auto& e : endpoints(a)) {
    ExtendedReal d = dist(e, b);
    if (d > best_d) {
      best_d = d;
      best_p = e;
    }
  }
  return best_p;
}

}  // namespace detail

// ---------------------------------------------------------------- sampling

/// Closed endpoints, the given extra points (when members), then a grid over
/// every piece (unbounded pieces use a 16-wide stretch next to their finite end).
inline std::vector<ExtendedReal> y_samples(const IntervalSet& s, const std::vector<ExtendedReal>& extra, int grid,
                                           std::size_t cap) {
  std::vector<ExtendedReal> pri, fill;
  for (const auto& iv : s.pieces()) {
    if (iv.lo().is_finite() && iv.lo_closed()) pri.push_back(iv.lo());
    if (iv.hi().is_finite() && iv.hi_closed()) pri.push_back(iv.hi());
  }
  for (const auto& e : extra)
    if (e.is_finite() && s.member(e)) pri.push_back(e);
  for (const auto& iv : s.pieces()) {
    ExtendedReal a, b;
    if (iv.lo().is_finite() && iv.hi().is_finite()) {
      a = iv.lo();
      b = iv.hi();
    } else if (iv.lo().is_finite()) {
      a = iv.lo();
      b = iv.lo() + ExtendedReal(16);
    } else if (iv.hi().is_finite()) {
      a = iv.hi() - ExtendedReal(16);
      b = iv.hi();
    } else {
      a = ExtendedReal(-16);
      b = ExtendedReal(16);
    }
    if (!(a < b)) continue;
    for (int k = 1; k < grid; ++k) fill.push_back(a + (b - a) * ExtendedReal(make_rational(k, grid)));
  }
  auto dedupe = [](std::vector<ExtendedReal>& v) {
    std::sort(v.begin(), v.end(), [](const ExtendedReal& p, const ExtendedReal& q) { return p < q; });
    v.erase(std::unique(v.begin(), v.end(), [](const ExtendedReal& p, const ExtendedReal& q) { return p == q; }),
            v.end());
  };
  dedupe(pri);
  if (pri.size() > cap) {
    std::vector<ExtendedReal> thin;
    for (std::size_t i = 0; i < cap; ++i) thin.push_back(pri[i * pri.size() / cap]);
    pri = thin;
  }
  std::size_t room = cap - pri.size();
  if (room > 0 && !fill.empty()) {
    std::size_t step = std::max<std::size_t>(1, (fill.size() + room - 1) / room);
    for (std::size_t i = 0; i < fill.size() && room > 0; i += step, --room) pri.push_back(fill[i]);
  }
  dedupe(pri);
  return pri;
}

/// Parameter points standing in for "the whole domain": x, a window grid and
/// the x-breakpoints closest to x.
inline std::vector<TaggedPoint> global_points(const Problem& p, const TaggedPoint& x, int grid) {
  std::vector<TaggedPoint> out{x};
  for (int k = 0; k <= grid; ++k) {
    TaggedPoint g(p.window_lo + p.window_width() * make_rational(k, grid));
    if (p.in_x_domain(g)) out.push_back(g);
  }
  auto bps = x_breakpoints(p, p.window_lo, p.window_hi);
  std::sort(bps.begin(), bps.end(), [&](const TaggedPoint& a, const TaggedPoint& b) {
    return std::fabs(a.numeric() - x.numeric()) < std::fabs(b.numeric() - x.numeric());
  });
  for (std::size_t i = 0; i < bps.size() && i < 6; ++i)
    if (p.in_x_domain(bps[i])) out.push_back(bps[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- measurements

struct Measure {
  bool usable = false;
  bool violated = false;
  bool oscillating = false;  // violations that do not settle: no decision
  double margin = 0.0;
  std::string kind = "violating-sequence";
  std::string claim;
  std::vector<ExtendedReal> ys;
};

using Measurer = std::function<Measure(const std::vector<Term>& tail)>;

struct MeasurerSpec {
  Measurer fn;
  std::optional<Status> pre;  // decided without sequences (e.g. undefined reference set)
  std::string note;
};

struct TermValue {
  bool usable = false;
  bool violated = false;
  double viol = 0.0;
  std::optional<ExtendedReal> y;
};

namespace detail {

inline TermValue tv(double viol, double tol, std::optional<ExtendedReal> y = std::nullopt) {
  return TermValue{true, viol >= tol, viol, std::move(y)};
}

/// Tail decision: violated when every usable term violates (the margin is the
/// smallest of them); a tail whose last usable term violates but not all do is
/// oscillating.
inline Measure aggregate(const std::vector<TermValue>& vals, int min_usable, const std::string& claim) {
  Measure m;
  m.claim = claim;
  int usable = 0;
  bool all = true, last = false;
  double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : vals) {
    if (!v.usable) continue;
    ++usable;
    all = all && v.violated;
    last = v.violated;
    lo = std::min(lo, v.viol);
    hi = std::max(hi, v.viol);
    if (v.y) m.ys.push_back(*v.y);
  }
  if (usable < min_usable) {
    m.oscillating = usable > 0 && last;
    return m;
  }
  m.usable = true;
  m.violated = all;
  m.margin = all ? lo : hi;
  m.oscillating = !all && last;
  return m;
}

using TermFn = std::function<TermValue(const Term&)>;

inline Measurer per_term(TermFn f, int min_usable, std::string claim) {
  return [f = std::move(f), min_usable, claim = std::move(claim)](const std::vector<Term>& tail) {
    std::vector<TermValue> vals;
    for (const auto& t : tail) {
      try {
        vals.push_back(f(t));
      } catch (const Error&) {
        vals.push_back(TermValue{});
      }
    }
    return aggregate(vals, min_usable, claim);
  };
}

/// Accumulation-based measurement shared by closed-graph and KN checks:
/// members F_n (nonempty ones) must not escape and must accumulate inside ref.
inline Measure accumulation_measure(const std::vector<Term>& tail, const std::function<IntervalSet(const Term&)>& member,
                                    const IntervalSet& ref, bool escape_violates, double tol, int min_usable,
                                    const std::string& what) {
  Measure m;
  std::vector<std::pair<ExtendedReal, IntervalSet>> fam;
  int nonempty = 0, unbounded = 0;
  bool last_nonempty = false;
  for (const auto& t : tail) {
    IntervalSet s;
    try {
      s = member(t);
    } catch (const Error&) {
      last_nonempty = false;
      continue;
    }
    last_nonempty = !s.empty();
    if (s.empty()) continue;
    ++nonempty;
    if (!s.is_bounded()) ++unbounded;
    fam.emplace_back(ExtendedReal(t.delta), std::move(s));
  }
  if (nonempty < min_usable) {
    m.oscillating = nonempty > 0 && last_nonempty;
    return m;
  }
  m.usable = true;
  auto acc = accumulation_set(fam, detail::endpoints(ref));
  if (escape_violates && (unbounded == nonempty || acc.escaped)) {
    m.violated = true;
    m.kind = "escaping-sequence";
    m.margin = fam.back().second.sup_abs().numeric();
    for (const auto& [d, s] : fam) {
      const auto& iv = s.sup_abs() == abs(s.sup()) ? s.pieces().back() : s.pieces().front();
      bool up = s.sup_abs() == abs(s.sup());
      ExtendedReal e = up ? iv.hi() : iv.lo();
      if (e.is_finite()) {
        m.ys.push_back(e);
      } else {
        // a point of the ray beyond the previous one
        ExtendedReal base = up ? (iv.lo().is_finite() ? iv.lo() : ExtendedReal(0))
                               : (iv.hi().is_finite() ? iv.hi() : ExtendedReal(0));
        ExtendedReal far = ExtendedReal(1) / d;
        m.ys.push_back(up ? max(base, ExtendedReal(0)) + far : min(base, ExtendedReal(0)) - far);
      }
    }
    m.claim = what + " leave every bounded set";
    return m;
  }
  if (acc.set.empty()) return m;
  std::optional<ExtendedReal> stray;
  double margin = 0.0;
  ExtendedReal e = ref.empty() ? ExtendedReal::pos_inf() : excess(acc.set, ref);
  if (e.numeric() > tol) {
    stray = ref.empty() ? acc.set.inf() : detail::farthest_point(acc.set, ref);
    margin = e.numeric();
  } else if (auto hit = detail::open_end_hit(ref, acc.set)) {
    stray = *hit;
  }
  if (!stray) {
    m.margin = e.numeric();
    return m;
  }
  m.violated = true;
  m.kind = "stray-accumulation-point";
  m.margin = margin;
  for (const auto& [d, s] : fam) {
    auto near = nearest_member(*stray, s, d);
    if (near) m.ys.push_back(*near);
  }
  m.claim = what + " accumulate at y=" + stray->str() + " outside " + ref.str();
  return m;
}

inline std::vector<ExtendedReal> lambda_grid(const ExtendedReal& v) {
  ExtendedReal base = v.is_finite() ? v : ExtendedReal(0);
  std::vector<ExtendedReal> out;
  for (int j : {0, 2, 4}) out.push_back(base - ExtendedReal(make_rational(1, 1L << j)));
  out.push_back(base);
  for (int j = -4; j <= 4; ++j)
    out.push_back(base + (j < 0 ? ExtendedReal(make_rational(1, 1L << -j)) : ExtendedReal(1L << j)));
  return out;
}

}  // namespace detail

/// Records which model a witness was measured on.
inline void add_model_args(Model& m, Args& a) {
  if (auto* t = dynamic_cast<TruncatedModel*>(&m)) {
    a["model"] = "truncated";
    a["model_lambda"] = t->truncation().lambda.exact_str();
    a["model_anchor"] = t->truncation().x_anchor.str();
  } else {
    a["model"] = "base";
  }
}

/// The measurement registry.  Families:
///   v_lsc, v_usc                    x
///   fn_lsc, fn_usc                  x, f (an expression in x)
///   u_graph_lsc, u_graph_usc        x, y        along Gr(Phi) of the model
///   u_product_lsc, u_product_usc    x, y        on X x Y of the base problem
///   map_lsc                         x, y
///   map_usc, argmin_usc             x
///   condition_iv                    x
///   closed_graph                    x
///   kn_level                        x, lambda, ref (phi | level)
///   level_iii, level_compact        x, lambda
///   argmin_compact, phi_nonempty    x
///   value_bound                     x, lambda, rel (lt | le | finite)
inline MeasurerSpec make_measurer(const std::string& check, const Args& args, Model& m, const CheckConfig& cfg) {
  using detail::arg;
  const double tol = cfg.tol.check;
  const int mu = cfg.plan.min_usable;
  const Problem& p = m.problem();
  MeasurerSpec out;
  TaggedPoint x = parse_point(arg(args, "x"));

  if (check == "v_lsc" || check == "v_usc") {
    bool lsc = check == "v_lsc";
    ExtendedReal ref = m.slice(x).value();
    out.fn = detail::per_term(
        [&m, ref, lsc, tol](const Term& t) {
          ExtendedReal vz = m.slice(t.z).value();
          return detail::tv(lsc ? detail::diff(ref, vz) : detail::diff(vz, ref), tol, vz);
        },
        mu, std::string("v(x_n) ") + (lsc ? "stays below" : "stays above") + " v(x)=" + ref.str());
    return out;
  }
  if (check == "fn_lsc" || check == "fn_usc") {
    bool lsc = check == "fn_lsc";
    NodePtr f = parse_expr(arg(args, "f"));
    if (f->has_y) throw DomainError("f must be a function of x only");
    EvalOptions eo = p.eval;
    ExtendedReal ref = eval_expr(*f, x, nullptr, eo);
    out.fn = detail::per_term(
        [f, eo, ref, lsc, tol](const Term& t) {
          ExtendedReal fz = eval_expr(*f, t.z, nullptr, eo);
          return detail::tv(lsc ? detail::diff(ref, fz) : detail::diff(fz, ref), tol, fz);
        },
        mu, std::string("f(x_n) ") + (lsc ? "stays below" : "stays above") + " f(x)=" + ref.str());
    return out;
  }
  if (check == "u_graph_lsc" || check == "u_graph_usc") {
    bool lsc = check == "u_graph_lsc";
    ExtendedReal y = detail::parse_er(arg(args, "y"));
    ExtendedReal ref = m.slice(x).eval(y);
    out.fn = detail::per_term(
        [&m, y, ref, lsc, tol](const Term& t) {
          const IntervalSet& s = m.feasible(t.z);
          if (s.empty()) return TermValue{};
          ExtendedReal d = dist(y, s);
          double delta = to_double(t.delta);
          double rho = std::max(16 * delta, std::min(2 * d.numeric(), std::sqrt(delta)));
          if (d.numeric() > rho) return TermValue{};  // no graph point near (x, y) yet
          IntervalSet ball = detail::closed_ball(y, rho);
          if (intersect(s, ball).empty()) return TermValue{};
          const Slice& sl = m.slice(t.z);
          ExtendedReal val = lsc ? sl.inf_over(ball) : sl.sup_over(ball);
          return detail::tv(lsc ? detail::diff(ref, val) : detail::diff(val, ref), tol, val);
        },
        mu, std::string("u along graph points near (x,y) ") + (lsc ? "stays below" : "stays above") + " u(x,y)=" +
                ref.str());
    return out;
  }
  if (check == "u_product_lsc" || check == "u_product_usc") {
    bool lsc = check == "u_product_lsc";
    ExtendedReal y = detail::parse_er(arg(args, "y"));
    IntervalSet yd = p.y_domain;
    ExtendedReal ref = m.slice_on(x, yd).eval(y);
    out.fn = detail::per_term(
        [&m, y, yd, ref, lsc, tol](const Term& t) {
          IntervalSet ball = intersect(yd, detail::closed_ball(y, 16 * to_double(t.delta)));
          if (ball.empty()) return TermValue{};
          const Slice& sl = m.slice_on(t.z, yd);
          ExtendedReal val = lsc ? sl.inf_over(ball) : sl.sup_over(ball);
          return detail::tv(lsc ? detail::diff(ref, val) : detail::diff(val, ref), tol, val);
        },
        mu, std::string("u near (x,y) in X x Y ") + (lsc ? "stays below" : "stays above") + " u(x,y)=" + ref.str());
    return out;
  }
  if (check == "map_lsc") {
    ExtendedReal y = detail::parse_er(arg(args, "y"));
    out.fn = detail::per_term(
        [&m, y, tol](const Term& t) {
          const IntervalSet& s = m.feasible(t.z);
          if (s.empty()) return TermValue{};  // lsc is relative to Dom Phi
          return detail::tv(dist(y, s).numeric(), tol, nearest_member(y, s, ExtendedReal(t.delta)));
        },
        mu, "Phi(x_n) stays away from y=" + y.str());
    return out;
  }
  if (check == "map_usc" || check == "argmin_usc") {
    bool star = check == "argmin_usc";
    IntervalSet ref = star ? m.slice(x).argmin() : m.feasible(x);
    if (ref.empty()) {
      out.pre = Status::Unknown;
      out.note = star ? "solution set at x is empty; usc is undefined" : "Phi(x) is empty; usc is undefined";
      return out;
    }
    out.fn = detail::per_term(
        [&m, ref, star, tol](const Term& t) {
          IntervalSet s = star ? m.slice(t.z).argmin() : m.feasible(t.z);
          if (s.empty()) return detail::tv(0.0, tol);
          ExtendedReal e = excess(s, ref);
          return detail::tv(e.numeric(), tol, s.sup_abs() == abs(s.sup()) ? s.sup() : s.inf());
        },
        mu, std::string(star ? "solution sets" : "Phi(x_n)") + " keep excess over " + ref.str());
    return out;
  }
  if (check == "condition_iv") {
    IntervalSet ref = m.slice(x).argmin();
    if (ref.empty()) {
      out.pre = Status::Unknown;
      out.note = "solution set at x is empty; condition (iv) is undefined";
      return out;
    }
    out.fn = detail::per_term(
        [&m, ref, tol](const Term& t) {
          const IntervalSet& s = m.feasible(t.z);
          if (s.empty()) return TermValue{};
          return detail::tv(detail::set_gap(s, ref).numeric(), tol);
        },
        mu, "Phi(x_n) misses a neighborhood of the solution set " + ref.str());
    out.fn = [inner = out.fn](const std::vector<Term>& tail) {
      Measure r = inner(tail);
      if (r.violated) r.kind = "neighborhood-gap";
      return r;
    };
    return out;
  }
  if (check == "closed_graph") {
    IntervalSet ref = m.feasible(x);
    out.fn = [&m, ref, tol, mu](const std::vector<Term>& tail) {
      return detail::accumulation_measure(
          tail, [&m](const Term& t) { return m.feasible(t.z); }, ref, false, tol, mu, "graph points (x_n, y_n)");
    };
    return out;
  }
  if (check == "kn_level") {
    ExtendedReal lambda = detail::parse_er(arg(args, "lambda"));
    bool level_ref = arg(args, "ref") == "level";
    IntervalSet ref = level_ref ? m.slice(x).level_set(lambda) : m.feasible(x);
    out.fn = [&m, ref, lambda, tol, mu](const std::vector<Term>& tail) {
      return detail::accumulation_measure(
          tail, [&m, lambda](const Term& t) { return m.slice(t.z).level_set(lambda); }, ref, true, tol, mu,
          "points with u(x_n, y_n) <= " + lambda.str());
    };
    return out;
  }
  if (check == "level_iii") {
    ExtendedReal lambda = detail::parse_er(arg(args, "lambda"));
    auto each = detail::per_term(
        [&m, lambda, tol](const Term& t) {
          const Slice& sl = m.slice(t.z);
          IntervalSet s = sl.level_set(lambda);
          if (s.empty()) return TermValue{true, true, std::max(detail::diff(sl.value(), lambda), 0.0), sl.value()};
          if (!s.is_bounded()) return TermValue{true, true, std::numeric_limits<double>::infinity(), s.sup_abs()};
          return detail::tv(0.0, tol);
        },
        mu, "level sets at lambda=" + lambda.str() + " are empty or unbounded near x");
    // bounded one by one is not enough: a single compact C must hold them all
    std::vector<ExtendedReal> anchors = detail::endpoints(m.slice(x).level_set(lambda));
    out.fn = [&m, each, lambda, anchors](const std::vector<Term>& tail) {
      Measure r = each(tail);
      if (!r.usable || r.violated) return r;
      std::vector<std::pair<ExtendedReal, IntervalSet>> fam;
      for (const auto& t : tail) fam.emplace_back(ExtendedReal(t.delta), m.slice(t.z).level_set(lambda));
      if (!accumulation_set(fam, anchors).escaped) return r;
      r.violated = true;
      r.kind = "escaping-sequence";
      r.margin = fam.back().second.sup_abs().numeric();
      r.ys.clear();
      for (const auto& [d, s] : fam) r.ys.push_back(s.sup_abs() == abs(s.sup()) ? s.sup() : s.inf());
      r.claim = "level sets at lambda=" + lambda.str() + " leave every bounded set";
      return r;
    };
    return out;
  }
  // the remaining families read x only; the sequence is carried for the record
  if (check == "level_compact") {
    ExtendedReal lambda = detail::parse_er(arg(args, "lambda"));
    out.fn = [&m, x, lambda](const std::vector<Term>& tail) {
      Measure r;
      r.usable = true;
      IntervalSet s = m.slice(x).level_set(lambda);
      if (s.empty() || s.is_compact()) return r;
      r.violated = true;
      if (!s.is_bounded()) {
        r.kind = "escaping-sequence";
        r.margin = std::numeric_limits<double>::infinity();
        bool up = !s.sup().is_finite();
        const auto& iv = up ? s.pieces().back() : s.pieces().front();
        ExtendedReal base = up ? (iv.lo().is_finite() ? iv.lo() : ExtendedReal(0))
                               : (iv.hi().is_finite() ? iv.hi() : ExtendedReal(0));
        for (const auto& t : tail) r.ys.push_back(up ? base + ExtendedReal(1) / ExtendedReal(t.delta)
                                                     : base - ExtendedReal(1) / ExtendedReal(t.delta));
        r.claim = "level set " + s.str() + " is unbounded";
      } else {
        r.kind = "stray-accumulation-point";
        auto hit = detail::open_end_hit(s, s.closure());
        for (const auto& t : tail) {
          auto near = nearest_member(*hit, s, ExtendedReal(t.delta));
          if (near) r.ys.push_back(*near);
        }
        r.claim = "level set " + s.str() + " is not closed at y=" + hit->str();
      }
      return r;
    };
    return out;
  }
  if (check == "argmin_compact") {
    out.fn = [&m, x](const std::vector<Term>& tail) {
      Measure r;
      r.usable = true;
      const Slice& sl = m.slice(x);
      const IntervalSet& a = sl.argmin();
      if (!a.empty() && a.is_compact()) return r;
      r.violated = true;
      if (a.empty()) {
        r.claim = "the infimum v(x)=" + sl.value().str() + " is not attained";
        if (sl.value().is_finite())
          for (const auto& t : tail) {
            IntervalSet lv = sl.level_set(sl.value() + ExtendedReal(t.delta));
            if (!lv.empty()) r.ys.push_back(lv.inf());
          }
      } else if (!a.is_bounded()) {
        r.kind = "escaping-sequence";
        r.margin = std::numeric_limits<double>::infinity();
        r.claim = "solution set " + a.str() + " is unbounded";
      } else {
        r.kind = "stray-accumulation-point";
        r.claim = "solution set " + a.str() + " is not closed";
      }
      return r;
    };
    return out;
  }
  if (check == "phi_nonempty") {
    out.fn = [&m, x](const std::vector<Term>&) {
      Measure r;
      r.usable = true;
      r.violated = m.feasible(x).empty();
      r.claim = "Phi(x) is empty";
      return r;
    };
    return out;
  }
  if (check == "phi_compact") {
    out.fn = [&m, x](const std::vector<Term>&) {
      Measure r;
      r.usable = true;
      const IntervalSet& s = m.feasible(x);
      r.violated = s.empty() || !s.is_compact();
      if (r.violated && !s.is_bounded()) {
        r.kind = "escaping-sequence";
        r.margin = std::numeric_limits<double>::infinity();
      }
      r.claim = "Phi(x)=" + s.str() + " is not a nonempty compact set";
      return r;
    };
    return out;
  }
  if (check == "argmin_is_phi") {
    out.fn = [&m, x](const std::vector<Term>&) {
      Measure r;
      r.usable = true;
      const Slice& sl = m.slice(x);
      r.violated = sl.value().is_pos_inf() && !(sl.argmin() == m.feasible(x));
      r.claim = "v(x)=+inf but the solution set differs from Phi(x)";
      return r;
    };
    return out;
  }
  if (check == "value_bound") {
    ExtendedReal lambda = detail::parse_er(arg(args, "lambda"));
    std::string rel = arg(args, "rel");
    out.fn = [&m, x, lambda, rel](const std::vector<Term>&) {
      Measure r;
      r.usable = true;
      const Slice& sl = m.slice(x);
      if (rel == "finite") {
        r.violated = !(sl.value() < ExtendedReal::pos_inf());
        r.claim = "u(x, .) is +inf on Phi(x)";
      } else if (rel == "lt") {
        r.violated = !(sl.value() < lambda);
        r.claim = "no y in Phi(x) has u(x,y) < " + lambda.str();
      } else {
        r.violated = sl.level_set(lambda).empty();
        r.claim = "no y in Phi(x) has u(x,y) <= " + lambda.str();
      }
      if (r.violated && rel != "finite") r.margin = detail::diff(sl.value(), lambda);
      return r;
    };
    return out;
  }
  throw DomainError("unknown check family '" + check + "'");
}

// ---------------------------------------------------------------- driver

using SchemeFilter = std::function<bool(const Scheme&)>;

/// Runs a measurement family over the plan's schemes at x.  The first violated
/// scheme yields FAILS with its witness; oscillation or an exhausted budget
/// yields UNKNOWN; otherwise HOLDS.
inline Verdict run_family(Model& m, const CheckConfig& cfg, const std::string& id, const TaggedPoint& x,
                          const std::string& check, Args args, bool stationary, const SchemeFilter& keep = {},
                          bool stationary_only = false) {
  args["x"] = x.str();
  add_model_args(m, args);
  long q0 = m.queries();
  Verdict v;
  v.id = id;
  MeasurerSpec spec;
  try {
    spec = make_measurer(check, args, m, cfg);
  } catch (const Error& e) {
    v.status = Status::Unknown;
    v.note = e.what();
    v.budget_used = m.queries() - q0;
    return v;
  }
  if (spec.pre) {
    v.status = *spec.pre;
    v.note = spec.note;
    v.budget_used = m.queries() - q0;
    return v;
  }
  std::shared_ptr<const std::vector<Scheme>> schemes;
  if (stationary_only) {
    auto only = std::make_shared<std::vector<Scheme>>();
    if (auto s = build_scheme(m.problem(), x, Direction::Stationary, cfg.plan)) only->push_back(std::move(*s));
    schemes = std::move(only);
  } else {
    schemes = plan_schemes_shared(m.problem(), x, cfg.plan, stationary, cfg.tagged);
  }
  bool unknown = false;
  v.margin = -std::numeric_limits<double>::infinity();
  for (const auto& s : *schemes) {
    if (keep && !keep(s)) continue;
    if (m.queries() - q0 > cfg.plan.budget) {
      unknown = true;
      v.note = "budget of " + std::to_string(cfg.plan.budget) + " queries exhausted";
      break;
    }
    int ts = std::min<int>(cfg.plan.tail_start(), static_cast<int>(s.terms.size()));
    std::vector<Term> tail(s.terms.begin() + ts, s.terms.end());
    Measure r;
    try {
      r = spec.fn(tail);
    } catch (const Error& e) {
      unknown = true;
      v.note = e.what();
      continue;
    }
    if (r.oscillating) {
      unknown = true;
      if (v.note.empty()) v.note = "violations along scheme " + s.id + " do not settle";
    }
    if (!r.usable) continue;
    if (r.violated) {
      Witness w;
      w.kind = r.kind;
      w.check = check;
      w.args = args;
      w.scheme = s.id;
      w.terms = s.terms;
      w.tail_start = ts;
      w.y_seq = r.ys;
      w.limit_claim = r.claim;
      w.margin = r.margin;
      v.status = Status::Fails;
      v.margin = r.margin;
      v.witness = std::move(w);
      v.note.clear();
      v.budget_used = m.queries() - q0;
      return v;
    }
    v.margin = std::max(v.margin, r.margin);
  }
  if (v.margin == -std::numeric_limits<double>::infinity()) v.margin = 0.0;
  v.status = unknown ? Status::Unknown : Status::Holds;
  v.budget_used = m.queries() - q0;
  return v;
}

// ---------------------------------------------------------------- public checks

/// lsc / usc at x of a function of x given as an expression.
inline CheckConfig tagged_for(const std::string& f, CheckConfig cfg) {
  cfg.tagged = cfg.tagged || parse_expr(f)->has_is_rat;
  return cfg;
}

inline Verdict check_lsc_at(Model& m, const std::string& f, const TaggedPoint& x, const CheckConfig& cfg = {}) {
  return run_family(m, tagged_for(f, cfg), "lsc(" + f + ")", x, "fn_lsc", {{"f", f}}, false);
}
inline Verdict check_usc_at(Model& m, const std::string& f, const TaggedPoint& x, const CheckConfig& cfg = {}) {
  return run_family(m, tagged_for(f, cfg), "usc(" + f + ")", x, "fn_usc", {{"f", f}}, false);
}

inline Verdict check_v_lsc(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {}, std::string id = "v_lsc") {
  return run_family(m, cfg, id, x, "v_lsc", {}, false);
}
inline Verdict check_v_usc(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {}, std::string id = "v_usc") {
  return run_family(m, cfg, id, x, "v_usc", {}, false);
}
inline Verdict check_v_continuous(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                  std::string id = "v_continuous") {
  Verdict a = check_v_lsc(m, x, cfg);
  if (a.fails()) return conjoin(id, {a});
  return conjoin(id, {a, check_v_usc(m, x, cfg)});
}

/// u restricted to the graph, at (x, y).
inline Verdict check_u_graph_at(Model& m, const TaggedPoint& x, const ExtendedReal& y, bool lsc,
                                const CheckConfig& cfg = {}) {
  return run_family(m, cfg, std::string(lsc ? "u_graph_lsc" : "u_graph_usc") + "(y=" + y.str() + ")", x,
                    lsc ? "u_graph_lsc" : "u_graph_usc", {{"y", y.exact_str()}}, true);
}

/// u restricted to the graph, at every sampled (x, y) with y in `ys_from`.
inline Verdict check_u_graph_on(Model& m, const TaggedPoint& x, const IntervalSet& ys_from, bool lsc,
                                const CheckConfig& cfg, std::string id) {
  std::vector<ExtendedReal> extra;
  if (!ys_from.empty()) {
    const Slice& sl = m.slice(x);
    extra = sl.breakpoints();
    for (const auto& e : detail::endpoints(sl.argmin())) extra.push_back(e);
  }
  std::vector<Verdict> parts;
  for (const auto& y : y_samples(ys_from, extra, cfg.y_grid, cfg.y_cap)) {
    parts.push_back(check_u_graph_at(m, x, y, lsc, cfg));
    if (parts.back().fails()) break;
  }
  return conjoin(std::move(id), parts);
}

/// u on X x Y at (x, y), off-graph points included.
inline Verdict check_u_product_at(Model& m, const TaggedPoint& x, const ExtendedReal& y, bool lsc,
                                  const CheckConfig& cfg = {}) {
  return run_family(m, cfg, std::string(lsc ? "u_product_lsc" : "u_product_usc") + "(y=" + y.str() + ")", x,
                    lsc ? "u_product_lsc" : "u_product_usc", {{"y", y.exact_str()}}, true);
}

inline Verdict check_map_lsc_at(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                std::string id = "map_lsc") {
  const IntervalSet& s = m.feasible(x);
  if (s.empty()) throw DomainError("Phi(x) is empty at x=" + x.str() + "; map lsc is undefined");
  std::vector<Verdict> parts;
  for (const auto& y : y_samples(s, {}, cfg.y_grid, cfg.y_cap)) {
    parts.push_back(run_family(m, cfg, "map_lsc(y=" + y.str() + ")", x, "map_lsc", {{"y", y.exact_str()}}, false));
    if (parts.back().fails()) break;
  }
  // open ends: points just inside them stand in for the missing endpoint
  return conjoin(std::move(id), parts);
}

inline Verdict check_map_usc_at(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                std::string id = "map_usc") {
  Verdict v = run_family(m, cfg, id, x, "map_usc", {}, false);
  if (v.holds() && !m.feasible(x).is_compact()) {
    v.status = Status::Unknown;
    v.note = "Phi(x) is not compact; the excess test is not faithful";
  }
  return v;
}

inline Verdict check_argmin_usc_at(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                   std::string id = "argmin_usc") {
  Verdict v = run_family(m, cfg, id, x, "argmin_usc", {}, false);
  if (v.holds() && !m.slice(x).argmin().is_compact()) {
    v.status = Status::Unknown;
    v.note = "solution set is not compact; the excess test is not faithful";
  }
  return v;
}

inline Verdict check_condition_iv(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                  std::string id = "condition_iv") {
  return run_family(m, cfg, id, x, "condition_iv", {}, false);
}

inline Verdict check_closed_graph_at(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {}) {
  return run_family(m, cfg, "closed_graph(x=" + x.str() + ")", x, "closed_graph", {}, true);
}

/// Closed graph over the window: limits of graph sequences toward each sampled x.
inline Verdict check_closed_graph(Model& m, const TaggedPoint& focus, const CheckConfig& cfg = {},
                                  std::string id = "closed_graph") {
  std::vector<Verdict> parts;
  for (const auto& xb : global_points(m.problem(), focus, cfg.global_grid)) {
    parts.push_back(check_closed_graph_at(m, xb, cfg));
    if (parts.back().fails()) break;
  }
  return conjoin(std::move(id), parts);
}

/// Level sets of u(x, .) on Phi(x) are compact (or empty) for every lambda given.
inline Verdict check_inf_compact(Model& m, const TaggedPoint& x, const std::vector<ExtendedReal>& lambdas,
                                 const CheckConfig& cfg = {}, std::string id = "inf_compact") {
  std::vector<Verdict> parts;
  for (const auto& lam : lambdas) {
    parts.push_back(run_family(m, cfg, "level_compact(lambda=" + lam.str() + ")", x, "level_compact",
                               {{"lambda", lam.exact_str()}}, true, {}, true));
    if (parts.back().fails()) break;
  }
  return conjoin(std::move(id), parts);
}

inline std::vector<ExtendedReal> default_lambdas(Model& m, const TaggedPoint& x) {
  return detail::lambda_grid(m.slice(x).value());
}

/// KN-inf-compactness at x: (i) u lsc along the graph at every sampled (x, y),
/// (ii) bounded-cost graph sequences toward x accumulate in Phi(x).
inline Verdict check_kn_at(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {}, std::string id = "kn") {
  std::vector<Verdict> parts;
  parts.push_back(check_u_graph_on(m, x, m.feasible(x), true, cfg, "kn(i)"));
  if (parts.back().fails()) return conjoin(std::move(id), parts);
  for (const auto& lam : default_lambdas(m, x)) {
    parts.push_back(run_family(m, cfg, "kn(ii)(lambda=" + lam.str() + ")", x, "kn_level",
                               {{"lambda", lam.exact_str()}, {"ref", "phi"}}, true));
    if (parts.back().fails()) break;
  }
  return conjoin(std::move(id), parts);
}

/// K-inf-compactness on Gr_K(Phi): at sampled points of K the level sets are
/// compact and graph-restricted level sets are closed along sequences inside K.
inline Verdict check_k_inf_compact(Model& m, const IntervalSet& K, const CheckConfig& cfg = {},
                                   std::string id = "k_inf_compact") {
  if (K.empty() || !K.is_compact()) throw DomainError("K must be a nonempty compact set, got " + K.str());
  const Problem& p = m.problem();
  std::vector<TaggedPoint> pts;
  for (const auto& iv : K.pieces()) {
    ExtendedReal w = iv.hi() - iv.lo();
    for (int k = 0; k <= 8; ++k) pts.push_back((iv.lo() + w * ExtendedReal(make_rational(k, 8))).to_tagged());
  }
  for (const auto& b : x_breakpoints(p, p.window_lo, p.window_hi))
    if (K.member(ExtendedReal(b))) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto inside = [&K](const Scheme& s) {
    for (const auto& t : s.terms)
      if (!K.member(ExtendedReal(t.z))) return false;
    return true;
  };
  std::vector<Verdict> parts;
  for (const auto& xb : pts) {
    if (!p.in_x_domain(xb)) throw DomainError("K is not inside x_domain at " + xb.str());
    auto lams = default_lambdas(m, xb);
    parts.push_back(check_inf_compact(m, xb, lams, cfg, "k:level_compact(x=" + xb.str() + ")"));
    if (parts.back().fails()) break;
    for (const auto& lam : lams) {
      parts.push_back(run_family(m, cfg, "k:closed_level(x=" + xb.str() + ",lambda=" + lam.str() + ")", xb,
                                 "kn_level", {{"lambda", lam.exact_str()}, {"ref", "level"}}, true, inside));
      if (parts.back().fails()) break;
    }
    if (parts.back().fails()) break;
  }
  return conjoin(std::move(id), parts);
}

struct ConditionIII {
  Verdict verdict;
  ExtendedReal lambda;
  std::optional<IntervalSet> C;  // set when the verdict HOLDS
};

namespace detail {

/// Outward rounding of [lo, hi] to the decimal grid of unit 10^floor(log10 width).
inline IntervalSet decimal_hull(const ExtendedReal& lo, const ExtendedReal& hi) {
  double w = (hi - lo).numeric();
  double mag = w > 0 ? w : std::max(1.0, std::max(std::fabs(lo.numeric()), std::fabs(hi.numeric())));
  int e = static_cast<int>(std::floor(std::log10(mag)));
  Rational unit(1);
  for (int i = 0; i < std::abs(e); ++i) unit = e > 0 ? Rational(unit * 10) : Rational(unit / 10);
  Rational l = lo.to_tagged().is_rational() ? lo.to_tagged().value() : rational_from_double(lo.numeric());
  Rational h = hi.to_tagged().is_rational() ? hi.to_tagged().value() : rational_from_double(hi.numeric());
  Rational lq = floor_rational(l / unit) * unit;
  Rational hq = -floor_rational(-h / unit) * unit;
  return IntervalSet(Interval::closed(ExtendedReal(lq), ExtendedReal(hq)));
}

}  // namespace detail

/// Level sets at lambda are nonempty and inside one compact C for x_n near x.
inline ConditionIII check_condition_iii(Model& m, const TaggedPoint& x, const ExtendedReal& lambda,
                                        const CheckConfig& cfg = {}, std::string id = "condition_iii") {
  ConditionIII out;
  out.lambda = lambda;
  out.verdict = run_family(m, cfg, id, x, "level_iii", {{"lambda", lambda.exact_str()}}, true);
  if (!out.verdict.holds()) return out;
  std::optional<ExtendedReal> lo, hi;
  auto absorb = [&](const IntervalSet& s) {
    if (s.empty()) return;
    if (!lo || s.inf() < *lo) lo = s.inf();
    if (!hi || s.sup() > *hi) hi = s.sup();
  };
  absorb(m.slice(x).level_set(lambda));
  for (const auto& s : plan_schemes(m.problem(), x, cfg.plan, false))
    for (std::size_t i = cfg.plan.tail_start(); i < s.terms.size(); ++i) absorb(m.slice(s.terms[i].z).level_set(lambda));
  if (lo && hi) out.C = detail::decimal_hull(*lo, *hi);
  return out;
}

inline Verdict check_argmin_compact(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                    std::string id = "argmin_compact") {
  return run_family(m, cfg, id, x, "argmin_compact", {}, true, {}, true);
}

inline Verdict check_value_bound(Model& m, const TaggedPoint& x, const ExtendedReal& lambda, const std::string& rel,
                                 const CheckConfig& cfg = {}, std::string id = "value_bound") {
  return run_family(m, cfg, id, x, "value_bound", {{"lambda", lambda.exact_str()}, {"rel", rel}}, true, {}, true);
}

inline Verdict check_phi_compact(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                 std::string id = "phi_compact") {
  return run_family(m, cfg, id, x, "phi_compact", {}, true, {}, true);
}

/// Phi*(x) = Phi(x) whenever v(x) = +inf (vacuous otherwise).
inline Verdict check_argmin_is_phi(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                   std::string id = "argmin_is_phi") {
  return run_family(m, cfg, id, x, "argmin_is_phi", {}, true, {}, true);
}

inline Verdict check_phi_nonempty(Model& m, const TaggedPoint& x, const CheckConfig& cfg = {},
                                  std::string id = "phi_nonempty") {
  return run_family(m, cfg, id, x, "phi_nonempty", {}, true, {}, true);
}

// ---------------------------------------------------------------- replay

struct ReplayResult {
  bool reproduced = false;
  bool violated = false;
  double margin = 0.0;
  std::string detail;
};

/// Recomputes a witness from its stored fields on a fresh model.
inline ReplayResult replay_witness(const Problem& p, const Witness& w, const CheckConfig& cfg = {}) {
  ReplayResult out;
  try {
    ProblemModel base(p, cfg.tol);
    std::unique_ptr<TruncatedModel> tm;
    Model* m = &base;
    if (detail::arg(w.args, "model") == "truncated") {
      ExtendedReal lam = detail::parse_er(detail::arg(w.args, "model_lambda"));
      TaggedPoint anchor = parse_point(detail::arg(w.args, "model_anchor"));
      tm = std::make_unique<TruncatedModel>(base, truncate(base, lam, anchor));
      m = tm.get();
    }
    MeasurerSpec spec = make_measurer(w.check, w.args, *m, cfg);
    if (spec.pre) {
      out.detail = "measurement undefined on replay: " + spec.note;
      return out;
    }
    if (w.terms.size() < 8 || w.tail_start < 0 || w.tail_start > static_cast<int>(w.terms.size())) {
      out.detail = "witness prefix is malformed";
      return out;
    }
    std::vector<Term> tail(w.terms.begin() + w.tail_start, w.terms.end());
    Measure r = spec.fn(tail);
    out.violated = r.usable && r.violated;
    out.margin = r.margin;
    out.reproduced = out.violated && margins_agree(r.margin, w.margin);
    if (!out.reproduced)
      out.detail = out.violated ? "margin differs on replay" : "violation not reproduced";
  } catch (const Error& e) {
    out.detail = e.what();
  }
  return out;
}

}  // namespace paramin

// u(x, .) over one feasible set.  The set is cut at every point where a
// decision of the specialized program changes; between cuts the program is a
// single formula (affine in every corpus case), so infima, level sets and
// range bounds come from segment ends and exact roots.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "paramin/expr.hpp"
#include "paramin/interval_set.hpp"

namespace paramin {

struct SliceOptions {
  int grid = 257;           // Chebyshev samples per bounded piece
  int nonlinear_grid = 64;  // samples per non-affine segment
  double refine_tol = 1e-10;
  double argmin_tol = 1e-9;
  double scale = 1.0;  // magnitude hint for the core of unbounded pieces
};

inline ExtendedReal exact_of(double d) { return ExtendedReal(rational_from_double(d)); }

class Slice {
 public:
  Slice(std::shared_ptr<const YProgram> prog, IntervalSet set, SliceOptions opt = {})
      : prog_(std::move(prog)), set_(std::move(set)), opt_(opt) {
    for (const auto& iv : set_.pieces()) add_piece(iv);
    std::sort(points_.begin(), points_.end(), [](const PointVal& a, const PointVal& b) { return a.y < b.y; });
    compute_minimum();
  }

  const IntervalSet& set() const { return set_; }
  const YProgram& program() const { return *prog_; }
  const ExtendedReal& value() const { return value_; }
  bool attained() const { return attained_; }
  const IntervalSet& argmin() const { return argmin_; }
  long evaluations() const { return evals_; }

  /// Every y where the formula changes, plus closed endpoints and singletons.
  std::vector<ExtendedReal> breakpoints() const {
    std::vector<ExtendedReal> out;
    for (const auto& p : points_) out.push_back(p.y);
    return out;
  }

  ExtendedReal eval(const ExtendedReal& y) const {
    ++evals_;
    return prog_->eval_exact(y.to_tagged(), nullptr);
  }

  /// {y in set : u(y) <= lambda}.
  IntervalSet level_set(const ExtendedReal& lambda) const {
    std::vector<Interval> parts;
    for (const auto& p : points_)
      if (p.u <= lambda) parts.push_back(Interval::point(p.y));
    for (const auto& s : segments_) segment_level(s, lambda, parts);
    return IntervalSet::normalize(std::move(parts));
  }

  /// inf of u over set ∩ window; +inf when the intersection is empty.
  ExtendedReal inf_over(const IntervalSet& window) const { return extremum(window, false); }
  /// sup of u over set ∩ window; -inf when the intersection is empty.
  ExtendedReal sup_over(const IntervalSet& window) const { return extremum(window, true); }

 private:
  struct PointVal {
    ExtendedReal y, u;
  };
  struct Segment {
    ExtendedReal a, b;  // open interval, a < b
    Trace trace;
    bool affine = false;
    ExtendedReal y0, f0, slope;  // affine: f(y) = f0 + slope * (y - y0); slope 0 when f0 infinite
    ExtendedReal lim_a, lim_b;
    double core_lo = 0, core_hi = 0;  // finite box for numeric work on non-affine segments
    double hint = std::nan("");        // numeric minimizer, seeds narrow sub-level sets
  };

  std::shared_ptr<const YProgram> prog_;
  IntervalSet set_;
  SliceOptions opt_;
  std::vector<PointVal> points_;
  std::vector<Segment> segments_;
  ExtendedReal value_ = ExtendedReal::pos_inf();
  bool attained_ = false;
  IntervalSet argmin_;
  mutable long evals_ = 0;

  // ---------------------------------------------------------------- building

  double core_radius(const Interval& iv) const {
    double r = std::max(16.0, 4.0 * opt_.scale);
    if (iv.lo().is_finite()) r = std::max(r, 4.0 * std::fabs(iv.lo().numeric()));
    if (iv.hi().is_finite()) r = std::max(r, 4.0 * std::fabs(iv.hi().numeric()));
    return r;
  }

  std::vector<double> sample_piece(const Interval& iv) const {
    std::vector<double> t;
    double lo, hi;
    const double R = core_radius(iv);
    if (iv.lo().is_finite() && iv.hi().is_finite()) {
      lo = iv.lo().numeric();
      hi = iv.hi().numeric();
    } else if (iv.lo().is_finite()) {
      lo = iv.lo().numeric();
      hi = lo + R;
      for (int k = 1; k <= 40; ++k) t.push_back(lo + R * std::ldexp(1.0, k));
    } else if (iv.hi().is_finite()) {
      hi = iv.hi().numeric();
      lo = hi - R;
      for (int k = 1; k <= 40; ++k) t.push_back(hi - R * std::ldexp(1.0, k));
    } else {
      lo = -R;
      hi = R;
      for (int k = 1; k <= 40; ++k) {
        t.push_back(R * std::ldexp(1.0, k));
        t.push_back(-R * std::ldexp(1.0, k));
      }
    }
    const int n = opt_.grid;
    const double mid = lo + (hi - lo) / 2, half = (hi - lo) / 2;
    for (int i = 0; i < n; ++i) t.push_back(mid - half * std::cos(M_PI * (2.0 * i + 1) / (2.0 * n)));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    // strictly interior, decided exactly
    std::vector<double> out;
    for (double d : t) {
      ExtendedReal e = exact_of(d);
      if (iv.lo() < e && e < iv.hi()) out.push_back(d);
    }
    return out;
  }

  Trace trace_at(double t) const {
    Trace tr;
    double out;
    double close = prog_->eval_double(t, tr, out);
    ++evals_;
    if (close < 1e-9) exact_trace(exact_of(t), tr);
    return tr;
  }

  void exact_trace(const ExtendedReal& y, Trace& tr) const {
    ++evals_;
    try {
      prog_->eval_exact(y.to_tagged(), &tr);
    } catch (const EvalError&) {
      // trace is complete even when the root is undefined
    }
  }

  static std::optional<std::size_t> first_difference(const Trace& a, const Trace& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] != b[k]) return k;
    return std::nullopt;
  }

  ExtendedReal snap(double a, const Trace& ta, double b, const Trace& tb) const {
    ExtendedReal A = exact_of(a), B = exact_of(b);
    auto k = first_difference(ta, tb);
    if (k && ta[*k] != kErrorState && tb[*k] != kErrorState) {
      try {
        int i = static_cast<int>(*k);
        ExtendedReal ga = prog_->discriminant(i, A.to_tagged(), ta);
        ExtendedReal gb = prog_->discriminant(i, B.to_tagged(), ta);
        evals_ += 2;
        if (ga.sign() == 0) return A;
        if (gb.sign() == 0) return B;
        if (ga.is_finite() && gb.is_finite() && ga.is_exact() && gb.is_exact() && compare(ga, gb) != 0) {
          ExtendedReal t = A - ga * (B - A) / (gb - ga);
          if (A <= t && t <= B) {
            ++evals_;
            if (prog_->discriminant(i, t.to_tagged(), ta).sign() == 0) return t;
          }
        }
      } catch (const Error&) {
      }
    }
    return ExtendedReal(Rational((A.exact()->value() + B.exact()->value()) / 2));
  }

  void locate(double a, const Trace& ta, double b, const Trace& tb, int depth, std::vector<ExtendedReal>& out) const {
    if (ta == tb) return;
    double m = a + (b - a) / 2;
    if (!(m > a && m < b) || depth > 90) {
      out.push_back(snap(a, ta, b, tb));
      return;
    }
    Trace tm = trace_at(m);
    locate(a, ta, m, tm, depth + 1, out);
    locate(m, tm, b, tb, depth + 1, out);
  }

  void add_piece(const Interval& iv) {
    if (iv.is_singleton()) {
      points_.push_back({iv.lo(), eval(iv.lo())});
      return;
    }
    if (iv.lo_closed()) points_.push_back({iv.lo(), eval(iv.lo())});
    if (iv.hi_closed()) points_.push_back({iv.hi(), eval(iv.hi())});

    std::vector<ExtendedReal> cuts;
    if (!prog_->constant()) {
      std::vector<double> t = sample_piece(iv);
      std::vector<Trace> tr;
      tr.reserve(t.size());
      for (double d : t) tr.push_back(trace_at(d));
      for (std::size_t i = 0; i + 1 < t.size(); ++i) locate(t[i], tr[i], t[i + 1], tr[i + 1], 0, cuts);
      // a change between an endpoint and the first sample is seen by the segment
      // trace at the midpoint; no search needed there
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<ExtendedReal> nodes{iv.lo()};
    for (auto& c : cuts) {
      if (!(iv.lo() < c && c < iv.hi())) continue;
      if (compare(nodes.back(), c) == 0) continue;
      nodes.push_back(c);
      points_.push_back({c, eval(c)});
    }
    nodes.push_back(iv.hi());
    const double R = core_radius(iv);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) segments_.push_back(make_segment(nodes[i], nodes[i + 1], R));
  }

  static ExtendedReal interior_point(const ExtendedReal& a, const ExtendedReal& b, int k, int of) {
    if (a.is_finite() && b.is_finite()) return a + (b - a) * ExtendedReal(make_rational(k, of));
    if (a.is_finite()) return a + ExtendedReal(k);
    if (b.is_finite()) return b - ExtendedReal(k);
    return ExtendedReal(k - of / 2);
  }

  ExtendedReal frozen(const Segment& s, const ExtendedReal& y) const {
    ++evals_;
    return prog_->eval_frozen(y.to_tagged(), s.trace);
  }

  double frozen_double(const Segment& s, double y) const {
    ++evals_;
    return prog_->eval_frozen_double(y, s.trace);
  }

  Segment make_segment(const ExtendedReal& a, const ExtendedReal& b, double R) const {
    Segment s;
    s.a = a;
    s.b = b;
    exact_trace(interior_point(a, b, 1, 2), s.trace);
    s.core_lo = a.is_finite() ? a.numeric() : (b.is_finite() ? b.numeric() - R : -R);
    s.core_hi = b.is_finite() ? b.numeric() : (a.is_finite() ? a.numeric() + R : R);

    std::vector<ExtendedReal> q, f;
    for (int k = 1; k <= 4; ++k) {
      q.push_back(interior_point(a, b, k, 5));
      f.push_back(frozen(s, q.back()));
    }
    bool all_inf = true, any_inf = false;
    for (auto& v : f) {
      all_inf &= !v.is_finite() && compare(v, f[0]) == 0;
      any_inf |= !v.is_finite();
    }
    if (all_inf) {
      s.affine = true;
      s.y0 = q[0];
      s.f0 = f[0];
      s.slope = ExtendedReal(0);
    } else if (!any_inf) {
      ExtendedReal slope = (f[1] - f[0]) / (q[1] - q[0]);
      bool ok = f[0].is_exact() && f[1].is_exact();
      for (int k = 2; k < 4 && ok; ++k) ok = f[k].is_exact() && compare(f[k], f[0] + slope * (q[k] - q[0])) == 0;
      if (ok) {
        s.affine = true;
        s.y0 = q[0];
        s.f0 = f[0];
        s.slope = slope;
      }
    }
    s.lim_a = end_limit(s, a, -1);
    s.lim_b = end_limit(s, b, +1);
    return s;
  }

  ExtendedReal affine_at(const Segment& s, const ExtendedReal& y) const {
    if (!s.f0.is_finite() || s.slope.sign() == 0) return s.f0;
    if (!y.is_finite()) return ExtendedReal::infinity(s.slope.sign() * y.sign());
    return s.f0 + s.slope * (y - s.y0);
  }

  /// One-sided limit of the segment formula at an end (side -1: left end).
  ExtendedReal end_limit(const Segment& s, const ExtendedReal& e, int side) const {
    if (s.affine) return affine_at(s, e);
    if (e.is_finite()) {
      try {
        return frozen(s, e);
      } catch (const EvalError&) {
        // 0/0 at the end: approach numerically
        double w = (s.core_hi - s.core_lo) * 1e-9;
        double y = side < 0 ? e.numeric() + w : e.numeric() - w;
        return ExtendedReal(frozen_double(s, y));
      }
    }
    double far = e.sign() * std::max(1.0, std::fabs(s.core_hi) + std::fabs(s.core_lo)) * 1e12;
    double v = frozen_double(s, far);
    if (std::isnan(v)) throw EvalError("cost undefined far out on an unbounded piece");
    if (std::fabs(v) > 1e15) return ExtendedReal::infinity(v > 0 ? 1 : -1);
    return ExtendedReal(v);
  }

  // ---------------------------------------------------------------- queries

  /// Extremum of a non-affine segment over [c, d] (clipped to the core box).
  /// Returns the value and where it sits.
  std::pair<double, double> numeric_extremum(const Segment& s, double c, double d, bool want_max) const {
    const int n = opt_.nonlinear_grid;
    const double sign = want_max ? -1.0 : 1.0;
    auto g = [&](double y) {
      double v = frozen_double(s, y);
      return std::isnan(v) ? std::numeric_limits<double>::infinity() : sign * v;
    };
    std::vector<double> ys(n + 1), gs(n + 1);
    for (int i = 0; i <= n; ++i) {
      ys[i] = c + (d - c) * i / n;
      gs[i] = g(ys[i]);
    }
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return gs[i] < gs[j]; });
    double best = gs[order[0]], where = ys[order[0]];
    const double phi = (std::sqrt(5.0) - 1) / 2;
    for (int r = 0; r < std::min(3, n + 1); ++r) {
      int i = order[r];
      double lo = ys[std::max(0, i - 1)], hi = ys[std::min(n, i + 1)];
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double g1 = g(x1), g2 = g(x2);
      const double tol = opt_.refine_tol * std::max(1.0, std::fabs(lo) + std::fabs(hi));
      for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        if (g1 <= g2) {
          hi = x2;
          x2 = x1;
          g2 = g1;
          x1 = hi - phi * (hi - lo);
          g1 = g(x1);
        } else {
          lo = x1;
          x1 = x2;
          g1 = g2;
          x2 = lo + phi * (hi - lo);
          g2 = g(x2);
        }
      }
      double m = g1 <= g2 ? x1 : x2, gm = std::min(g1, g2);
      if (gm < best) {
        best = gm;
        where = m;
      }
    }
    return {sign * best, where};
  }

  ExtendedReal extremum(const IntervalSet& window, bool want_max) const {
    ExtendedReal best = want_max ? ExtendedReal::neg_inf() : ExtendedReal::pos_inf();
    auto take = [&](const ExtendedReal& v) {
      if (want_max ? best < v : v < best) best = v;
    };
    for (const auto& p : points_)
      if (window.member(p.y)) take(p.u);
    for (const auto& s : segments_) {
      for (const auto& w : window.pieces()) {
        ExtendedReal c = max(s.a, w.lo()), d = min(s.b, w.hi());
        if (d < c) continue;
        if (compare(c, d) == 0) {
          // a single point of the open segment, inside a closed window piece
          if (s.a < c && c < s.b && w.member(c)) take(s.affine ? affine_at(s, c) : frozen(s, c));
          continue;
        }
        ExtendedReal fc = compare(c, s.a) == 0 ? s.lim_a : (s.affine ? affine_at(s, c) : frozen(s, c));
        ExtendedReal fd = compare(d, s.b) == 0 ? s.lim_b : (s.affine ? affine_at(s, d) : frozen(s, d));
        take(fc);
        take(fd);
        if (!s.affine) {
          double lo = c.is_finite() ? c.numeric() : s.core_lo, hi = d.is_finite() ? d.numeric() : s.core_hi;
          if (lo < hi) take(ExtendedReal(numeric_extremum(s, lo, hi, want_max).first));
        }
      }
    }
    return best;
  }

  void segment_level(const Segment& s, const ExtendedReal& lambda, std::vector<Interval>& parts) const {
    auto push = [&](const ExtendedReal& lo, const ExtendedReal& hi, bool lc, bool hc) {
      if (hi < lo) return;
      if (auto iv = Interval::make(lo, hi, lc, hc)) parts.push_back(*iv);
    };
    if (s.affine) {
      if (lambda.is_pos_inf()) {
        push(s.a, s.b, false, false);
        return;
      }
      if (!s.f0.is_finite() || s.slope.sign() == 0) {
        if (s.f0 <= lambda) push(s.a, s.b, false, false);
        return;
      }
      if (lambda.is_neg_inf()) return;
      ExtendedReal r = s.y0 + (lambda - s.f0) / s.slope;
      if (s.slope.sign() > 0) {
        if (s.b <= r) push(s.a, s.b, false, false);
        else if (s.a < r) push(s.a, r, false, true);
      } else {
        if (r <= s.a) push(s.a, s.b, false, false);
        else if (r < s.b) push(r, s.b, true, false);
      }
      return;
    }
    // non-affine: sample, then bisect each crossing
    const int n = opt_.nonlinear_grid * 4;
    const double lam = lambda.numeric();
    auto inside = [&](double y) {
      double v = frozen_double(s, y);
      return !std::isnan(v) && v <= lam;
    };
    std::vector<double> ys;
    for (int i = 1; i < n; ++i) ys.push_back(s.core_lo + (s.core_hi - s.core_lo) * i / n);
    if (!std::isnan(s.hint) && s.hint > s.core_lo && s.hint < s.core_hi) {
      ys.insert(std::upper_bound(ys.begin(), ys.end(), s.hint), s.hint);
      ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    }
    std::vector<bool> in(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) in[i] = inside(ys[i]);
    auto crossing = [&](double a, double b) {
      bool ia = inside(a);
      for (int it = 0; it < 80; ++it) {
        double m = a + (b - a) / 2;
        if (!(m > a && m < b)) break;
        if (inside(m) == ia) a = m; else b = m;
      }
      return ia ? a : b;  // the side that satisfies the bound
    };
    bool start_in = s.lim_a <= lambda;
    std::optional<ExtendedReal> open_lo;
    bool open_lo_closed = false;
    if (!ys.empty() && in[0] && start_in) open_lo = s.a;
    else if (!ys.empty() && in[0]) {
      open_lo = exact_of(crossing(s.a.is_finite() ? s.a.numeric() : s.core_lo, ys[0]));
      open_lo_closed = true;
    }
    for (std::size_t i = 0; i < ys.size(); ++i) {
      bool next_in = i + 1 < ys.size() ? bool(in[i + 1]) : false;
      if (in[i] && !next_in) {
        if (i + 1 == ys.size()) {
          bool end_in = s.lim_b <= lambda;
          if (end_in) push(*open_lo, s.b, open_lo_closed, false);
          else push(*open_lo, exact_of(crossing(ys[i], s.b.is_finite() ? s.b.numeric() : s.core_hi)), open_lo_closed, true);
        } else {
          push(*open_lo, exact_of(crossing(ys[i], ys[i + 1])), open_lo_closed, true);
        }
        open_lo.reset();
      } else if (!in[i] && next_in) {
        open_lo = exact_of(crossing(ys[i + 1], ys[i]));
        open_lo_closed = true;
      }
    }
  }

  void compute_minimum() {
    if (set_.empty()) {
      value_ = ExtendedReal::pos_inf();
      attained_ = false;
      return;
    }
    // candidates: points (attained), segment limits (not attained), interior minima of
    // non-affine segments (attained unless they sit on an open end)
    ExtendedReal best = ExtendedReal::pos_inf();
    bool numeric = false;
    bool best_attained = false;
    auto take = [&](const ExtendedReal& v, bool att, bool num) {
      int c = compare(v, best);
      if (c < 0 || (c == 0 && att && !best_attained)) {
        best = v;
        best_attained = att;
        numeric = num;
      }
    };
    for (const auto& p : points_) take(p.u, true, false);
    for (auto& s : segments_) {
      if (s.affine) {
        bool flat = !s.f0.is_finite() || s.slope.sign() == 0;
        take(s.lim_a, flat, false);
        take(s.lim_b, flat, false);
        continue;
      }
      take(s.lim_a, false, false);
      take(s.lim_b, false, false);
      auto [v, y] = numeric_extremum(s, s.core_lo, s.core_hi, false);
      s.hint = y;
      double band = 1e-9 * std::max(1.0, std::fabs(y));
      bool at_end = (s.a.is_finite() && std::fabs(y - s.a.numeric()) <= band) ||
                    (s.b.is_finite() && std::fabs(y - s.b.numeric()) <= band);
      if (!at_end) take(ExtendedReal(v), true, true);
    }
    value_ = best;
    if (best.is_neg_inf() && !best_attained) {
      attained_ = false;
      return;
    }
    if (numeric) {
      argmin_ = level_set(best + ExtendedReal(opt_.argmin_tol));
      attained_ = true;
      return;
    }
    if (best.is_pos_inf()) {
      argmin_ = set_;  // u = +inf everywhere on a nonempty set: every point attains
      attained_ = true;
      return;
    }
    argmin_ = level_set(best);
    attained_ = !argmin_.empty();
  }
};

}  // namespace paramin

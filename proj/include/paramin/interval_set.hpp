// Canonical finite unions of intervals on the extended real line.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paramin/number.hpp"

namespace paramin {

/// lo <= hi; infinite endpoints are open; lo == hi only as a closed singleton.
class Interval {
 public:
  /// Empty optional for degenerate half-open input; throws on lo > hi.
  static std::optional<Interval> make(ExtendedReal lo, ExtendedReal hi, bool lo_closed, bool hi_closed) {
    int c = compare(lo, hi);
    if (c > 0) throw DomainError("malformed interval: lo > hi (" + lo.str() + " > " + hi.str() + ")");
    if (!lo.is_finite()) lo_closed = false;
    if (!hi.is_finite()) hi_closed = false;
    if (c == 0 && !(lo_closed && hi_closed)) return std::nullopt;
    if (lo.is_pos_inf() || hi.is_neg_inf()) return std::nullopt;
    return Interval(std::move(lo), std::move(hi), lo_closed, hi_closed);
  }
  static Interval closed(ExtendedReal lo, ExtendedReal hi) { return *make(std::move(lo), std::move(hi), true, true); }
  static Interval point(ExtendedReal p) { return closed(p, p); }
  static Interval reals() { return *make(ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), false, false); }

  const ExtendedReal& lo() const { return lo_; }
  const ExtendedReal& hi() const { return hi_; }
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }
  bool is_singleton() const { return lo_closed_ && hi_closed_ && lo_ == hi_; }
  bool is_bounded() const { return lo_.is_finite() && hi_.is_finite(); }

  bool member(const ExtendedReal& p) const {
    if (!p.is_finite()) return false;
    int a = compare(lo_, p), b = compare(p, hi_);
    return (a < 0 || (a == 0 && lo_closed_)) && (b < 0 || (b == 0 && hi_closed_));
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_closed_ == b.lo_closed_ && a.hi_closed_ == b.hi_closed_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  std::string str() const {
    if (is_singleton()) return "{" + lo_.exact_str() + "}";
    return std::string(lo_closed_ ? "[" : "(") + lo_.exact_str() + "," + hi_.exact_str() + (hi_closed_ ? "]" : ")");
  }

 private:
  Interval(ExtendedReal lo, ExtendedReal hi, bool lc, bool hc)
      : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lc), hi_closed_(hc) {}

  ExtendedReal lo_, hi_;
  bool lo_closed_, hi_closed_;
};

/// Pieces sorted, pairwise disjoint and non-adjacent.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(Interval iv) : pieces_{std::move(iv)} {}

  static IntervalSet normalize(std::vector<Interval> pieces) {
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
      int c = compare(a.lo(), b.lo());
      if (c != 0) return c < 0;
      return a.lo_closed() && !b.lo_closed();
    });
    IntervalSet out;
    for (auto& iv : pieces) {
      if (out.pieces_.empty()) {
        out.pieces_.push_back(std::move(iv));
        continue;
      }
      Interval& last = out.pieces_.back();
      int c = compare(iv.lo(), last.hi());
      bool joins = c < 0 || (c == 0 && (iv.lo_closed() || last.hi_closed()));
      if (!joins) {
        out.pieces_.push_back(std::move(iv));
        continue;
      }
      int d = compare(iv.hi(), last.hi());
      if (d > 0 || (d == 0 && iv.hi_closed() && !last.hi_closed())) {
        bool lo_closed = last.lo_closed();
        if (compare(iv.lo(), last.lo()) == 0) lo_closed = lo_closed || iv.lo_closed();
        last = *Interval::make(last.lo(), iv.hi(), lo_closed, iv.hi_closed());
      } else if (compare(iv.lo(), last.lo()) == 0 && iv.lo_closed() && !last.lo_closed()) {
        last = *Interval::make(last.lo(), last.hi(), true, last.hi_closed());
      }
    }
    return out;
  }
  static IntervalSet empty_set() { return {}; }
  static IntervalSet reals() { return IntervalSet(Interval::reals()); }
  static IntervalSet point(ExtendedReal p) { return IntervalSet(Interval::point(std::move(p))); }

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  bool member(const ExtendedReal& p) const {
    for (const auto& iv : pieces_)
      if (iv.member(p)) return true;
    return false;
  }

  ExtendedReal inf() const { return empty() ? ExtendedReal::pos_inf() : pieces_.front().lo(); }
  ExtendedReal sup() const { return empty() ? ExtendedReal::neg_inf() : pieces_.back().hi(); }
  /// sup |y| over the set; 0 for the empty set.
  ExtendedReal sup_abs() const {
    if (empty()) return ExtendedReal(0);
    return max(abs(inf()), abs(sup()));
  }

  bool is_closed() const {
    for (const auto& iv : pieces_)
      if ((iv.lo().is_finite() && !iv.lo_closed()) || (iv.hi().is_finite() && !iv.hi_closed())) return false;
    return true;
  }
  bool is_bounded() const { return empty() || (inf().is_finite() && sup().is_finite()); }
  bool is_compact() const { return is_closed() && is_bounded(); }

  IntervalSet closure() const {
    std::vector<Interval> out;
    out.reserve(pieces_.size());
    for (const auto& iv : pieces_) out.push_back(*Interval::make(iv.lo(), iv.hi(), true, true));
    return normalize(std::move(out));
  }

  /// Smallest interval containing the set.
  IntervalSet hull() const {
    if (empty()) return {};
    const auto& a = pieces_.front();
    const auto& b = pieces_.back();
    return IntervalSet(*Interval::make(a.lo(), b.hi(), a.lo_closed(), b.hi_closed()));
  }

  IntervalSet complement() const {
    std::vector<Interval> out;
    ExtendedReal cur = ExtendedReal::neg_inf();
    bool cur_closed = false;  // whether `cur` itself belongs to the complement
    for (const auto& iv : pieces_) {
      if (auto gap = Interval::make(cur, iv.lo(), cur_closed, !iv.lo_closed())) out.push_back(*gap);
      cur = iv.hi();
      cur_closed = !iv.hi_closed();
    }
    if (auto gap = Interval::make(cur, ExtendedReal::pos_inf(), cur_closed, false)) out.push_back(*gap);
    return normalize(std::move(out));
  }

  friend IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    for (const auto& p : a.pieces_) {
      for (const auto& q : b.pieces_) {
        int cl = compare(p.lo(), q.lo());
        const ExtendedReal& lo = cl >= 0 ? p.lo() : q.lo();
        bool lc = cl > 0 ? p.lo_closed() : (cl < 0 ? q.lo_closed() : p.lo_closed() && q.lo_closed());
        int ch = compare(p.hi(), q.hi());
        const ExtendedReal& hi = ch <= 0 ? p.hi() : q.hi();
        bool hc = ch < 0 ? p.hi_closed() : (ch > 0 ? q.hi_closed() : p.hi_closed() && q.hi_closed());
        if (compare(lo, hi) > 0) continue;
        if (auto iv = Interval::make(lo, hi, lc, hc)) out.push_back(*iv);
      }
    }
    return normalize(std::move(out));
  }
  friend IntervalSet union_sets(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out = a.pieces_;
    out.insert(out.end(), b.pieces_.begin(), b.pieces_.end());
    return normalize(std::move(out));
  }
  friend IntervalSet difference(const IntervalSet& a, const IntervalSet& b) { return intersect(a, b.complement()); }

  bool subset_of(const IntervalSet& b) const { return difference(*this, b).empty(); }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) { return a.pieces_ == b.pieces_; }

  std::string str() const {
    if (empty()) return "empty";
    if (pieces_.size() == 1) return pieces_.front().str();
    std::string out = "union(";
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i) out += ",";
      out += pieces_[i].str();
    }
    return out + ")";
  }

 private:
  std::vector<Interval> pieces_;
};

inline std::ostream& operator<<(std::ostream& os, const IntervalSet& s) { return os << s.str(); }

/// inf over s in S of |p - s|; +inf for the empty set.  Zero iff p in closure(S).
inline ExtendedReal dist(const ExtendedReal& p, const IntervalSet& s) {
  ExtendedReal best = ExtendedReal::pos_inf();
  for (const auto& iv : s.pieces()) {
    ExtendedReal d(0);
    if (p < iv.lo()) {
      d = iv.lo() - p;
    } else if (p > iv.hi()) {
      d = p - iv.hi();
    }
    if (d < best) best = d;
    if (d.sign() == 0) break;
  }
  return best;
}

/// Excess e(A,B) = sup over a in A of dist(a,B).  Zero iff A is inside closure(B).
inline ExtendedReal excess(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty()) throw DomainError("excess of an empty set is undefined");
  if (b.empty()) return ExtendedReal::pos_inf();
  IntervalSet cb = b.closure();
  ExtendedReal best(0);
  for (const auto& iv : a.pieces()) {
    if (!iv.hi().is_finite() && cb.sup().is_finite()) return ExtendedReal::pos_inf();
    if (!iv.lo().is_finite() && cb.inf().is_finite()) return ExtendedReal::pos_inf();
    // dist(., B) is piecewise linear: maxima at finite ends or at midpoints of gaps of B
    std::vector<ExtendedReal> cands;
    if (iv.lo().is_finite()) cands.push_back(iv.lo());
    if (iv.hi().is_finite()) cands.push_back(iv.hi());
    const auto& ps = cb.pieces();
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      ExtendedReal m = (ps[i].hi() + ps[i + 1].lo()) / ExtendedReal(2);
      if (m > iv.lo() && m < iv.hi()) cands.push_back(m);
    }
    for (const auto& c : cands) {
      ExtendedReal d = dist(c, cb);
      if (d > best) best = d;
    }
  }
  return best;
}

/// A point of S nearest to p.  Open endpoints are replaced by a point `inset`
/// inside the piece (exact when the endpoint is exact).  Empty for S = empty.
inline std::optional<ExtendedReal> nearest_member(const ExtendedReal& p, const IntervalSet& s,
                                                  const ExtendedReal& inset) {
  std::optional<ExtendedReal> best;
  ExtendedReal best_d = ExtendedReal::pos_inf();
  for (const auto& iv : s.pieces()) {
    ExtendedReal cand;
    if (iv.member(p)) return p;
    if (p < iv.lo()) {
      if (iv.lo_closed()) {
        cand = iv.lo();
      } else {
        ExtendedReal step = iv.hi().is_finite() ? min(inset, (iv.hi() - iv.lo()) / ExtendedReal(2)) : inset;
        cand = iv.lo() + step;
      }
    } else {
      if (iv.hi_closed()) {
        cand = iv.hi();
      } else {
        ExtendedReal step = iv.lo().is_finite() ? min(inset, (iv.hi() - iv.lo()) / ExtendedReal(2)) : inset;
        cand = iv.hi() - step;
      }
    }
    ExtendedReal d = abs(cand - p);
    if (!best || d < best_d) {
      best = cand;
      best_d = d;
    }
  }
  return best;
}

struct AccumulationResult {
  IntervalSet set;
  bool escaped = false;
};

namespace detail {

/// Snaps an extrapolated endpoint to an anchor within `tol`, else to the
/// simplest rational within a much tighter band.
inline ExtendedReal snap_endpoint(const ExtendedReal& e, const std::vector<ExtendedReal>& anchors, double tol) {
  if (!e.is_finite()) return e;
  double scale = std::max(1.0, std::fabs(e.numeric()));
  for (const auto& a : anchors)
    if (a.is_finite() && std::fabs(a.numeric() - e.numeric()) <= tol * scale) return a;
  TaggedPoint t = e.to_tagged();
  if (!t.is_rational()) return e;
  Rational band = rational_from_double(1e-12 * scale);
  return ExtendedReal(simplest_between(t.value() - band, t.value() + band));
}

/// Aitken delta-squared on three nested-set endpoints; keeps the last value
/// when the sequence is not geometrically convergent.
inline ExtendedReal aitken(const ExtendedReal& a, const ExtendedReal& b, const ExtendedReal& c) {
  if (!a.is_finite() || !b.is_finite() || !c.is_finite()) return c;
  ExtendedReal d1 = b - a, d2 = c - b;
  if (d2.sign() == 0) return c;
  ExtendedReal den = d2 - d1;
  if (den.sign() == 0 || d1.sign() != d2.sign()) return c;
  ExtendedReal lim = c - d2 * d2 / den;
  // geometric convergence moves the limit at most |d2| beyond c for ratio <= 1/2
  if (abs(lim - c) > abs(d2) * ExtendedReal(4)) return c;
  return lim;
}

}  // namespace detail

/// Finite-ladder approximation of the accumulation set of a family indexed by
/// shrinking radii, restricted to a bounded window: the closure of the deepest
/// member, with endpoints extrapolated from the last three members when they
/// share a shape.
/// `escaped` is set when members leave every bounded window (rays, or a sup|F|
/// that grows geometrically along the ladder).
inline AccumulationResult accumulation_set(std::vector<std::pair<ExtendedReal, IntervalSet>> family,
                                           const std::vector<ExtendedReal>& anchors = {},
                                           double window_radius = 0.0, double snap_tol = 1e-9) {
  if (family.empty()) throw DomainError("accumulation_set of an empty family");
  std::stable_sort(family.begin(), family.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  AccumulationResult out;

  double anchor_mag = 1.0;
  for (const auto& a : anchors)
    if (a.is_finite()) anchor_mag = std::max(anchor_mag, std::fabs(a.numeric()));
  double radius = window_radius > 0 ? window_radius : 1e3 * anchor_mag;

  std::vector<double> sups;
  for (const auto& [d, s] : family) {
    if (s.empty()) continue;
    if (!s.is_bounded()) out.escaped = true;
    sups.push_back(s.sup_abs().numeric());
  }
  if (sups.size() >= 3) {
    bool growing = true;
    for (std::size_t i = sups.size() - 3; i + 1 < sups.size(); ++i)
      if (!(sups[i + 1] >= 1.5 * sups[i])) growing = false;
    if (growing && sups.back() > radius) out.escaped = true;
  }

  IntervalSet window(Interval::closed(ExtendedReal(-radius), ExtendedReal(radius)));
  // members clipped to the window; the deepest one approximates the limit, and
  // when the last three agree in shape their endpoints are extrapolated
  std::vector<IntervalSet> members;
  for (const auto& [d, s] : family) members.push_back(intersect(s, window).closure());
  IntervalSet result = members.back();
  std::size_t n = members.size();
  if (n >= 3 && !result.empty() && members[n - 3].pieces().size() == result.pieces().size() &&
      members[n - 2].pieces().size() == result.pieces().size()) {
    std::vector<Interval> pieces;
    for (std::size_t i = 0; i < result.pieces().size(); ++i) {
      const auto& a = members[n - 3].pieces()[i];
      const auto& b = members[n - 2].pieces()[i];
      const auto& c = result.pieces()[i];
      ExtendedReal lo = detail::snap_endpoint(detail::aitken(a.lo(), b.lo(), c.lo()), anchors, snap_tol);
      ExtendedReal hi = detail::snap_endpoint(detail::aitken(a.hi(), b.hi(), c.hi()), anchors, snap_tol);
      if (lo > hi) lo = hi;
      pieces.push_back(Interval::closed(lo, hi));
    }
    result = IntervalSet::normalize(std::move(pieces));
  }
  out.set = std::move(result);
  return out;
}

}  // namespace paramin

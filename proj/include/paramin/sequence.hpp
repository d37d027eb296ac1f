// Sequence plans: finite prefixes x_n -> x used by every sequential check.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "paramin/problem.hpp"

namespace paramin {

enum class Direction : std::uint8_t {
  Stationary,
  Right,
  Left,
  TwoSided,
  IrrationalRight,
  IrrationalLeft,
  RationalRight,
  RationalLeft,
  Adversarial,
};

inline const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Stationary: return "stationary";
    case Direction::Right: return "right";
    case Direction::Left: return "left";
    case Direction::TwoSided: return "two-sided";
    case Direction::IrrationalRight: return "irrational-right";
    case Direction::IrrationalLeft: return "irrational-left";
    case Direction::RationalRight: return "rational-right";
    case Direction::RationalLeft: return "rational-left";
    case Direction::Adversarial: return "adversarial";
  }
  return "?";
}

/// One term of a scheme: the parameter point and the scale delta0 * r^n that
/// sets ball radii for y (nonzero even for the stationary scheme).
struct Term {
  TaggedPoint z;
  Rational delta;
};

struct Scheme {
  std::string id;  // e.g. "right", "adversarial-3"
  Direction dir = Direction::Right;
  std::vector<Term> terms;  // n = 1..depth
};

inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("PARAMIN_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s) return v;
  }
  return 20240611ULL;
}

struct SequencePlan {
  std::optional<Rational> delta0;  // default 0.1 * window width
  Rational ratio = make_rational(1, 2);
  int depth = 40;
  int tail = 8;          // decisions read terms depth-tail+1 .. depth
  int min_usable = 4;    // usable tail terms needed for a decision
  int adversarial = 8;   // seeded schemes with jittered offsets
  long budget = 10000;   // model queries per check
  std::uint64_t seed = default_seed();

  Rational initial_step(const Problem& p) const {
    return delta0 ? *delta0 : Rational(p.window_width() / 10);
  }
  int tail_start() const { return depth - tail; }  // index into Scheme::terms
};

namespace detail {

/// A rational strictly between lo and hi (lo < hi): the simplest one inside a
/// float bracket shrunk until it is verified exactly.
inline Rational rational_between(const TaggedPoint& lo, const TaggedPoint& hi) {
  double a = lo.numeric(), b = hi.numeric();
  for (int k = 0; k < 8; ++k) {
    double w = (b - a) / 4;
    Rational q = simplest_between(rational_from_double(a + w), rational_from_double(b - w));
    TaggedPoint t(q);
    if (lo < t && t < hi) return q;
    a += w / 2;
    b -= w / 2;
  }
  throw DomainError("no rational found between " + lo.str() + " and " + hi.str());
}

/// FNV-1a, so seeds derived from points do not depend on the standard library.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline TaggedPoint offset_point(const TaggedPoint& x, Direction dir, const Rational& step, int n,
                                const Rational& jitter, int jitter_sign) {
  switch (dir) {
    case Direction::Stationary: return x;
    case Direction::Right: return x + TaggedPoint(step);
    case Direction::Left: return x - TaggedPoint(step);
    case Direction::TwoSided: return n % 2 ? x + TaggedPoint(step) : x - TaggedPoint(step);
    case Direction::IrrationalRight:
    case Direction::IrrationalLeft: {
      TaggedPoint off(0, step / 2);  // step * sqrt2 / 2
      TaggedPoint z = dir == Direction::IrrationalRight ? x + off : x - off;
      // x irrational with a cancelling tag is impossible here: the offset only adds sqrt2 mass
      if (z.is_rational()) z = z + TaggedPoint(0, step / 1024);
      return z;
    }
    case Direction::RationalRight:
    case Direction::RationalLeft: {
      if (x.is_rational()) return dir == Direction::RationalRight ? x + TaggedPoint(step) : x - TaggedPoint(step);
      TaggedPoint a = dir == Direction::RationalRight ? x + TaggedPoint(step / 2) : x - TaggedPoint(step);
      TaggedPoint b = dir == Direction::RationalRight ? x + TaggedPoint(step) : x - TaggedPoint(step / 2);
      return TaggedPoint(rational_between(a, b));
    }
    case Direction::Adversarial: {
      Rational s = step * jitter;
      return jitter_sign > 0 ? x + TaggedPoint(s) : x - TaggedPoint(s);
    }
  }
  return x;
}

}  // namespace detail

/// Terms x_n for n = 1..depth.  The initial step is halved (at most 30 times)
/// until every term lies in the problem's analysis window; nullopt otherwise.
inline std::optional<Scheme> build_scheme(const Problem& p, const TaggedPoint& x, Direction dir,
                                          const SequencePlan& plan, const std::string& id = "",
                                          std::mt19937_64* rng = nullptr) {
  Scheme s;
  s.id = id.empty() ? direction_name(dir) : id;
  s.dir = dir;
  int sign = 1;
  std::vector<Rational> jitter(plan.depth + 1, Rational(1));
  if (dir == Direction::Adversarial) {
    if (!rng) throw DomainError("adversarial scheme needs a generator");
    std::uniform_int_distribution<long> pick(1L << 19, (1L << 20) - 1);
    sign = ((*rng)() & 1) ? 1 : -1;
    for (auto& j : jitter) j = make_rational(pick(*rng), 1L << 20);  // in [1/2, 1)
  }
  Rational delta0 = plan.initial_step(p);
  for (int halving = 0; halving <= 30; ++halving, delta0 /= 2) {
    s.terms.clear();
    Rational step = delta0;
    bool ok = true;
    for (int n = 1; n <= plan.depth; ++n) {
      step *= plan.ratio;
      TaggedPoint z = detail::offset_point(x, dir, step, n, jitter[n], sign);
      if (!p.in_window(z)) {
        ok = false;
        break;
      }
      s.terms.push_back(Term{z, step});
    }
    if (ok) return s;
    if (dir == Direction::Stationary) break;
  }
  return std::nullopt;
}

/// Every scheme of the plan that fits the domain at x, in a fixed order.
/// Shared, immutable scheme list.  Schemes depend on the problem only through
/// the window and the domain, and the same point is planned once per y sample,
/// so they are cached.
inline std::shared_ptr<const std::vector<Scheme>> plan_schemes_shared(const Problem& p, const TaggedPoint& x,
                                                                      const SequencePlan& plan, bool stationary,
                                                                      bool tagged = false) {
  thread_local std::map<std::string, std::shared_ptr<const std::vector<Scheme>>> cache;
  std::ostringstream key;
  key << p.x_domain.str() << '|' << to_string(p.window_lo) << '|' << to_string(p.window_hi) << '|'
      << p.mentions_is_rat() << '|' << x.str() << '|' << stationary << tagged << '|'
      << to_string(plan.initial_step(p)) << '|' << to_string(plan.ratio) << '|' << plan.depth << '|'
      << plan.adversarial << '|' << plan.seed;
  if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
  if (cache.size() > 4096) cache.clear();
  auto out = std::make_shared<std::vector<Scheme>>();
  std::vector<Direction> dirs;
  if (stationary) dirs.push_back(Direction::Stationary);
  dirs.insert(dirs.end(), {Direction::Right, Direction::Left, Direction::TwoSided});
  if (tagged || p.mentions_is_rat())
    dirs.insert(dirs.end(), {Direction::IrrationalRight, Direction::IrrationalLeft, Direction::RationalRight,
                             Direction::RationalLeft});
  for (Direction d : dirs)
    if (auto s = build_scheme(p, x, d, plan)) out->push_back(std::move(*s));
  std::mt19937_64 rng(plan.seed ^ detail::fnv1a(x.str()));
  for (int k = 0; k < plan.adversarial; ++k)
    if (auto s = build_scheme(p, x, Direction::Adversarial, plan, "adversarial-" + std::to_string(k), &rng))
      out->push_back(std::move(*s));
  cache.emplace(key.str(), out);
  return out;
}

inline std::vector<Scheme> plan_schemes(const Problem& p, const TaggedPoint& x, const SequencePlan& plan,
                                        bool stationary, bool tagged = false) {
  return *plan_schemes_shared(p, x, plan, stationary, tagged);
}

}  // namespace paramin

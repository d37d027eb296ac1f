// Brute-force value oracle and random problem generators used by property
// suites.  The oracle shares only the expression evaluator with the library;
// it never touches Slice.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "paramin/problem.hpp"

namespace paramin {

struct OracleResult {
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

/// inf of u(x, .) over Phi(x) by uniform sampling and repeated zoom around the
/// best samples.  Unbounded pieces are clipped to a radius past every finite
/// end point; open ends are approached from inside.
inline OracleResult oracle_value(const Problem& p, const TaggedPoint& x, int samples = 2001, int rounds = 8) {
  OracleResult out;
  IntervalSet s = p.feasible(x);
  double radius = 64.0;
  for (const auto& iv : s.pieces()) {
    if (iv.lo().is_finite()) radius = std::max(radius, 4 * std::fabs(iv.lo().numeric()));
    if (iv.hi().is_finite()) radius = std::max(radius, 4 * std::fabs(iv.hi().numeric()));
  }
  auto u = [&](double y) -> double {
    ++out.evaluations;
    try {
      TaggedPoint ty(rational_from_double(y));
      return eval_expr(*p.u, x, &ty, p.eval).numeric();
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  auto u_exact = [&](const ExtendedReal& y) -> double {
    ++out.evaluations;
    try {
      TaggedPoint ty = y.to_tagged();
      return eval_expr(*p.u, x, &ty, p.eval).numeric();
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  double best = std::numeric_limits<double>::infinity();
  auto take = [&](double v) {
    if (!std::isnan(v)) best = std::min(best, v);
  };
  for (const auto& iv : s.pieces()) {
    if (iv.lo().is_finite() && iv.lo_closed()) take(u_exact(iv.lo()));
    if (iv.hi().is_finite() && iv.hi_closed()) take(u_exact(iv.hi()));
    double a = iv.lo().is_finite() ? iv.lo().numeric() : -radius;
    double b = iv.hi().is_finite() ? iv.hi().numeric() : radius;
    if (iv.is_singleton()) continue;
    // open ends are approached from inside
    double eps = 1e-10 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
    double lo = iv.lo_closed() ? a : a + eps, hi = iv.hi_closed() ? b : b - eps;
    if (!(lo < hi)) continue;
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i <= samples; ++i) {
      double y = lo + (hi - lo) * i / samples;
      double v = u(y);
      take(v);
      if (!std::isnan(v)) grid.emplace_back(v, y);
    }
    std::sort(grid.begin(), grid.end());
    double h = (hi - lo) / samples;
    for (std::size_t k = 0; k < std::min<std::size_t>(5, grid.size()); ++k) {
      double c = grid[k].second, w = h;
      for (int r = 0; r < rounds; ++r) {
        double bc = c, bv = std::numeric_limits<double>::infinity();
        for (int i = -40; i <= 40; ++i) {
          double y = std::clamp(c + w * i / 40, lo, hi);
          double v = u(y);
          take(v);
          if (v < bv) {
            bv = v;
            bc = y;
          }
        }
        c = bc;
        w /= 20;
      }
    }
  }
  out.value = best;
  return out;
}

// ---------------------------------------------------------------- generators

struct RandomProblemOptions {
  int depth = 4;
  bool continuous = false;      // no indicators, no conditionals in u
  bool constant_phi = false;    // Phi a constant compact interval
  bool symmetric_x = false;     // X = [-1, 1] instead of [0, 1]
};

/// Piecewise problems with X = [0, 1] or [-1, 1], Y = [-4, 4] and Phi inside Y.
/// y only ever meets x-only factors in products, and denominators are kept
/// away from zero.
class ProblemGenerator {
 public:
  explicit ProblemGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string coefficient() {
    // n/d in [-4, 4]
    std::uniform_int_distribution<int> den(1, 4);
    int d = den(rng_);
    int n = std::uniform_int_distribution<int>(-4 * d, 4 * d)(rng_);
    std::ostringstream os;
    if (n < 0) os << "(" << n << "/" << d << ")";
    else os << n << "/" << d;
    return os.str();
  }

  /// A function of x alone.
  std::string x_term(int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 1);
    switch (pick(rng_)) {
      case 0: return coefficient();
      case 1: return "x";
      case 2: return "(" + x_term(depth - 1) + " + " + x_term(depth - 1) + ")";
      case 3: return "(" + x_term(depth - 1) + " * " + x_term(depth - 1) + ")";
      case 4: return "abs(" + x_term(depth - 1) + ")";
      case 5: return "(" + x_term(depth - 1) + ") / (1 + abs(" + x_term(depth - 1) + "))";
      default: return "min(" + x_term(depth - 1) + ", " + x_term(depth - 1) + ")";
    }
  }

  std::string predicate(int depth) {
    static const char* ops[] = {"<", "<=", ">", ">="};
    std::uniform_int_distribution<int> op(0, 3);
    return u_term(depth) + " " + ops[op(rng_)] + " " + coefficient();
  }

  std::string u_term(int depth, bool continuous = false) {
    int top = depth > 0 ? (continuous ? 7 : 9) : 2;
    std::uniform_int_distribution<int> pick(0, top);
    switch (pick(rng_)) {
      case 0: return coefficient();
      case 1: return "x";
      case 2: return "y";
      case 3: return "(" + u_term(depth - 1, continuous) + " + " + u_term(depth - 1, continuous) + ")";
      case 4: return "(" + u_term(depth - 1, continuous) + " - " + u_term(depth - 1, continuous) + ")";
      case 5: return "(" + x_term(std::max(0, depth - 2)) + ") * " + u_term(depth - 1, continuous);
      case 6: return "abs(" + u_term(depth - 1, continuous) + ")";
      case 7: return "max(" + u_term(depth - 1, continuous) + ", " + u_term(depth - 1, continuous) + ")";
      case 8: return "I{" + predicate(std::max(0, depth - 2)) + "}";
      default:
        return "piecewise(" + predicate(std::max(0, depth - 2)) + ", " + u_term(depth - 1) + ", " +
               u_term(depth - 1) + ")";
    }
  }

  /// lo + slope*x with |lo| <= 3/2, |slope| <= 1; hi = lo + width, width <= 3/2.
  std::string affine_interval(bool allow_open) {
    std::uniform_int_distribution<int> a(-6, 6), b(-4, 4), w(0, 6), open(0, 5);
    std::ostringstream lo;
    lo << "(" << a(rng_) << "/4 + (" << b(rng_) << "/4)*x)";
    int width = w(rng_);
    std::string l = lo.str(), h = "(" + l + " + " + std::to_string(width) + "/4)";
    if (width == 0) return "{" + l + "}";
    int o = allow_open ? open(rng_) : 5;
    const char* lb = o == 0 ? "(" : "[";
    const char* rb = o == 1 ? ")" : "]";
    return std::string(lb) + l + ", " + h + rb;
  }

  std::string phi(const RandomProblemOptions& opt) {
    if (opt.constant_phi) {
      std::uniform_int_distribution<int> a(-8, 4), w(1, 8);
      int lo = a(rng_);
      return "[" + std::to_string(lo) + "/2, " + std::to_string(lo + w(rng_)) + "/2]";
    }
    std::uniform_int_distribution<int> pick(0, 4);
    switch (pick(rng_)) {
      case 0:
      case 1: return affine_interval(true);
      case 2: return "union(" + affine_interval(true) + ", " + affine_interval(true) + ")";
      case 3: return "if x > " + coefficient_in_x() + " then " + affine_interval(true) + " else " + affine_interval(true);
      default: return "{" + x_affine() + ", " + x_affine() + "}";
    }
  }

  std::string yaml(const RandomProblemOptions& opt, const std::string& name) {
    std::ostringstream os;
    std::string xd = opt.symmetric_x ? "[-1, 1]" : "[0, 1]";
    os << "name: " << name << "\n"
       << "x_domain: \"" << xd << "\"\n"
       << "y_domain: \"[-4, 4]\"\n"
       << "u: \"" << u_term(opt.depth, opt.continuous) << "\"\n"
       << "phi: \"" << phi(opt) << "\"\n";
    return os.str();
  }

  /// Draws until the document loads (phi may leave Y for unlucky draws).
  Problem problem(const RandomProblemOptions& opt, const std::string& name, std::string* text = nullptr) {
    for (int attempt = 0;; ++attempt) {
      std::string doc = yaml(opt, name);
      try {
        Problem p = load_problem_text(doc);
        if (text) *text = doc;
        return p;
      } catch (const Error&) {
        if (attempt > 200) throw;
      }
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::string coefficient_in_x() {
    std::uniform_int_distribution<int> n(-3, 3);
    return "(" + std::to_string(n(rng_)) + "/4)";
  }
  std::string x_affine() {
    std::uniform_int_distribution<int> a(-8, 8), b(-4, 4);
    return "(" + std::to_string(a(rng_)) + "/4 + (" + std::to_string(b(rng_)) + "/4)*x)";
  }

  std::mt19937_64 rng_;
};

}  // namespace paramin

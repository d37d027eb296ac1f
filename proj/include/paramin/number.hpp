// Exact and approximate scalars on the extended real line.
//
// TaggedPoint is an exact element of Q(sqrt 2): a rational value plus an
// optional rational multiple of sqrt 2.  The sqrt 2 part is the irrationality
// marker; a point is rational iff the marker is zero.  ExtendedReal is the
// codomain of costs and value functions: -inf, +inf, or a finite scalar that
// is either exact (a TaggedPoint) or an IEEE double.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace paramin {

using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undefined arithmetic: (+inf) + (-inf), division by zero, NaN.
class DomainError : public Error {
 public:
  using Error::Error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rational_from_double(double d) {
  if (!std::isfinite(d)) throw DomainError("non-finite double has no rational value");
  return Rational(d);  // exact: every finite double is a dyadic rational
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p", "-p" or "p/q" with integer p, q.
inline Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw Error("malformed rational literal '" + text + "'");
  if (q.get_den() == 0) throw DomainError("rational with zero denominator");
  q.canonicalize();
  return q;
}

/// Correctly rounded conversion (mpq_get_d truncates).
inline double to_double(const Rational& q) {
  // numerator and denominator exact in a double: one IEEE division rounds correctly
  if (mpz_sizeinbase(q.get_num_mpz_t(), 2) <= 53 && mpz_sizeinbase(q.get_den_mpz_t(), 2) <= 53)
    return q.get_num().get_d() / q.get_den().get_d();
  double d = q.get_d();
  if (!std::isfinite(d) || d == 0.0) return d;
  double up = std::nextafter(d, std::numeric_limits<double>::infinity());
  double down = std::nextafter(d, -std::numeric_limits<double>::infinity());
  double best = d;
  Rational err = abs(Rational(d) - q);
  for (double c : {up, down}) {
    Rational e = abs(Rational(c) - q);
    if (e < err) {
      err = e;
      best = c;
    }
  }
  return best;
}

inline Rational floor_rational(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

/// Simplest rational (smallest denominator) in the closed interval [lo, hi].
inline Rational simplest_between(Rational lo, Rational hi) {
  if (hi < lo) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return Rational(0);
  bool negative = hi < 0;
  if (negative) {
    Rational t = -lo;
    lo = -hi;
    hi = t;
  }
  // continued-fraction descent
  Rational fl = floor_rational(lo);
  Rational result;
  if (fl == lo) {
    result = lo;
  } else if (fl + 1 <= hi) {
    result = fl + 1;
  } else {
    Rational inner = simplest_between(1 / (hi - fl), 1 / (lo - fl));
    result = fl + 1 / inner;
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

class TaggedPoint {
 public:
  TaggedPoint() : approx_(0.0), has_approx_(true) {}
  TaggedPoint(Rational value, Rational sqrt2_coeff = 0)
      : value_(std::move(value)), sqrt2_(std::move(sqrt2_coeff)) {
    value_.canonicalize();
    sqrt2_.canonicalize();
  }
  TaggedPoint(long v) : TaggedPoint(Rational(v)) {}
  TaggedPoint(int v) : TaggedPoint(Rational(v)) {}

  static TaggedPoint from_double(double d) { return TaggedPoint(rational_from_double(d)); }
  static TaggedPoint sqrt2() { return TaggedPoint(0, 1); }

  bool is_rational() const { return sgn(sqrt2_) == 0; }
  const Rational& value() const { return value_; }
  const Rational& sqrt2_coeff() const { return sqrt2_; }
  double numeric() const {
    // computed on first use: most intermediate points never need a double
    if (!has_approx_) {
      approx_ = compute_numeric();
      has_approx_ = true;
    }
    return approx_;
  }

  int sign() const {
    int sa = sgn(value_);
    int sb = sgn(sqrt2_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // a + b*sqrt2 with opposite signs: compare a^2 with 2 b^2
    int c = cmp(Rational(value_ * value_), Rational(2 * sqrt2_ * sqrt2_));
    return c > 0 ? sa : (c < 0 ? sb : 0);
  }

  TaggedPoint operator-() const { return TaggedPoint(-value_, -sqrt2_); }
  friend TaggedPoint operator+(const TaggedPoint& a, const TaggedPoint& b) {
    return TaggedPoint(a.value_ + b.value_, a.sqrt2_ + b.sqrt2_);
  }
  friend TaggedPoint operator-(const TaggedPoint& a, const TaggedPoint& b) {
    return TaggedPoint(a.value_ - b.value_, a.sqrt2_ - b.sqrt2_);
  }
  friend TaggedPoint operator*(const TaggedPoint& a, const TaggedPoint& b) {
    if (a.is_rational() && b.is_rational()) return TaggedPoint(a.value_ * b.value_);
    return TaggedPoint(a.value_ * b.value_ + 2 * a.sqrt2_ * b.sqrt2_,
                       a.value_ * b.sqrt2_ + a.sqrt2_ * b.value_);
  }
  friend TaggedPoint operator/(const TaggedPoint& a, const TaggedPoint& b) {
    if (b.sign() == 0) throw DomainError("division by zero");
    if (b.is_rational()) return TaggedPoint(a.value_ / b.value_, a.sqrt2_ / b.value_);
    // multiply by the conjugate; the norm c^2 - 2 d^2 is nonzero for b != 0
    Rational norm = b.value_ * b.value_ - 2 * b.sqrt2_ * b.sqrt2_;
    Rational re = a.value_ * b.value_ - 2 * a.sqrt2_ * b.sqrt2_;
    Rational ir = a.sqrt2_ * b.value_ - a.value_ * b.sqrt2_;
    return TaggedPoint(re / norm, ir / norm);
  }

  friend bool operator==(const TaggedPoint& a, const TaggedPoint& b) {
    return a.value_ == b.value_ && a.sqrt2_ == b.sqrt2_;
  }
  friend std::strong_ordering operator<=>(const TaggedPoint& a, const TaggedPoint& b) {
    int s = a.is_rational() && b.is_rational() ? cmp(a.value_, b.value_) : (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "p/q" or "p/q+r/s*sqrt2"; parseable back by parse_point().
  std::string str() const {
    if (is_rational()) return to_string(value_);
    std::string out;
    if (sgn(value_) != 0) out = to_string(value_);
    if (sgn(sqrt2_) < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    Rational mag = abs(sqrt2_);
    if (mag != 1) out += to_string(mag) + "*";
    out += "sqrt2";
    return out;
  }

 private:
  double compute_numeric() const {
    if (is_rational()) return to_double(value_);
    // 200 bits keeps the a + b*sqrt2 cancellation error far below 1e-15
    mpf_class a(value_, 200), b(sqrt2_, 200), r(2, 200);
    r = sqrt(r);
    mpf_class s(a + b * r, 200);
    return s.get_d();
  }

  Rational value_;
  Rational sqrt2_;
  mutable double approx_ = 0.0;
  mutable bool has_approx_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const TaggedPoint& p) { return os << p.str(); }

/// An element of R u {-inf, +inf}.  Finite values are exact (TaggedPoint) or
/// approximate (double); arithmetic stays exact while both operands are.
class ExtendedReal {
 public:
  enum class Kind : std::int8_t { NegInf = -1, Finite = 0, PosInf = 1 };

  ExtendedReal() : kind_(Kind::Finite), approx_(0.0), exact_(zero_ptr()) {}
  ExtendedReal(double d) : kind_(Kind::Finite), approx_(d) {
    if (std::isnan(d)) throw DomainError("NaN is not an extended real");
    if (std::isinf(d)) kind_ = d > 0 ? Kind::PosInf : Kind::NegInf;
  }
  ExtendedReal(TaggedPoint p)
      : kind_(Kind::Finite),
        approx_(0.0),
        exact_(std::make_shared<const TaggedPoint>(std::move(p))) {}
  ExtendedReal(const Rational& q) : ExtendedReal(TaggedPoint(q)) {}
  ExtendedReal(int v) : ExtendedReal(TaggedPoint(v)) {}
  ExtendedReal(long v) : ExtendedReal(TaggedPoint(v)) {}

  static ExtendedReal pos_inf() { return ExtendedReal(Kind::PosInf); }
  static ExtendedReal neg_inf() { return ExtendedReal(Kind::NegInf); }
  static ExtendedReal infinity(int sign) { return sign > 0 ? pos_inf() : neg_inf(); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  /// Infinities count as exact.
  bool is_exact() const { return !is_finite() || exact_ != nullptr; }
  const TaggedPoint* exact() const { return exact_.get(); }

  double numeric() const {
    if (kind_ == Kind::PosInf) return std::numeric_limits<double>::infinity();
    if (kind_ == Kind::NegInf) return -std::numeric_limits<double>::infinity();
    return val();
  }

  /// Exact value of a finite number; inexact doubles convert exactly.
  TaggedPoint to_tagged() const {
    if (!is_finite()) throw DomainError("infinite value has no finite representation");
    if (exact_) return *exact_;
    return TaggedPoint::from_double(approx_);
  }

  int sign() const {
    if (kind_ != Kind::Finite) return static_cast<int>(kind_);
    if (exact_) return exact_->sign();
    return (approx_ > 0) - (approx_ < 0);
  }

  ExtendedReal operator-() const {
    if (kind_ == Kind::PosInf) return neg_inf();
    if (kind_ == Kind::NegInf) return pos_inf();
    if (exact_) return ExtendedReal(-*exact_);
    return ExtendedReal(-approx_);
  }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if (!a.is_finite() || !b.is_finite()) {
      if (!a.is_finite() && !b.is_finite() && a.kind_ != b.kind_)
        throw DomainError("(+inf) + (-inf) is undefined");
      return a.is_finite() ? b : a;
    }
    if (a.exact_ && b.exact_) return ExtendedReal(*a.exact_ + *b.exact_);
    return ExtendedReal(a.val() + b.val());
  }
  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) { return a + (-b); }
  friend ExtendedReal operator*(const ExtendedReal& a, const ExtendedReal& b) {
    if (!a.is_finite() || !b.is_finite()) {
      int s = a.sign() * b.sign();
      if (s == 0) return ExtendedReal(0);  // 0 * inf = 0
      return infinity(s);
    }
    if (a.exact_ && b.exact_) return ExtendedReal(*a.exact_ * *b.exact_);
    return ExtendedReal(a.val() * b.val());
  }
  friend ExtendedReal operator/(const ExtendedReal& a, const ExtendedReal& b) {
    if (b.sign() == 0) throw DomainError("division by zero");
    if (!b.is_finite()) {
      if (!a.is_finite()) throw DomainError("inf / inf is undefined");
      return ExtendedReal(0);
    }
    if (!a.is_finite()) return infinity(a.sign() * b.sign());
    if (a.exact_ && b.exact_) return ExtendedReal(*a.exact_ / *b.exact_);
    return ExtendedReal(a.val() / b.val());
  }

  friend int compare(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_) ? -1 : 1;
    if (!a.is_finite()) return 0;
    if (a.exact_ && b.exact_) {
      auto c = *a.exact_ <=> *b.exact_;
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    double da = a.val(), db = b.val();
    if (!a.exact_ && !b.exact_) return (da > db) - (da < db);
    double scale = std::max({1.0, std::fabs(da), std::fabs(db)});
    if (std::fabs(da - db) > 1e-9 * scale) return (da > db) - (da < db);
    auto c = a.to_tagged() <=> b.to_tagged();
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return compare(a, b) == 0; }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) { return compare(a, b) < 0; }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return compare(a, b) <= 0; }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return compare(a, b) > 0; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return compare(a, b) >= 0; }

  /// Human-readable form.
  std::string str() const {
    if (kind_ == Kind::PosInf) return "inf";
    if (kind_ == Kind::NegInf) return "-inf";
    if (exact_) return exact_->str();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", approx_);
    return buf;
  }

  /// Lossless form: inexact doubles are written as their exact dyadic value.
  std::string exact_str() const {
    if (!is_finite()) return str();
    return to_tagged().str();
  }

 private:
  explicit ExtendedReal(Kind k) : kind_(k), approx_(0.0) {}
  double val() const { return exact_ ? exact_->numeric() : approx_; }
  static const std::shared_ptr<const TaggedPoint>& zero_ptr() {
    static const auto z = std::make_shared<const TaggedPoint>();
    return z;
  }

  Kind kind_;
  double approx_;
  std::shared_ptr<const TaggedPoint> exact_;
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedReal& v) { return os << v.str(); }

inline ExtendedReal abs(const ExtendedReal& v) { return v.sign() < 0 ? -v : v; }
inline const ExtendedReal& min(const ExtendedReal& a, const ExtendedReal& b) { return b < a ? b : a; }
inline const ExtendedReal& max(const ExtendedReal& a, const ExtendedReal& b) { return a < b ? b : a; }

/// Rounds to `digits` significant decimal digits (report formatting).
inline double round_significant(double v, int digits = 12) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

}  // namespace paramin

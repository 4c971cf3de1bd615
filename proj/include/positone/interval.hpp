#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace positone {

// Thrown when a function is evaluated over arguments (or interval boxes)
// that touch a region outside its real domain, e.g. log of an interval
// containing zero or division by an interval containing zero.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] with outward (directed) rounding.
//
// Rounding policy:
//   * +, -, *, / and sqrt use error-free transformations (two-sum, fma)
//     to round outward only when the double result is inexact, so dyadic
//     arithmetic stays exact ([1,4]^2 is exactly [1,16]).
//   * libm functions (sin, cos, exp, log, pow) are widened by two ulps
//     around the libm value; exact anchor points (exp(0)=1, log(1)=0,
//     sin(0)=0, cos(0)=1) are kept exact.
//   * decimal literals denote their binary64 value; enclosures are sound
//     with respect to that convention.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr explicit Interval(double x) : lo(x), hi(x) {}
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double width() const { return hi - lo; }
  double mid() const {
    double m = 0.5 * (lo + hi);
    if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
    return m;
  }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool valid() const { return lo <= hi && !std::isnan(lo) && !std::isnan(hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

namespace rounding {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double prev(double x) { return std::nextafter(x, -kInf); }
inline double next(double x) { return std::nextafter(x, kInf); }
inline double prev2(double x) { return prev(prev(x)); }
inline double next2(double x) { return next(next(x)); }

// Knuth two-sum residual; exact in round-to-nearest.
inline double sum_err(double a, double b, double s) {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) {
  double s = a + b;
  if (s == kInf) return std::numeric_limits<double>::max();
  if (!std::isfinite(s)) return s;
  return sum_err(a, b, s) < 0 ? prev(s) : s;
}

inline double add_up(double a, double b) {
  double s = a + b;
  if (s == -kInf) return -std::numeric_limits<double>::max();
  if (!std::isfinite(s)) return s;
  return sum_err(a, b, s) > 0 ? next(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
  double p = a * b;
  if (p == kInf) return std::numeric_limits<double>::max();
  if (!std::isfinite(p)) return p;
  double err = std::fma(a, b, -p);
  return err < 0 ? prev(p) : p;
}

inline double mul_up(double a, double b) {
  double p = a * b;
  if (p == -kInf) return -std::numeric_limits<double>::max();
  if (!std::isfinite(p)) return p;
  double err = std::fma(a, b, -p);
  return err > 0 ? next(p) : p;
}

// Quotient residual: a/b = r + d with d = -fma(r, b, -a)/b.
inline double div_down(double a, double b) {
  double r = a / b;
  if (r == kInf) return std::numeric_limits<double>::max();
  if (!std::isfinite(r)) return r;
  double err = std::fma(r, b, -a);
  bool d_negative = (err > 0) == (b > 0);
  return (err != 0 && d_negative) ? prev(r) : r;
}

inline double div_up(double a, double b) {
  double r = a / b;
  if (r == -kInf) return -std::numeric_limits<double>::max();
  if (!std::isfinite(r)) return r;
  double err = std::fma(r, b, -a);
  bool d_positive = (err > 0) != (b > 0);
  return (err != 0 && d_positive) ? next(r) : r;
}

inline double sqrt_down(double a) {
  double r = std::sqrt(a);
  double err = std::fma(r, r, -a);  // r^2 - a
  return err > 0 ? prev(r) : r;
}

inline double sqrt_up(double a) {
  double r = std::sqrt(a);
  double err = std::fma(r, r, -a);
  return err < 0 ? next(r) : r;
}

// Nonnegative integer power with directed rounding, base >= 0.
inline double ipow_nonneg(double x, long n, bool up) {
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) result = up ? mul_up(result, base) : mul_down(result, base);
    n >>= 1;
    if (n > 0) base = up ? mul_up(base, base) : mul_down(base, base);
  }
  return result;
}

}  // namespace rounding

inline Interval operator+(const Interval& a, const Interval& b) {
  return {rounding::add_down(a.lo, b.lo), rounding::add_up(a.hi, b.hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return {rounding::sub_down(a.lo, b.hi), rounding::sub_up(a.hi, b.lo)};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  using namespace rounding;
  double d1 = mul_down(a.lo, b.lo), d2 = mul_down(a.lo, b.hi);
  double d3 = mul_down(a.hi, b.lo), d4 = mul_down(a.hi, b.hi);
  double u1 = mul_up(a.lo, b.lo), u2 = mul_up(a.lo, b.hi);
  double u3 = mul_up(a.hi, b.lo), u4 = mul_up(a.hi, b.hi);
  return {std::min(std::min(d1, d2), std::min(d3, d4)),
          std::max(std::max(u1, u2), std::max(u3, u4))};
}

inline Interval operator/(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (b.lo <= 0.0 && b.hi >= 0.0)
    throw DomainError("division by interval containing zero");
  double d1 = div_down(a.lo, b.lo), d2 = div_down(a.lo, b.hi);
  double d3 = div_down(a.hi, b.lo), d4 = div_down(a.hi, b.hi);
  double u1 = div_up(a.lo, b.lo), u2 = div_up(a.lo, b.hi);
  double u3 = div_up(a.hi, b.lo), u4 = div_up(a.hi, b.hi);
  return {std::min(std::min(d1, d2), std::min(d3, d4)),
          std::max(std::max(u1, u2), std::max(u3, u4))};
}

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval abs(const Interval& x) {
  if (x.lo >= 0.0) return x;
  if (x.hi <= 0.0) return {-x.hi, -x.lo};
  return {0.0, std::max(-x.lo, x.hi)};
}

inline Interval sqrt(const Interval& x) {
  if (x.lo < 0.0) throw DomainError("sqrt of interval below zero");
  return {rounding::sqrt_down(x.lo), rounding::sqrt_up(x.hi)};
}

inline Interval exp(const Interval& x) {
  double lo = x.lo == 0.0 ? 1.0 : std::max(0.0, rounding::prev2(std::exp(x.lo)));
  double hi = x.hi == 0.0 ? 1.0 : rounding::next2(std::exp(x.hi));
  return {lo, hi};
}

inline Interval log(const Interval& x) {
  if (x.lo <= 0.0) throw DomainError("log of interval touching zero or below");
  double lo = x.lo == 1.0 ? 0.0 : rounding::prev2(std::log(x.lo));
  double hi = x.hi == 1.0 ? 0.0 : rounding::next2(std::log(x.hi));
  return {lo, hi};
}

namespace detail {

constexpr double kTwoPi = 6.283185307179586476925286766559;  // rounds to nearest double

// True iff some point base + 2*pi*k lies in [lo - slack, hi + slack].
// The slack errs toward "attained", which only widens the bound.
inline bool crosses_periodic(double lo, double hi, double base) {
  double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  double slack = 1e-9 + 4e-15 * scale;
  double k = std::ceil((lo - slack - base) / kTwoPi);
  double c = base + k * kTwoPi;
  return c <= hi + slack;
}

inline Interval sin_cos_range(const Interval& x, bool is_sin) {
  using namespace rounding;
  if (!(x.hi - x.lo < kTwoPi)) return {-1.0, 1.0};
  if (std::abs(x.lo) > 1e12 || std::abs(x.hi) > 1e12) return {-1.0, 1.0};
  double max_at = is_sin ? kTwoPi / 4.0 : 0.0;            // pi/2 resp. 0 (mod 2*pi)
  double min_at = is_sin ? -kTwoPi / 4.0 : kTwoPi / 2.0;  // -pi/2 resp. pi
  // per-endpoint enclosures; t = 0 is an exact anchor
  auto down = [is_sin](double t) {
    return t == 0.0 ? (is_sin ? 0.0 : 1.0) : prev2(is_sin ? std::sin(t) : std::cos(t));
  };
  auto up = [is_sin](double t) {
    return t == 0.0 ? (is_sin ? 0.0 : 1.0) : next2(is_sin ? std::sin(t) : std::cos(t));
  };
  double lo = crosses_periodic(x.lo, x.hi, min_at)
                  ? -1.0
                  : std::max(-1.0, std::min(down(x.lo), down(x.hi)));
  double hi = crosses_periodic(x.lo, x.hi, max_at)
                  ? 1.0
                  : std::min(1.0, std::max(up(x.lo), up(x.hi)));
  return {lo, hi};
}

}  // namespace detail

inline Interval sin(const Interval& x) { return detail::sin_cos_range(x, true); }
inline Interval cos(const Interval& x) { return detail::sin_cos_range(x, false); }

// x^n for integer n. Exact sign handling; the zero-power convention
// matches std::pow (x^0 == 1, including 0^0).
inline Interval pow_int(const Interval& x, long n) {
  using namespace rounding;
  if (n == 0) return Interval(1.0);
  if (n < 0) return Interval(1.0) / pow_int(x, -n);
  if (x.lo >= 0.0) return {ipow_nonneg(x.lo, n, false), ipow_nonneg(x.hi, n, true)};
  if (x.hi <= 0.0) {
    double lo_mag = ipow_nonneg(-x.lo, n, true);   // |lo|^n rounded up
    double hi_mag_d = ipow_nonneg(-x.hi, n, false);
    if (n % 2 == 0) return {ipow_nonneg(-x.hi, n, false), lo_mag};
    return {-lo_mag, -hi_mag_d};
  }
  // straddles zero
  if (n % 2 == 0)
    return {0.0, std::max(ipow_nonneg(-x.lo, n, true), ipow_nonneg(x.hi, n, true))};
  return {-ipow_nonneg(-x.lo, n, true), ipow_nonneg(x.hi, n, true)};
}

// General power for nonnegative base. x^q is monotone in each argument
// separately over x >= 0, so corner evaluation encloses the range.
inline Interval pow(const Interval& base, const Interval& expo) {
  using namespace rounding;
  if (expo.lo == expo.hi) {
    double q = expo.lo;
    if (q == std::rint(q) && std::abs(q) < 1e15) return pow_int(base, static_cast<long>(q));
  }
  if (base.lo < 0.0)
    throw DomainError("negative base with non-integer exponent");
  if (base.lo == 0.0 && expo.lo <= 0.0)
    throw DomainError("zero base with non-positive exponent");
  double c1 = std::pow(base.lo, expo.lo);
  double c2 = std::pow(base.lo, expo.hi);
  double c3 = std::pow(base.hi, expo.lo);
  double c4 = std::pow(base.hi, expo.hi);
  double lo = std::min(std::min(c1, c2), std::min(c3, c4));
  double hi = std::max(std::max(c1, c2), std::max(c3, c4));
  return {std::max(0.0, prev2(lo)), next2(hi)};
}

// Tight enclosures of pi and e (the double constant sits below the true value).
inline Interval pi_interval() {
  constexpr double pi_lo = 3.141592653589793115997963468544;  // = M_PI
  return {pi_lo, rounding::next(pi_lo)};
}

inline Interval e_interval() {
  constexpr double e_lo = 2.718281828459045090795598298428;  // = M_E
  return {e_lo, rounding::next(e_lo)};
}

}  // namespace positone

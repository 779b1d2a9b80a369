#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crnreal {

// Expression templates off: values behave like plain types in std::min, auto, etc.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

// Always reduced, denominator > 0.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline int sign_of(const BigInt& v) { return v.sign(); }
inline int sign_of(const Rational& r) { return numerator_of(r).sign(); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  return Rational(num, den);
}

// Canonical text: "n" when integral, "n/d" otherwise.
inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

// Nearest-ish double (error below 2 ulp) that stays finite for huge numerators
// and denominators, unlike dividing the converted halves.
inline double to_double(const Rational& r) {
  BigInt num = numerator_of(r);
  const BigInt den = denominator_of(r);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;
  const long shift = static_cast<long>(boost::multiprecision::msb(num)) -
                     static_cast<long>(boost::multiprecision::msb(den)) - 62;
  BigInt q = shift >= 0 ? BigInt(num / (den << static_cast<unsigned>(shift)))
                        : BigInt((num << static_cast<unsigned>(-shift)) / den);
  const double mantissa = q.convert_to<double>();
  const double v = std::ldexp(mantissa, static_cast<int>(shift));
  return negative ? -v : v;
}

inline double to_double(const BigInt& v) { return to_double(Rational(v)); }

// Exact conversion of a finite double.
inline Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
  if (v == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num(scaled);
  if (exponent >= 0) return Rational(num << exponent);
  return Rational(num, BigInt(1) << -exponent);
}

// Accepts "n", "-n", "n/d" (d > 0). No whitespace.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s, bool allow_sign) -> BigInt {
    std::size_t i = 0;
    bool negative = false;
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) {
      negative = s[0] == '-';
      i = 1;
    }
    if (i >= s.size()) throw std::invalid_argument("expected digits");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("expected digits");
      v = v * 10 + (s[i] - '0');
    }
    return negative ? BigInt(-v) : v;
  };
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(parse_int(text, true));
    const BigInt den = parse_int(text.substr(slash + 1), false);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(parse_int(text.substr(0, slash), true), den);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "': " + e.what());
  }
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline BigInt floor_of(const Rational& r) {
  BigInt q = numerator_of(r) / denominator_of(r);  // truncates toward zero
  if (r < 0 && Rational(q) != r) q -= 1;
  return q;
}

// Simplest fraction (smallest denominator, then smallest magnitude) strictly
// inside (lo, hi), found by walking the Stern-Brocot tree via continued fractions.
inline Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("simplest_between: empty interval");
  if (lo < 0 && hi > 0) return Rational(0);
  if (hi <= 0) return -simplest_between(-hi, -lo);
  // 0 <= lo < hi
  const BigInt fl = floor_of(lo);
  if (Rational(fl + 1) < hi) return Rational(fl + 1);
  // Both lie in [fl, fl + 1]; recurse on the reciprocal of the fractional parts.
  const Rational lo_frac = lo - Rational(fl);
  const Rational hi_frac = hi - Rational(fl);
  if (lo_frac == 0) {
    // (fl, fl + hi_frac): pick fl + 1/n for the smallest n with 1/n < hi_frac.
    BigInt n = floor_of(Rational(1) / hi_frac) + 1;
    return Rational(fl) + Rational(1, n);
  }
  // 1/hi_frac < 1/lo_frac, and hi_frac <= 1.
  return Rational(fl) + Rational(1) / simplest_between(Rational(1) / hi_frac, Rational(1) / lo_frac);
}

}  // namespace crnreal

#pragma once

#include "crnreal/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crnreal {

// Open rational interval (lo, hi) with lo < hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (!(lo < hi)) throw std::invalid_argument("interval requires lo < hi");
  }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo < x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::string to_string(const Interval& iv) {
  return "(" + to_string(iv.lo) + ", " + to_string(iv.hi) + ")";
}

// Univariate polynomial with arbitrary-precision integer coefficients c_0..c_n.
// Canonical: the leading coefficient is nonzero; the zero polynomial has no
// coefficients at all.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coefficients) : c_(std::move(coefficients)) { trim(); }
  IntPolynomial(std::initializer_list<long long> coefficients) {
    for (long long v : coefficients) c_.emplace_back(v);
    trim();
  }

  static IntPolynomial constant(BigInt v) { return IntPolynomial(std::vector<BigInt>{std::move(v)}); }
  static IntPolynomial monomial(BigInt v, std::size_t k) {
    std::vector<BigInt> c(k + 1);
    c[k] = std::move(v);
    return IntPolynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<BigInt>& coefficients() const { return c_; }
  BigInt coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }
  const BigInt& leading() const {
    if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
    return c_.back();
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  IntPolynomial operator-() const {
    IntPolynomial r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) + b.coefficient(i);
    return IntPolynomial(std::move(c));
  }
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(c));
  }
  friend IntPolynomial operator*(const BigInt& s, const IntPolynomial& p) {
    std::vector<BigInt> c = p.c_;
    for (auto& v : c) v *= s;
    return IntPolynomial(std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<BigInt> c_;
};

// Exact Horner evaluation.
inline Rational evaluate(const IntPolynomial& p, const Rational& x) {
  Rational acc = 0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

inline double evaluate(const IntPolynomial& p, double x) {
  double acc = 0.0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

inline int sign_at(const IntPolynomial& p, const Rational& x) { return sign_of(evaluate(p, x)); }

inline IntPolynomial derivative(const IntPolynomial& p) {
  if (p.degree() < 1) return {};
  std::vector<BigInt> c(p.coefficients().size() - 1);
  for (std::size_t k = 1; k < p.coefficients().size(); ++k) c[k - 1] = p.coefficients()[k] * k;
  return IntPolynomial(std::move(c));
}

// gcd of the coefficients, always >= 0.
inline BigInt content(const IntPolynomial& p) {
  BigInt g = 0;
  for (const auto& v : p.coefficients()) g = boost::multiprecision::gcd(g, v);
  return g < 0 ? BigInt(-g) : g;
}

// Divides out the content; the sign of the leading coefficient is kept.
inline IntPolynomial primitive_part(const IntPolynomial& p) {
  if (p.is_zero()) return p;
  const BigInt g = content(p);
  std::vector<BigInt> c = p.coefficients();
  for (auto& v : c) v /= g;
  return IntPolynomial(std::move(c));
}

// P(-x).
inline IntPolynomial reflect(const IntPolynomial& p) {
  std::vector<BigInt> c = p.coefficients();
  for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  return IntPolynomial(std::move(c));
}

// Pseudo-remainder scaled by a positive constant: returns r with
// |lc(b)|^m * a = q * b + r, deg r < deg b.  Positive scaling keeps signs intact.
inline IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("pseudo_remainder by zero polynomial");
  const BigInt lb = b.leading();
  const BigInt abs_lb = lb < 0 ? BigInt(-lb) : lb;
  const int sgn_lb = lb.sign();
  IntPolynomial r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const BigInt lr = r.leading();
    const auto shift = static_cast<std::size_t>(r.degree() - b.degree());
    r = abs_lb * r - IntPolynomial::monomial(sgn_lb * lr, shift) * b;
  }
  return r;
}

// Exact quotient a / b over the rationals; throws if b does not divide a in Z[x].
inline IntPolynomial exact_quotient(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {};
  if (a.degree() < b.degree()) throw std::domain_error("exact_quotient: divisor does not divide");
  std::vector<Rational> rem(a.coefficients().begin(), a.coefficients().end());
  const auto db = static_cast<std::size_t>(b.degree());
  const Rational lb(b.leading());
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    const Rational f = rem[k + db] / lb;
    q[k] = f;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= f * Rational(b.coefficients()[j]);
  }
  for (const auto& v : rem)
    if (v != 0) throw std::domain_error("exact_quotient: divisor does not divide");
  std::vector<BigInt> c;
  c.reserve(q.size());
  for (const auto& v : q) {
    if (!is_integer(v)) throw std::domain_error("exact_quotient: quotient not integral");
    c.push_back(numerator_of(v));
  }
  return IntPolynomial(std::move(c));
}

// Primitive gcd with positive leading coefficient.
inline IntPolynomial gcd(IntPolynomial a, IntPolynomial b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.degree() < b.degree()) std::swap(a, b);
  a = primitive_part(a);
  while (!b.is_zero()) {
    IntPolynomial r = primitive_part(pseudo_remainder(a, b));
    a = primitive_part(b);
    b = std::move(r);
  }
  return a.leading() < 0 ? -a : a;
}

inline bool is_squarefree(const IntPolynomial& p) {
  if (p.is_zero()) return false;
  return gcd(p, derivative(p)).degree() <= 0;
}

// p / gcd(p, p'), primitive, with the sign of p's leading coefficient.
inline IntPolynomial squarefree_part(const IntPolynomial& p) {
  if (p.is_zero()) throw std::domain_error("squarefree_part of zero polynomial");
  if (p.degree() == 0) return IntPolynomial::constant(p.leading() > 0 ? 1 : -1);
  const IntPolynomial g = gcd(p, derivative(p));
  IntPolynomial h = primitive_part(exact_quotient(primitive_part(p), g));
  if ((h.leading() > 0) != (p.leading() > 0)) h = -h;
  return h;
}

// Sturm chain p, p', -prem(p_{i-1}, p_i), ... with each entry made primitive by
// a positive factor.
inline std::vector<IntPolynomial> sturm_sequence(const IntPolynomial& p) {
  if (!is_squarefree(p)) throw std::domain_error("sturm_sequence requires a squarefree polynomial");
  std::vector<IntPolynomial> chain{p};
  IntPolynomial next = derivative(p);
  while (!next.is_zero()) {
    chain.push_back(next);
    const auto& a = chain[chain.size() - 2];
    const auto& b = chain.back();
    next = primitive_part(-pseudo_remainder(a, b));
  }
  return chain;
}

inline int sign_changes(const std::vector<IntPolynomial>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = sign_at(q, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace detail {
inline int count_with_chain(const std::vector<IntPolynomial>& chain, const Interval& iv) {
  if (sign_at(chain.front(), iv.lo) == 0 || sign_at(chain.front(), iv.hi) == 0)
    throw std::domain_error("count_roots: interval endpoint " +
                            to_string(sign_at(chain.front(), iv.lo) == 0 ? iv.lo : iv.hi) +
                            " is a root");
  return sign_changes(chain, iv.lo) - sign_changes(chain, iv.hi);
}
}  // namespace detail

// Distinct real roots in (lo, hi].
inline int count_roots(const IntPolynomial& p, const Interval& iv) {
  return detail::count_with_chain(sturm_sequence(p), iv);
}

// Every real root r satisfies |r| < bound.
inline Rational cauchy_bound(const IntPolynomial& p) {
  if (p.degree() < 1) return Rational(1);
  BigInt m = 0;
  for (std::size_t k = 0; k + 1 < p.coefficients().size(); ++k) {
    BigInt a = p.coefficients()[k];
    if (a < 0) a = -a;
    m = std::max(m, a);
  }
  BigInt lc = p.leading();
  if (lc < 0) lc = -lc;
  return Rational(1) + Rational(m, lc);
}

namespace detail {
// A point in (lo, hi) where p is nonzero, preferring the midpoint.
inline Rational nonroot_split(const IntPolynomial& p, const Rational& lo, const Rational& hi) {
  // Dyadic points lo + w*j/2^k, coarsest first; p has finitely many roots.
  const Rational w = hi - lo;
  for (unsigned k = 1; k <= 12; ++k) {
    const BigInt denom = BigInt(1) << k;
    for (BigInt j = 1; j < denom; j += 2) {
      const Rational m = lo + w * Rational(j, denom);
      if (sign_at(p, m) != 0) return m;
    }
  }
  throw std::logic_error("nonroot_split: no split point found");
}
}  // namespace detail

// Isolating intervals for all positive roots, increasing, each of width <= 1/2.
inline std::vector<Interval> isolate_positive_roots(const IntPolynomial& p) {
  if (p.is_zero()) throw std::domain_error("isolate_positive_roots of zero polynomial");
  if (sign_at(p, Rational(0)) == 0)
    throw std::domain_error("isolate_positive_roots: p(0) = 0, shift the polynomial first");
  const auto chain = sturm_sequence(p);
  std::vector<Interval> out;
  // Depth-first over (lo, hi], left half first, so output is ordered.
  std::vector<std::pair<Rational, Rational>> stack{{Rational(0), cauchy_bound(p)}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    const int n = detail::count_with_chain(chain, Interval(lo, hi));
    if (n == 0) continue;
    if (n == 1 && hi - lo <= Rational(1, 2)) {
      out.emplace_back(lo, hi);
      continue;
    }
    const Rational mid = detail::nonroot_split(p, lo, hi);
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }
  return out;
}

// Bisection with exact sign tests until the interval is at most `width` wide.
inline Interval refine_root(const IntPolynomial& p, const Interval& iv, const Rational& width) {
  if (width <= 0) throw std::invalid_argument("refine_root: width must be positive");
  if (count_roots(p, iv) != 1) throw std::domain_error("refine_root: interval does not isolate one root");
  Rational lo = iv.lo, hi = iv.hi;
  const int sign_lo = sign_at(p, lo);
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    const int s = sign_at(p, mid);
    if (s == 0) {
      const Rational delta = std::min(width / 2, (hi - lo) / 4);
      return Interval(mid - delta, mid + delta);
    }
    if (s == sign_lo)
      lo = mid;
    else
      hi = mid;
  }
  return Interval(lo, hi);
}

// q^n * P(x + num/q) for s = num/q in lowest terms, n = deg P.
inline IntPolynomial shift_and_scale(const IntPolynomial& p, const Rational& s) {
  if (p.is_zero()) return p;
  const BigInt num = numerator_of(s), q = denominator_of(s);
  const auto n = static_cast<std::size_t>(p.degree());
  const IntPolynomial linear(std::vector<BigInt>{num, q});  // q x + num
  IntPolynomial power = IntPolynomial::constant(1);
  IntPolynomial out;
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt scale = p.coefficients()[k];
    for (std::size_t j = k; j < n; ++j) scale *= q;
    out = out + scale * power;
    power = power * linear;
  }
  return out;
}

// Text form "c*x^k" terms, highest degree first, e.g. "x^2-2" or "-3*x^3+x-1".
inline std::string to_string(const IntPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t k = p.coefficients().size(); k-- > 0;) {
    const BigInt& c = p.coefficients()[k];
    if (c == 0) continue;
    BigInt a = c < 0 ? BigInt(-c) : c;
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? "-" : "+";
    if (k == 0) {
      s += a.str();
      continue;
    }
    if (a != 1) s += a.str() + "*";
    s += "x";
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s;
}

// Parses the "c*x^k" grammar: terms joined by + or -, integer c, variable x.
// "c*" and "^k" are optional ("x", "3x", "-x^2" are accepted).
inline IntPolynomial parse_polynomial(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  std::map<std::size_t, BigInt> terms;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("polynomial '" + std::string(text) + "' at offset " + std::to_string(i) +
                                ": " + what);
  };
  auto read_digits = [&]() -> std::optional<BigInt> {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    BigInt v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
    return v;
  };
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    auto coeff = read_digits();
    std::size_t power = 0;
    if (i < s.size() && s[i] == '*') {
      if (!coeff) fail("'*' without coefficient");
      ++i;
      if (i >= s.size() || s[i] != 'x') fail("expected 'x' after '*'");
    }
    if (i < s.size() && s[i] == 'x') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        auto e = read_digits();
        if (!e) fail("expected exponent");
        power = e->convert_to<std::size_t>();
      }
    } else if (!coeff) {
      fail("expected coefficient or 'x'");
    }
    terms[power] += sign * coeff.value_or(BigInt(1));
  }
  std::vector<BigInt> c(terms.empty() ? 0 : terms.rbegin()->first + 1);
  for (const auto& [k, v] : terms) c[k] = v;
  return IntPolynomial(std::move(c));
}

}  // namespace crnreal

#pragma once

#include "crnreal/crn.hpp"
#include "crnreal/limit.hpp"
#include "crnreal/polynomial.hpp"
#include "crnreal/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crnreal {

enum class Combinator { add, multiply, reciprocal, subtract_stage };

inline const char* to_string(Combinator c) {
  switch (c) {
    case Combinator::add: return "add";
    case Combinator::multiply: return "multiply";
    case Combinator::reciprocal: return "reciprocal";
    case Combinator::subtract_stage: return "subtract_stage";
  }
  return "?";
}

struct Composition;

// An integral CRN whose designated species converges to |alpha|, with the sign
// of alpha carried alongside.
struct SignedProgram {
  Crn crn;
  std::size_t designated = 0;
  int sign = 0;
  ClaimedLimit limit = ClaimedLimit::rational(0);
  unsigned long speedup = 1;
  // Set when the program was produced by a combinator. Operand species occupy
  // the leading index blocks in operand order; the fresh species is last.
  std::shared_ptr<const Composition> composition;

  const std::string& designated_name() const { return crn.species().at(designated); }
  double magnitude() const { return limit.value(); }
  double value() const { return sign * limit.value(); }
};

struct Composition {
  Combinator kind;
  std::vector<SignedProgram> operands;
};

namespace detail {

inline std::string base_name(const std::string& name) {
  const auto us = name.rfind('_');
  if (us == std::string::npos || us + 1 == name.size()) return name;
  for (std::size_t i = us + 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
  return name.substr(0, us);
}

// Deterministic renaming: species i becomes <base>_<offset + i + 1>.
inline Crn numbered(const Crn& crn, std::size_t offset) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < crn.size(); ++i)
    names.push_back(base_name(crn.species()[i]) + "_" + std::to_string(offset + i + 1));
  return rename_species(crn, std::move(names));
}

inline void require_integral(const SignedProgram& p) {
  if (!validate_integral(p.crn).integral()) throw std::logic_error("compiled program is not integral");
}

// Operands side by side (left numbered first) plus one fresh species.
inline Crn compose(const std::vector<const SignedProgram*>& operands, const std::string& fresh,
                   const std::vector<Reaction>& extra) {
  Crn merged;
  std::size_t offset = 0;
  for (const auto* op : operands) {
    merged = disjoint_union(merged, numbered(op->crn, offset), {});
    offset += op->crn.size();
  }
  std::vector<std::string> species = merged.species();
  species.push_back(fresh + "_" + std::to_string(offset + 1));
  std::vector<Reaction> reactions = merged.reactions();
  reactions.insert(reactions.end(), extra.begin(), extra.end());
  return Crn(std::move(species), std::move(reactions));
}

inline void require_nonnegative(const SignedProgram& p, const char* op) {
  if (p.sign < 0) throw std::invalid_argument(std::string(op) + " expects nonnegative operands");
}

}  // namespace detail

// {0 ->{a} X, X ->{b} 0}; x(t) = (a/b)(1 - e^{-bt}). a = 0 gives ({X}, {}).
inline SignedProgram compile_rational(const BigInt& a, const BigInt& b) {
  if (b <= 0) throw std::invalid_argument("compile_rational: denominator must be positive");
  if (a < 0) throw std::invalid_argument("compile_rational: numerator must be nonnegative");
  SignedProgram p;
  if (a == 0) {
    p.crn = Crn({"X"}, {});
    p.sign = 0;
    p.limit = ClaimedLimit::rational(0);
    return p;
  }
  p.crn = Crn({"X"}, {Reaction({}, {{0, 1}}, Rational(a)), Reaction({{0, 1}}, {}, Rational(b))});
  p.sign = 1;
  p.limit = ClaimedLimit::rational(Rational(a, b));
  return p;
}

inline SignedProgram zero_program() { return compile_rational(0, 1); }

// One species X with dx/dt = p(x) (after making p(0) > 0); converges from 0 to
// the smallest positive root.
inline SignedProgram compile_poly_root(IntPolynomial p) {
  if (p.is_zero()) throw std::invalid_argument("compile_poly_root: zero polynomial");
  const int s0 = sign_of(p.coefficient(0));
  if (s0 == 0) throw std::invalid_argument("compile_poly_root: p(0) = 0");
  if (!is_squarefree(p)) throw std::invalid_argument("compile_poly_root: polynomial is not squarefree");
  if (s0 < 0) p = -p;
  const auto roots = isolate_positive_roots(p);
  if (roots.empty()) throw std::invalid_argument("compile_poly_root: " + to_string(p) + " has no positive root");
  std::vector<Reaction> reactions;
  for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
    const BigInt& c = p.coefficients()[k];
    const auto kk = static_cast<unsigned>(k);
    if (c > 0)
      reactions.emplace_back(std::vector<Stoich>{{0, kk}}, std::vector<Stoich>{{0, kk + 1}}, Rational(c));
    else if (c < 0)
      reactions.emplace_back(std::vector<Stoich>{{0, kk}}, std::vector<Stoich>{{0, kk - 1}}, Rational(-c));
  }
  SignedProgram out;
  out.crn = Crn({"X"}, std::move(reactions));
  out.sign = 1;
  out.limit = ClaimedLimit::poly_root(p, roots.front());
  return out;
}

inline SignedProgram negate(SignedProgram p) {
  p.sign = -p.sign;
  return p;
}

inline SignedProgram magnitude_of(SignedProgram p) {
  if (p.sign < 0) p.sign = 1;
  return p;
}

// Fresh U with X -> X + U, Y -> Y + U, U -> 0: du/dt = x + y - u.
inline SignedProgram add(const SignedProgram& a, const SignedProgram& b) {
  detail::require_nonnegative(a, "add");
  detail::require_nonnegative(b, "add");
  const std::size_t x = a.designated, y = a.crn.size() + b.designated, u = a.crn.size() + b.crn.size();
  SignedProgram out;
  out.crn = detail::compose({&a, &b}, "U",
                            {Reaction({{x, 1}}, {{x, 1}, {u, 1}}, 1), Reaction({{y, 1}}, {{y, 1}, {u, 1}}, 1),
                             Reaction({{u, 1}}, {}, 1)});
  out.designated = u;
  out.limit = ClaimedLimit::sum(a.limit, b.limit);
  out.sign = out.limit.is_zero() ? 0 : 1;
  out.composition = std::make_shared<Composition>(Composition{Combinator::add, {a, b}});
  return out;
}

// Fresh U with X + Y -> X + Y + U, U -> 0: du/dt = xy - u.
inline SignedProgram multiply(const SignedProgram& a, const SignedProgram& b) {
  detail::require_nonnegative(a, "multiply");
  detail::require_nonnegative(b, "multiply");
  const std::size_t x = a.designated, y = a.crn.size() + b.designated, u = a.crn.size() + b.crn.size();
  SignedProgram out;
  out.crn = detail::compose({&a, &b}, "U",
                            {Reaction({{x, 1}, {y, 1}}, {{x, 1}, {y, 1}, {u, 1}}, 1), Reaction({{u, 1}}, {}, 1)});
  out.designated = u;
  out.sign = a.sign * b.sign;
  out.limit = out.sign == 0 ? ClaimedLimit::rational(0) : ClaimedLimit::product(a.limit, b.limit);
  out.composition = std::make_shared<Composition>(Composition{Combinator::multiply, {a, b}});
  return out;
}

// Fresh Y with 0 -> Y, X + Y -> X: dy/dt = 1 - xy. Sign preserved.
inline SignedProgram reciprocal(const SignedProgram& a) {
  if (a.sign == 0 || a.limit.is_zero()) throw std::domain_error("reciprocal of a program with limit 0");
  const std::size_t x = a.designated, y = a.crn.size();
  SignedProgram out;
  out.crn = detail::compose({&a}, "Y", {Reaction({}, {{y, 1}}, 1), Reaction({{x, 1}, {y, 1}}, {{x, 1}}, 1)});
  out.designated = y;
  out.sign = a.sign;
  out.limit = ClaimedLimit::reciprocal(a.limit);
  out.composition = std::make_shared<Composition>(Composition{Combinator::reciprocal, {a}});
  return out;
}

// Fresh Y with 0 -> Y, X1 + Y -> X1, X2 + Y -> X2 + 2Y: dy/dt = 1 - (x1 - x2) y,
// converging to 1/(alpha - beta). Requires alpha > beta; not checked here.
inline SignedProgram subtract_stage_unchecked(const SignedProgram& a, const SignedProgram& b) {
  const std::size_t x1 = a.designated, x2 = a.crn.size() + b.designated, y = a.crn.size() + b.crn.size();
  SignedProgram out;
  out.crn = detail::compose({&a, &b}, "Y",
                            {Reaction({}, {{y, 1}}, 1), Reaction({{x1, 1}, {y, 1}}, {{x1, 1}}, 1),
                             Reaction({{x2, 1}, {y, 1}}, {{x2, 1}, {y, 2}}, 1)});
  out.designated = y;
  out.sign = 1;
  out.limit = ClaimedLimit::reciprocal(ClaimedLimit::difference(a.limit, b.limit));
  out.composition = std::make_shared<Composition>(Composition{Combinator::subtract_stage, {a, b}});
  return out;
}

// alpha - beta for alpha >= beta >= 0: the subtraction stage computes
// 1/(alpha - beta) and a reciprocal stage inverts it.
inline SignedProgram subtract(const SignedProgram& a, const SignedProgram& b) {
  detail::require_nonnegative(a, "subtract");
  detail::require_nonnegative(b, "subtract");
  const int order = compare(a.limit, b.limit);
  if (order < 0)
    throw std::domain_error("subtract requires alpha >= beta, got " + a.limit.describe() + " < " + b.limit.describe());
  if (order == 0) return zero_program();
  if (b.sign == 0 || b.limit.is_zero()) return a;
  SignedProgram out = reciprocal(subtract_stage_unchecked(a, b));
  out.limit = ClaimedLimit::difference(a.limit, b.limit);
  return out;
}

// Sum of signed values: same signs add magnitudes, opposite signs subtract the
// smaller magnitude from the larger and take the larger's sign.
inline SignedProgram signed_add(const SignedProgram& a, const SignedProgram& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.sign == b.sign) {
    SignedProgram out = add(magnitude_of(a), magnitude_of(b));
    out.sign = a.sign;
    return out;
  }
  const int order = compare(a.limit, b.limit);
  if (order == 0) return zero_program();
  const SignedProgram& larger = order > 0 ? a : b;
  const SignedProgram& smaller = order > 0 ? b : a;
  SignedProgram out = subtract(magnitude_of(larger), magnitude_of(smaller));
  out.sign = larger.sign;
  return out;
}

inline SignedProgram signed_multiply(const SignedProgram& a, const SignedProgram& b) {
  SignedProgram out = multiply(magnitude_of(a), magnitude_of(b));
  out.sign = a.sign * b.sign;
  return out;
}

// Compiles the real root of p isolated by `target`.
inline SignedProgram compile_algebraic(const IntPolynomial& p, const Interval& target) {
  if (p.is_zero()) throw std::invalid_argument("compile_algebraic: zero polynomial");
  if (target.lo < 0 && target.hi > 0) throw std::invalid_argument("compile_algebraic: target interval contains 0");
  IntPolynomial sf = squarefree_part(p);
  if (count_roots(sf, target) != 1)
    throw std::invalid_argument("compile_algebraic: target " + to_string(target) + " does not isolate exactly one root");
  if (target.hi <= 0) return negate(compile_algebraic(reflect(sf), Interval(-target.hi, -target.lo)));

  // Drop a root at 0; it does not change the positive roots.
  while (sf.coefficient(0) == 0) sf = exact_quotient(sf, IntPolynomial{0, 1});
  const auto roots = isolate_positive_roots(sf);
  const auto k = static_cast<std::size_t>(count_roots(sf, Interval(0, target.hi)));
  if (k == 1) return compile_poly_root(sf);

  Interval beta = roots.at(k - 2), alpha = roots.at(k - 1);
  while (!(beta.hi < alpha.lo)) {
    beta = refine_root(sf, beta, beta.width() / 2);
    alpha = refine_root(sf, alpha, alpha.width() / 2);
  }
  const Rational shift = simplest_between(beta.hi, alpha.lo);
  const IntPolynomial shifted = shift_and_scale(sf, shift);
  SignedProgram out = add(compile_rational(numerator_of(shift), denominator_of(shift)), compile_poly_root(shifted));
  out.limit = ClaimedLimit::poly_root(sf, alpha);
  return out;
}

// Every rate constant multiplied by `factor`: y_fast(t) = y(factor * t).
inline SignedProgram speed_up(const SignedProgram& a, unsigned long factor) {
  if (factor < 1) throw std::invalid_argument("speed_up: factor must be at least 1");
  if (factor == 1) return a;
  std::vector<Reaction> reactions;
  for (const auto& r : a.crn.reactions()) reactions.push_back(r.with_rate(r.rate_constant() * factor));
  SignedProgram out = a;
  out.crn = Crn(a.crn.species(), std::move(reactions));
  out.speedup = a.speedup * factor;
  return out;
}

// max(ceil(tau / tau_hat), ceil(gamma_hat / gamma)).
inline unsigned long choose_speedup_factor(double tau, double gamma, double tau_hat, double gamma_hat) {
  if (!(tau > 0) || !(gamma > 0) || !(tau_hat > 0) || !(gamma_hat > 0))
    throw std::invalid_argument("choose_speedup_factor: all arguments must be positive");
  const double a = std::max(std::ceil(tau / tau_hat), std::ceil(gamma_hat / gamma));
  if (!std::isfinite(a) || a > 1e9) throw std::domain_error("choose_speedup_factor: factor out of range");
  return std::max(1UL, static_cast<unsigned long>(a));
}

// Three species X, U, V; U converges to (e - 1 + sqrt((e - 1)^2 + 4)) / 2.
inline SignedProgram transcendental_construction() {
  constexpr std::size_t X = 0, U = 1, V = 2;
  std::vector<Reaction> r;
  r.emplace_back(std::vector<Stoich>{}, std::vector<Stoich>{{X, 1}}, 1);
  r.emplace_back(std::vector<Stoich>{{X, 1}}, std::vector<Stoich>{}, 1);
  r.emplace_back(std::vector<Stoich>{{U, 1}}, std::vector<Stoich>{{U, 2}}, 1);
  r.emplace_back(std::vector<Stoich>{}, std::vector<Stoich>{{U, 1}}, 1);
  r.emplace_back(std::vector<Stoich>{{X, 1}, {U, 1}}, std::vector<Stoich>{{X, 1}}, 1);
  r.emplace_back(std::vector<Stoich>{{V, 1}}, std::vector<Stoich>{{V, 2}}, 1);
  r.emplace_back(std::vector<Stoich>{{X, 1}}, std::vector<Stoich>{{X, 1}, {V, 1}}, 1);
  r.emplace_back(std::vector<Stoich>{{X, 1}, {V, 1}}, std::vector<Stoich>{{X, 1}}, 1);
  r.emplace_back(std::vector<Stoich>{{U, 1}, {V, 1}}, std::vector<Stoich>{}, 1);
  SignedProgram p;
  p.crn = Crn({"X", "U", "V"}, std::move(r));
  p.designated = U;
  p.sign = 1;
  p.limit = ClaimedLimit::transcendental();
  return p;
}

// Arithmetic over compilable reals.
struct ExpressionTree {
  enum class Kind { rational, poly_root, add, sub, mul, reciprocal, negate };

  Kind kind = Kind::rational;
  Rational value;
  IntPolynomial poly;
  std::optional<Interval> interval;
  std::vector<ExpressionTree> children;

  static ExpressionTree number(Rational v) {
    ExpressionTree t;
    t.value = std::move(v);
    return t;
  }
  static ExpressionTree root(IntPolynomial p, Interval iv) {
    ExpressionTree t;
    t.kind = Kind::poly_root;
    t.poly = std::move(p);
    t.interval = std::move(iv);
    return t;
  }
  static ExpressionTree unary(Kind k, ExpressionTree a) {
    ExpressionTree t;
    t.kind = k;
    t.children.push_back(std::move(a));
    return t;
  }
  static ExpressionTree binary(Kind k, ExpressionTree a, ExpressionTree b) {
    ExpressionTree t;
    t.kind = k;
    t.children.push_back(std::move(a));
    t.children.push_back(std::move(b));
    return t;
  }
};

inline SignedProgram compile_expression(const ExpressionTree& e) {
  using K = ExpressionTree::Kind;
  switch (e.kind) {
    case K::rational: {
      const BigInt n = numerator_of(e.value);
      SignedProgram p = compile_rational(n < 0 ? BigInt(-n) : n, denominator_of(e.value));
      if (n < 0) p.sign = -1;
      return p;
    }
    case K::poly_root: return compile_algebraic(e.poly, *e.interval);
    case K::add: return signed_add(compile_expression(e.children.at(0)), compile_expression(e.children.at(1)));
    case K::sub:
      return signed_add(compile_expression(e.children.at(0)), negate(compile_expression(e.children.at(1))));
    case K::mul: return signed_multiply(compile_expression(e.children.at(0)), compile_expression(e.children.at(1)));
    case K::reciprocal: {
      SignedProgram a = compile_expression(e.children.at(0));
      const int sign = a.sign;
      SignedProgram out = reciprocal(magnitude_of(std::move(a)));
      out.sign = sign;
      return out;
    }
    case K::negate: return negate(compile_expression(e.children.at(0)));
  }
  throw std::logic_error("compile_expression: unknown node");
}

namespace detail {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : s_(text) {}

  ExpressionTree parse() {
    ExpressionTree t = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + std::string(s_) + "' at offset " + std::to_string(i_) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void need(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  ExpressionTree expr() {
    ExpressionTree t = term();
    while (true) {
      if (eat('+'))
        t = ExpressionTree::binary(ExpressionTree::Kind::add, std::move(t), term());
      else if (eat('-'))
        t = ExpressionTree::binary(ExpressionTree::Kind::sub, std::move(t), term());
      else
        return t;
    }
  }

  ExpressionTree term() {
    ExpressionTree t = factor();
    while (true) {
      if (eat('*')) {
        t = ExpressionTree::binary(ExpressionTree::Kind::mul, std::move(t), factor());
      } else if (eat('/')) {
        t = ExpressionTree::binary(ExpressionTree::Kind::mul, std::move(t),
                                   ExpressionTree::unary(ExpressionTree::Kind::reciprocal, factor()));
      } else {
        return t;
      }
    }
  }

  BigInt integer() {
    skip();
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) fail("expected integer");
    BigInt v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) v = v * 10 + (s_[i_++] - '0');
    return v;
  }

  Rational signed_rational() {
    const bool negative = eat('-');
    BigInt n = integer();
    BigInt d = 1;
    if (eat('/')) d = integer();
    if (d == 0) fail("zero denominator");
    Rational r(n, d);
    return negative ? Rational(-r) : r;
  }

  std::string word() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
    std::string w(s_.substr(i_, j - i_));
    i_ = j;
    return w;
  }

  ExpressionTree factor() {
    skip();
    if (eat('-')) return ExpressionTree::unary(ExpressionTree::Kind::negate, factor());
    if (eat('(')) {
      ExpressionTree t = expr();
      need(')');
      return t;
    }
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      // "n/d" with literal integers is a single rational leaf.
      BigInt n = integer();
      const std::size_t save = i_;
      skip();
      if (i_ < s_.size() && s_[i_] == '/') {
        ++i_;
        skip();
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
          const BigInt d = integer();
          if (d == 0) fail("zero denominator");
          return ExpressionTree::number(Rational(n, d));
        }
      }
      i_ = save;
      return ExpressionTree::number(Rational(n));
    }
    const std::string w = word();
    if (w == "sqrt") {
      need('(');
      const Rational r = signed_rational();
      need(')');
      if (r < 0) fail("sqrt of a negative number");
      if (r == 0) return ExpressionTree::number(0);
      // sqrt(n/d) is the positive root of d x^2 - n.
      IntPolynomial p(std::vector<BigInt>{-numerator_of(r), 0, denominator_of(r)});
      return ExpressionTree::root(p, Interval(0, std::max(Rational(1), r) + 1));
    }
    if (w == "root") {
      need('(');
      const std::size_t start = i_;
      while (i_ < s_.size() && s_[i_] != ',') ++i_;
      const IntPolynomial p = parse_polynomial(s_.substr(start, i_ - start));
      need(',');
      const Rational lo = signed_rational();
      need(',');
      const Rational hi = signed_rational();
      need(')');
      if (!(lo < hi)) fail("root interval requires lo < hi");
      return ExpressionTree::root(p, Interval(lo, hi));
    }
    fail(w.empty() ? "expected number, '(', sqrt(...) or root(...)" : "unknown function '" + w + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

// Grammar: expr := term (("+" | "-") term)*; term := factor (("*" | "/") factor)*;
// factor := "-" factor | n | n/d | "(" expr ")" | "sqrt(" rational ")" |
//           "root(" polynomial "," lo "," hi ")".
inline ExpressionTree parse_expression(std::string_view text) { return detail::ExpressionParser(text).parse(); }

}  // namespace crnreal

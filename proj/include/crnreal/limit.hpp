#pragma once

#include "crnreal/polynomial.hpp"
#include "crnreal/rational.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace crnreal {

// Closed rational interval [lo, hi], lo <= hi.
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// Description of the nonnegative real a program's designated species converges
// to. Immutable; children are shared.
class ClaimedLimit {
 public:
  enum class Kind { rational, poly_root, sum, difference, product, reciprocal, transcendental };

  static ClaimedLimit rational(const Rational& v) {
    if (v < 0) throw std::invalid_argument("claimed limit must be nonnegative");
    auto n = std::make_shared<Node>(Kind::rational);
    n->value = v;
    return ClaimedLimit(std::move(n));
  }

  // The unique root of `p` inside `iv`; the interval must be positive.
  static ClaimedLimit poly_root(const IntPolynomial& p, const Interval& iv) {
    if (iv.lo < 0) throw std::invalid_argument("poly_root limit needs a nonnegative interval");
    if (count_roots(p, iv) != 1) throw std::invalid_argument("poly_root limit interval must isolate one root");
    auto n = std::make_shared<Node>(Kind::poly_root);
    n->poly = p;
    n->interval = iv;
    return ClaimedLimit(std::move(n));
  }

  static ClaimedLimit sum(const ClaimedLimit& a, const ClaimedLimit& b) { return binary(Kind::sum, a, b); }
  static ClaimedLimit difference(const ClaimedLimit& a, const ClaimedLimit& b) {
    return binary(Kind::difference, a, b);
  }
  static ClaimedLimit product(const ClaimedLimit& a, const ClaimedLimit& b) { return binary(Kind::product, a, b); }
  static ClaimedLimit reciprocal(const ClaimedLimit& a) {
    auto n = std::make_shared<Node>(Kind::reciprocal);
    n->left = a.node_;
    return ClaimedLimit(std::move(n));
  }

  // L = (e - 1 + sqrt((e - 1)^2 + 4)) / 2.
  static ClaimedLimit transcendental() { return ClaimedLimit(std::make_shared<Node>(Kind::transcendental)); }

  Kind kind() const { return node_->kind; }
  const Rational& rational_value() const { return node_->value; }
  const IntPolynomial& polynomial() const { return node_->poly; }
  const Interval& interval() const { return *node_->interval; }
  ClaimedLimit left() const { return ClaimedLimit(node_->left); }
  ClaimedLimit right() const { return ClaimedLimit(node_->right); }

  // Exact value when the whole tree is rational arithmetic.
  std::optional<Rational> exact_value() const { return exact(*node_); }

  bool is_zero() const {
    auto v = exact_value();
    return v && *v == 0;
  }

  // Rational interval of width <= `width` containing the value.
  Enclosure enclose(const Rational& width) const {
    if (width <= 0) throw std::invalid_argument("enclose: width must be positive");
    Rational eps = width;
    for (int attempt = 0; attempt < 64; ++attempt) {
      Enclosure e = enclose_node(*node_, eps);
      if (e.width() <= width) return e;
      eps /= 4;
    }
    throw std::logic_error("enclose: failed to reach requested width");
  }

  double value() const { return to_double(enclose(Rational(1, BigInt(1) << 64)).midpoint()); }

  std::string describe() const { return describe_node(*node_); }

  friend bool operator==(const ClaimedLimit& a, const ClaimedLimit& b) { return same(a.node_.get(), b.node_.get()); }

 private:
  struct Node {
    explicit Node(Kind k) : kind(k) {}
    Kind kind;
    Rational value;
    IntPolynomial poly;
    std::optional<Interval> interval;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit ClaimedLimit(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static ClaimedLimit binary(Kind k, const ClaimedLimit& a, const ClaimedLimit& b) {
    auto n = std::make_shared<Node>(k);
    n->left = a.node_;
    n->right = b.node_;
    return ClaimedLimit(std::move(n));
  }

  static bool same(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::rational: return a->value == b->value;
      case Kind::poly_root:
        // Same polynomial and the overlap of the isolating intervals holds a root.
        if (a->poly != b->poly) return false;
        {
          const Rational lo = std::max(a->interval->lo, b->interval->lo);
          const Rational hi = std::min(a->interval->hi, b->interval->hi);
          return lo < hi && count_roots(a->poly, Interval(lo, hi)) == 1;
        }
      case Kind::transcendental: return true;
      case Kind::reciprocal: return same(a->left.get(), b->left.get());
      default: return same(a->left.get(), b->left.get()) && same(a->right.get(), b->right.get());
    }
  }

  static std::optional<Rational> exact(const Node& n) {
    switch (n.kind) {
      case Kind::rational: return n.value;
      case Kind::poly_root:
      case Kind::transcendental: return std::nullopt;
      case Kind::reciprocal: {
        auto a = exact(*n.left);
        if (!a || *a == 0) return std::nullopt;
        return Rational(1) / *a;
      }
      default: {
        auto a = exact(*n.left);
        auto b = exact(*n.right);
        if (n.kind == Kind::product && ((a && *a == 0) || (b && *b == 0))) return Rational(0);
        if (!a || !b) return std::nullopt;
        if (n.kind == Kind::sum) return *a + *b;
        if (n.kind == Kind::difference) return *a - *b;
        return *a * *b;
      }
    }
  }

  static Rational upper_magnitude(const Node& n) {
    const Enclosure e = enclose_node(n, Rational(1));
    return std::max(abs(e.lo), abs(e.hi)) + 1;
  }

  // sqrt bounds of a nonnegative rational by bisection; returns [lo, hi] of
  // width <= eps with lo^2 <= s <= hi^2.
  static Enclosure sqrt_enclosure(const Rational& s, const Rational& eps) {
    Rational lo = 0, hi = std::max(Rational(1), s);
    while (hi - lo > eps) {
      const Rational mid = (lo + hi) / 2;
      if (mid * mid <= s)
        lo = mid;
      else
        hi = mid;
    }
    return {lo, hi};
  }

  static Enclosure euler_enclosure(const Rational& eps) {
    // sum_{k<=n} 1/k! <= e <= sum + 2/(n+1)!
    Rational partial = 1, term = 1;
    for (unsigned k = 1;; ++k) {
      term /= k;
      partial += term;
      const Rational tail = term * 2 / (k + 1);
      if (tail <= eps) return {partial, partial + tail};
    }
  }

  static Enclosure enclose_node(const Node& n, const Rational& eps) {
    switch (n.kind) {
      case Kind::rational: return {n.value, n.value};
      case Kind::poly_root: {
        const Interval iv = n.interval->width() <= eps ? *n.interval : refine_root(n.poly, *n.interval, eps);
        return {iv.lo, iv.hi};
      }
      case Kind::sum: {
        const Enclosure a = enclose_node(*n.left, eps / 2), b = enclose_node(*n.right, eps / 2);
        return {a.lo + b.lo, a.hi + b.hi};
      }
      case Kind::difference: {
        const Enclosure a = enclose_node(*n.left, eps / 2), b = enclose_node(*n.right, eps / 2);
        return {a.lo - b.hi, a.hi - b.lo};
      }
      case Kind::product: {
        const Rational child = std::min(Rational(1), eps / (upper_magnitude(*n.left) + upper_magnitude(*n.right) + 1));
        const Enclosure a = enclose_node(*n.left, child), b = enclose_node(*n.right, child);
        const Rational c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return {*std::min_element(std::begin(c), std::end(c)), *std::max_element(std::begin(c), std::end(c))};
      }
      case Kind::reciprocal: {
        if (auto v = exact(*n.left)) {
          if (*v == 0) throw std::domain_error("reciprocal of a zero limit");
          return {Rational(1) / *v, Rational(1) / *v};
        }
        // Find a positive lower bound m, then refine to width m/2 so lo >= m/2.
        Rational w = 1;
        Enclosure a = enclose_node(*n.left, w);
        for (int i = 0; a.lo <= 0; ++i) {
          if (i > 200) throw std::domain_error("reciprocal: cannot separate limit from zero");
          w /= 2;
          a = enclose_node(*n.left, w);
        }
        const Rational half = a.lo / 2;
        const Rational child = std::min(half, eps * half * half);
        const Enclosure b = enclose_node(*n.left, child);
        return {Rational(1) / b.hi, Rational(1) / b.lo};
      }
      case Kind::transcendental: {
        const Enclosure e = euler_enclosure(eps / 8);
        const Enclosure s_lo = sqrt_enclosure((e.lo - 1) * (e.lo - 1) + 4, eps / 8);
        const Enclosure s_hi = sqrt_enclosure((e.hi - 1) * (e.hi - 1) + 4, eps / 8);
        return {(e.lo - 1 + s_lo.lo) / 2, (e.hi - 1 + s_hi.hi) / 2};
      }
    }
    throw std::logic_error("enclose_node: unknown kind");
  }

  static std::string describe_node(const Node& n) {
    switch (n.kind) {
      case Kind::rational: return to_string(n.value);
      case Kind::poly_root: return "root(" + to_string(n.poly) + " in " + to_string(*n.interval) + ")";
      case Kind::sum: return "(" + describe_node(*n.left) + " + " + describe_node(*n.right) + ")";
      case Kind::difference: return "(" + describe_node(*n.left) + " - " + describe_node(*n.right) + ")";
      case Kind::product: return "(" + describe_node(*n.left) + " * " + describe_node(*n.right) + ")";
      case Kind::reciprocal: return "1/" + describe_node(*n.left);
      case Kind::transcendental: return "(e-1+sqrt((e-1)^2+4))/2";
    }
    return "?";
  }

  std::shared_ptr<const Node> node_;
};

// Exact ordering of two limits: structural or rational equality gives 0,
// otherwise enclosures are refined until they separate.
inline int compare(const ClaimedLimit& a, const ClaimedLimit& b) {
  if (a == b) return 0;
  const auto ea = a.exact_value(), eb = b.exact_value();
  if (ea && eb) return *ea < *eb ? -1 : (*ea > *eb ? 1 : 0);
  Rational w(1);
  for (int i = 0; i < 200; ++i) {
    const Enclosure x = a.enclose(w), y = b.enclose(w);
    if (x.hi < y.lo) return -1;
    if (y.hi < x.lo) return 1;
    w /= 2;
  }
  throw std::domain_error("cannot order limits " + a.describe() + " and " + b.describe() +
                          " at 2^-200 precision; they may be equal");
}

}  // namespace crnreal

#pragma once

#include "crnreal/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnreal {

// Sparse polynomial with rational coefficients in a fixed number of variables.
// Monomials are exponent vectors; zero coefficients are never stored.
class MultiPolynomial {
 public:
  using Exponents = std::vector<unsigned>;

  explicit MultiPolynomial(std::size_t variables = 0) : n_(variables) {}

  static MultiPolynomial constant(std::size_t variables, const Rational& c) {
    MultiPolynomial p(variables);
    p.add_term(Exponents(variables, 0), c);
    return p;
  }

  static MultiPolynomial variable(std::size_t variables, std::size_t index) {
    MultiPolynomial p(variables);
    Exponents e(variables, 0);
    e.at(index) = 1;
    p.add_term(e, Rational(1));
    return p;
  }

  std::size_t variables() const { return n_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (e.size() != n_) throw std::invalid_argument("monomial arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend bool operator==(const MultiPolynomial&, const MultiPolynomial&) = default;

  friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) {
    check_arity(a, b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }

  friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial& b) {
    check_arity(a, b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
    return a;
  }

  friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
    check_arity(a, b);
    MultiPolynomial out(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  friend MultiPolynomial operator*(const Rational& s, const MultiPolynomial& p) {
    MultiPolynomial out(p.n_);
    for (const auto& [e, c] : p.terms_) out.add_term(e, s * c);
    return out;
  }

  MultiPolynomial partial(std::size_t index) const {
    if (index >= n_) throw std::out_of_range("partial: variable index out of range");
    MultiPolynomial out(n_);
    for (const auto& [e, c] : terms_) {
      if (e[index] == 0) continue;
      Exponents d = e;
      d[index] -= 1;
      out.add_term(d, c * e[index]);
    }
    return out;
  }

  // Embeds into a larger variable set; variable i maps to mapping[i].
  MultiPolynomial embed(std::size_t variables, std::span<const std::size_t> mapping) const {
    if (mapping.size() != n_) throw std::invalid_argument("embed: mapping arity mismatch");
    MultiPolynomial out(variables);
    for (const auto& [e, c] : terms_) {
      Exponents d(variables, 0);
      for (std::size_t i = 0; i < n_; ++i) d.at(mapping[i]) += e[i];
      out.add_term(d, c);
    }
    return out;
  }

  double evaluate(std::span<const double> x) const {
    if (x.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = to_double(c);
      for (std::size_t i = 0; i < n_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }

  Rational evaluate(std::span<const Rational> x) const {
    if (x.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      for (std::size_t i = 0; i < n_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }

  // Human-readable form using the given variable names, e.g. "u + 1 - x*u - u*v".
  std::string to_string(std::span<const std::string> names) const {
    if (names.size() != n_) throw std::invalid_argument("to_string: name count mismatch");
    if (terms_.empty()) return "0";
    std::string s;
    // Lowest total degree first, then by the map order.
    std::vector<std::pair<const Exponents*, const Rational*>> ordered;
    for (const auto& [e, c] : terms_) ordered.emplace_back(&e, &c);
    auto total = [](const Exponents& e) {
      unsigned t = 0;
      for (unsigned v : e) t += v;
      return t;
    };
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](const auto& a, const auto& b) { return total(*a.first) < total(*b.first); });
    for (const auto& [e, c] : ordered) {
      const bool negative = *c < 0;
      const Rational mag = negative ? Rational(-*c) : *c;
      if (s.empty())
        s += negative ? "-" : "";
      else
        s += negative ? " - " : " + ";
      std::string mono;
      for (std::size_t i = 0; i < n_; ++i)
        for (unsigned k = 0; k < (*e)[i]; ++k) mono += (mono.empty() ? "" : "*") + names[i];
      if (mono.empty())
        s += crnreal::to_string(mag);
      else if (mag == 1)
        s += mono;
      else
        s += crnreal::to_string(mag) + "*" + mono;
    }
    return s;
  }

 private:
  static void check_arity(const MultiPolynomial& a, const MultiPolynomial& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t n_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace crnreal

#pragma once

// Independent reference computations for tests. Deliberately naive: nothing
// here calls the Sturm machinery or the integrator.

#include "crnreal/crn.hpp"
#include "crnreal/parser.hpp"
#include "crnreal/rational.hpp"

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using crnreal::BigInt;
using crnreal::Rational;

// sum c_k x^k with explicit powers (no Horner).
inline Rational eval_naive(const std::vector<long long>& c, const Rational& x) {
  Rational sum = 0, power = 1;
  for (long long ck : c) {
    sum += Rational(ck) * power;
    power *= x;
  }
  return sum;
}

inline int sign(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Bisection on a sign change in [lo, hi] down to width <= eps; midpoint.
inline double bisect_root(const std::vector<long long>& c, Rational lo, Rational hi, const Rational& eps) {
  const int slo = sign(eval_naive(c, lo));
  if (slo == 0) return crnreal::to_double(lo);
  while (hi - lo > eps) {
    const Rational mid = (lo + hi) / 2;
    const int s = sign(eval_naive(c, mid));
    if (s == 0) return crnreal::to_double(mid);
    if (s == slo)
      lo = mid;
    else
      hi = mid;
  }
  return crnreal::to_double((lo + hi) / 2);
}

// Distinct roots in (-range, range) via exact signs at a grid of step 1/steps:
// a zero at a grid point counts once, a strict sign flip between neighbours
// counts once. Exact for squarefree p whose roots are >= one step apart.
inline int grid_root_count(const std::vector<long long>& c, long range, long steps) {
  int count = 0;
  int prev = sign(eval_naive(c, Rational(-range)));
  bool after_zero = prev == 0;
  for (long i = -range * steps + 1; i <= range * steps; ++i) {
    const int s = sign(eval_naive(c, Rational(i, steps)));
    if (s == 0) {
      if (i < range * steps) ++count;
      after_zero = true;
      continue;
    }
    // A flip straight after a grid zero is that same root.
    if (prev != 0 && s != prev && !after_zero) ++count;
    prev = s;
    after_zero = false;
  }
  return count;
}

inline std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("CRNREALC_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

// Random CRN over species S0..S{n-1}; rate constants are small positive
// rationals, sides have up to three terms with coefficients up to 3.
inline crnreal::Crn random_crn(std::mt19937_64& rng, std::size_t species, std::size_t reactions) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < species; ++i) names.push_back("S" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, species - 1);
  std::uniform_int_distribution<int> terms(0, 3), coeff(1, 3), num(1, 20), den(1, 6);
  auto side = [&] {
    std::vector<crnreal::Stoich> s;
    const int k = terms(rng);
    for (int i = 0; i < k; ++i) s.push_back({pick(rng), static_cast<unsigned>(coeff(rng))});
    return s;
  };
  std::vector<crnreal::Reaction> rs;
  while (rs.size() < reactions) {
    auto lhs = side(), rhs = side();
    try {
      rs.emplace_back(std::move(lhs), std::move(rhs), Rational(num(rng), den(rng)));
    } catch (const std::invalid_argument&) {
      // no-op reaction; draw again
    }
  }
  return crnreal::Crn(std::move(names), std::move(rs));
}

}  // namespace oracle

#include "crnreal/multipoly.hpp"
#include "crnreal/polynomial.hpp"
#include "crnreal/rational.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace crnreal;

namespace {
IntPolynomial P(std::initializer_list<long long> c) { return IntPolynomial(c); }
}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_EQ(to_string(Rational(-3, 4)), "-3/4");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(Rational, ToDoubleHugeValues) {
  const Rational big(BigInt(1) << 2000, (BigInt(1) << 1999) + 1);
  EXPECT_NEAR(to_double(big), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 3)), 1.0 / 3);
}

TEST(Rational, SimplestBetween) {
  EXPECT_EQ(simplest_between(Rational(1, 3), Rational(1, 2)), Rational(2, 5));
  EXPECT_EQ(simplest_between(Rational(1, 2), Rational(7, 2)), Rational(1));
  EXPECT_EQ(simplest_between(Rational(141, 100), Rational(142, 100)), Rational(17, 12));
  const Rational s = simplest_between(Rational(-5, 2), Rational(-9, 4));
  EXPECT_GT(s, Rational(-5, 2));
  EXPECT_LT(s, Rational(-9, 4));
}

TEST(IntPolynomial, Evaluate) {
  EXPECT_EQ(evaluate(P({-2, 0, 1}), Rational(3, 2)), Rational(1, 4));
  EXPECT_EQ(evaluate(P({7, 3, 5}), Rational(0)), Rational(7));
  EXPECT_EQ(evaluate(IntPolynomial{}, Rational(9)), Rational(0));
}

TEST(IntPolynomial, Derivative) {
  EXPECT_EQ(derivative(P({-2, 0, 1})), P({0, 2}));
  EXPECT_TRUE(derivative(P({5})).is_zero());
  EXPECT_EQ(derivative(P({2, 0, -1})), P({0, -2}));
}

TEST(IntPolynomial, SquarefreePart) {
  EXPECT_EQ(squarefree_part(P({1, -2, 1})), P({-1, 1}));
  EXPECT_EQ(squarefree_part(P({-2, 0, 1})), P({-2, 0, 1}));
  EXPECT_EQ(squarefree_part(P({0, 0, -1, 1})), P({0, -1, 1}));
  EXPECT_THROW(squarefree_part(IntPolynomial{}), std::domain_error);
}

TEST(IntPolynomial, SturmSequence) {
  const auto chain = sturm_sequence(P({-2, 0, 1}));
  ASSERT_EQ(chain.size(), 3u);
  EXPECT_EQ(chain[0], P({-2, 0, 1}));
  EXPECT_EQ(chain[1].degree(), 1);
  EXPECT_GT(chain[1].leading(), 0);
  EXPECT_EQ(chain[2].degree(), 0);
  EXPECT_GT(chain[2].leading(), 0);

  EXPECT_EQ(sturm_sequence(P({3, 2})).size(), 2u);

  const auto none = sturm_sequence(P({1, 0, 1}));
  EXPECT_LT(none.back().leading(), 0);
  EXPECT_EQ(count_roots(P({1, 0, 1}), Interval(-10, 10)), 0);

  EXPECT_THROW(sturm_sequence(P({1, -2, 1})), std::domain_error);
}

TEST(IntPolynomial, CountRoots) {
  EXPECT_EQ(count_roots(P({-2, 0, 1}), Interval(0, 2)), 1);
  EXPECT_EQ(count_roots(P({-2, 0, 1}), Interval(-2, 2)), 2);
  EXPECT_EQ(count_roots(P({1, 0, 1}), Interval(-10, 10)), 0);
  EXPECT_THROW(count_roots(P({-1, 1}), Interval(0, 1)), std::domain_error);
}

TEST(IntPolynomial, IsolatePositiveRoots) {
  const auto r = isolate_positive_roots(P({-2, 0, 1}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LT(r[0].lo * r[0].lo, 2);
  EXPECT_GT(r[0].hi * r[0].hi, 2);

  // (x^2-2)(x^2-3) = x^4 - 5x^2 + 6
  const auto two = isolate_positive_roots(P({6, 0, -5, 0, 1}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_LT(to_double(two[0].lo), 1.4142136);
  EXPECT_GT(to_double(two[0].hi), 1.4142135);
  EXPECT_LT(to_double(two[1].lo), 1.7320509);
  EXPECT_GT(to_double(two[1].hi), 1.7320508);
  EXPECT_LE(two[0].hi, two[1].lo);

  EXPECT_TRUE(isolate_positive_roots(P({1, 1})).empty());
  EXPECT_THROW(isolate_positive_roots(P({0, 1})), std::domain_error);
}

TEST(IntPolynomial, RefineRoot) {
  const Interval r = refine_root(P({-2, 0, 1}), Interval(1, 2), Rational(1, 1024));
  EXPECT_LE(r.width(), Rational(1, 1024));
  EXPECT_LT(to_double(r.lo), 1.41421356);
  EXPECT_GT(to_double(r.hi), 1.41421356);

  const Interval narrow(Rational(1414, 1000), Rational(1415, 1000));
  const Interval same = refine_root(P({-2, 0, 1}), narrow, Rational(1, 100));
  EXPECT_EQ(same.lo, narrow.lo);
  EXPECT_EQ(same.hi, narrow.hi);

  EXPECT_THROW(refine_root(P({-2, 0, 1}), Interval(1, 2), Rational(0)), std::invalid_argument);
  EXPECT_THROW(refine_root(P({-2, 0, 1}), Interval(-2, 2), Rational(1, 8)), std::domain_error);
}

TEST(IntPolynomial, RefineRootLandsOnExactRoot) {
  // 2x - 1 with midpoint 1/2 exactly on the root.
  const Interval r = refine_root(P({-1, 2}), Interval(0, 1), Rational(1, 16));
  EXPECT_TRUE(r.contains(Rational(1, 2)));
  EXPECT_LE(r.width(), Rational(1, 16));
}

TEST(IntPolynomial, ShiftAndScale) {
  EXPECT_EQ(shift_and_scale(P({-2, 0, 1}), Rational(1)), P({-1, 2, 1}));
  EXPECT_EQ(shift_and_scale(P({-2, 0, 1}), Rational(0)), P({-2, 0, 1}));
  EXPECT_EQ(shift_and_scale(P({-2, 0, 1}), Rational(1, 2)), P({-7, 4, 4}));
}

TEST(IntPolynomial, TextRoundTrip) {
  EXPECT_EQ(to_string(P({-2, 0, 1})), "x^2-2");
  EXPECT_EQ(to_string(P({-1, 1, 0, -3})), "-3*x^3+x-1");
  EXPECT_EQ(parse_polynomial("x^2-2"), P({-2, 0, 1}));
  EXPECT_EQ(parse_polynomial("2*x^3 - 3*x + 1"), P({1, -3, 0, 2}));
  EXPECT_EQ(parse_polynomial("-x^2+x^2+4"), P({4}));
  EXPECT_EQ(parse_polynomial("3x"), P({0, 3}));
  EXPECT_THROW(parse_polynomial("x^"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("2**x"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial(""), std::invalid_argument);

  std::mt19937_64 rng(oracle::seed_from_env(7));
  std::uniform_int_distribution<int> c(-9, 9), d(0, 6);
  for (int i = 0; i < 200; ++i) {
    std::vector<BigInt> coeffs(static_cast<std::size_t>(d(rng)) + 1);
    for (auto& v : coeffs) v = c(rng);
    const IntPolynomial p(coeffs);
    EXPECT_EQ(parse_polynomial(to_string(p)), p) << to_string(p);
  }
}

TEST(IntPolynomial, CountRootsMatchesGridOracle) {
  std::mt19937_64 rng(oracle::seed_from_env(11));
  std::uniform_int_distribution<int> c(-9, 9), d(1, 5);
  int checked = 0;
  while (checked < 60) {
    std::vector<long long> coeffs(static_cast<std::size_t>(d(rng)) + 1);
    for (auto& v : coeffs) v = c(rng);
    if (coeffs.back() == 0) continue;
    const IntPolynomial p(std::vector<BigInt>(coeffs.begin(), coeffs.end()));
    if (!is_squarefree(p) || sign_at(p, Rational(-8)) == 0 || sign_at(p, Rational(8)) == 0) continue;
    EXPECT_EQ(count_roots(p, Interval(-8, 8)), oracle::grid_root_count(coeffs, 8, 256)) << to_string(p);
    ++checked;
  }
}

TEST(MultiPolynomial, ArithmeticAndPartials) {
  const auto x = MultiPolynomial::variable(2, 0), y = MultiPolynomial::variable(2, 1);
  const auto one = MultiPolynomial::constant(2, Rational(1));
  const auto f = one - x * y;  // 1 - xy
  EXPECT_EQ(f.partial(0), Rational(-1) * y);
  EXPECT_EQ(f.partial(1), Rational(-1) * x);
  const std::vector<double> at{2.0, 3.0};
  EXPECT_DOUBLE_EQ(f.evaluate(at), -5.0);
  const std::vector<std::string> names{"x", "y"};
  EXPECT_EQ(f.to_string(names), "1 - x*y");
  EXPECT_TRUE((f - f).is_zero());
}

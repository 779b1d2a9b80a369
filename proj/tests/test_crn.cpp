#include "crnreal/crn.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace crnreal;

namespace {

Crn rational_crn(long a, long b) {
  return Crn({"X"}, {Reaction({}, {{0, 1}}, Rational(a)), Reaction({{0, 1}}, {}, Rational(b))});
}

}  // namespace

TEST(Reaction, NetEffect) {
  // X + Z ->{k} 2Y + Z over [X, Y, Z]
  const Reaction r({{0, 1}, {2, 1}}, {{1, 2}, {2, 1}}, 3);
  EXPECT_EQ(net_effect(r, 3), (std::vector<long>{-1, 2, 0}));
  EXPECT_EQ(net_effect(Reaction({}, {{0, 1}}, 1), 1), (std::vector<long>{1}));
  EXPECT_EQ(net_effect(Reaction({{0, 2}}, {{0, 1}}, 2), 1), (std::vector<long>{-1}));
  EXPECT_THROW(net_effect(r, 2), std::invalid_argument);
}

TEST(Reaction, Normalisation) {
  const Reaction a({{1, 1}, {0, 1}, {1, 1}}, {{0, 0}, {2, 1}}, 1);
  EXPECT_EQ(a.reactants(), (std::vector<Stoich>{{0, 1}, {1, 2}}));
  EXPECT_EQ(a.products(), (std::vector<Stoich>{{2, 1}}));
  EXPECT_THROW(Reaction({{0, 1}}, {{0, 1}}, 1), std::invalid_argument);
  EXPECT_THROW(Reaction({}, {{0, 1}}, 0), std::invalid_argument);
  EXPECT_THROW(Reaction({}, {{0, 1}}, Rational(-1, 2)), std::invalid_argument);
}

TEST(Reaction, MassActionRate) {
  const std::vector<double> s{0.5, 0.4};
  EXPECT_DOUBLE_EQ(mass_action_rate(Reaction({{0, 1}, {1, 1}}, {}, 1), s), 0.2);
  EXPECT_DOUBLE_EQ(mass_action_rate(Reaction({}, {{0, 1}}, 3), s), 3.0);
  EXPECT_DOUBLE_EQ(mass_action_rate(Reaction({{0, 2}}, {{0, 1}}, 2), s), 0.5);
  // 0^0 = 1: a species absent from the reactants does not zero the rate.
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_DOUBLE_EQ(mass_action_rate(Reaction({}, {{1, 1}}, 5), zero), 5.0);
  const std::vector<double> short_state{0.5};
  EXPECT_THROW(mass_action_rate(Reaction({{1, 1}}, {}, 1), short_state), std::invalid_argument);
}

TEST(Crn, VectorField) {
  const Crn rat = rational_crn(3, 2);
  for (double x : {0.0, 0.3, 1.5, 4.0}) {
    const std::vector<double> s{x};
    EXPECT_DOUBLE_EQ(vector_field(rat, s)[0], 3.0 - 2.0 * x);
  }
  const Crn inv({"X"}, {Reaction({}, {{0, 1}}, 1), Reaction({{0, 2}}, {{0, 1}}, 2)});
  for (double x : {0.0, 0.5, 0.7}) {
    const std::vector<double> s{x};
    EXPECT_NEAR(vector_field(inv, s)[0], 1.0 - 2.0 * x * x, 1e-15);
  }
  const Crn empty({"A", "B"}, {});
  const std::vector<double> s{1.0, 2.0};
  EXPECT_EQ(vector_field(empty, s), (std::vector<double>{0.0, 0.0}));
}

TEST(Crn, SymbolicVectorField) {
  const std::vector<std::string> x{"x"};
  const Crn c({"X"}, {Reaction({}, {{0, 1}}, 2), Reaction({{0, 2}}, {{0, 1}}, 1)});
  EXPECT_EQ(symbolic_vector_field(c)[0].to_string(x), "2 - x*x");

  // Addition combinator on U over [X, Y, U].
  const Crn add({"X", "Y", "U"}, {Reaction({{0, 1}}, {{0, 1}, {2, 1}}, 1), Reaction({{1, 1}}, {{1, 1}, {2, 1}}, 1),
                                  Reaction({{2, 1}}, {}, 1)});
  const std::vector<std::string> xyu{"x", "y", "u"};
  const auto f = symbolic_vector_field(add);
  EXPECT_TRUE(f[0].is_zero());
  EXPECT_TRUE(f[1].is_zero());
  EXPECT_EQ(f[2].evaluate(std::vector<double>{2, 3, 4}), 1.0);  // x + y - u

  // Reciprocal combinator on Y over [X, Y].
  const Crn rec({"X", "Y"}, {Reaction({}, {{1, 1}}, 1), Reaction({{0, 1}, {1, 1}}, {{0, 1}}, 1)});
  EXPECT_EQ(symbolic_vector_field(rec)[1].to_string(std::vector<std::string>{"x", "y"}), "1 - x*y");
  EXPECT_TRUE(is_kinetic_form(symbolic_vector_field(rec)));
}

TEST(Crn, KineticForm) {
  // X -> Y yields f_Y = +x, f_X = -x: kinetic. A fabricated field with a
  // negative term missing Y is not.
  const Crn ok({"X", "Y"}, {Reaction({{0, 1}}, {{1, 1}}, 1)});
  EXPECT_TRUE(is_kinetic_form(symbolic_vector_field(ok)));
  std::vector<MultiPolynomial> bad(1, MultiPolynomial(1));
  bad[0].add_term({0}, Rational(-1));
  EXPECT_FALSE(is_kinetic_form(bad));
}

TEST(Crn, ValidateIntegral) {
  const Crn ints({"X"}, {Reaction({}, {{0, 1}}, 1), Reaction({{0, 1}}, {}, 2), Reaction({{0, 2}}, {{0, 1}}, 3)});
  EXPECT_TRUE(validate_integral(ints).integral());
  const Crn frac({"X"}, {Reaction({}, {{0, 1}}, 1), Reaction({{0, 1}}, {}, Rational(3, 2))});
  const auto rep = validate_integral(frac);
  EXPECT_FALSE(rep.integral());
  EXPECT_EQ(rep.offending, (std::vector<std::size_t>{1}));
}

TEST(Crn, DisjointUnion) {
  const Crn x({"X"}, {Reaction({}, {{0, 1}}, 1)});
  const Crn y({"Y"}, {Reaction({{0, 1}}, {}, 1)});
  const Crn xy({"X", "Y"}, {Reaction({{0, 1}}, {{1, 1}}, 1)});
  EXPECT_EQ(disjoint_union(x, y, {}).species(), (std::vector<std::string>{"X", "Y"}));
  const std::vector<std::string> shared{"X"};
  const Crn u = disjoint_union(x, xy, shared);
  EXPECT_EQ(u.species(), (std::vector<std::string>{"X", "Y"}));
  EXPECT_EQ(u.reactions().size(), 2u);
  EXPECT_EQ(u.reactions()[1].reactants(), (std::vector<Stoich>{{0, 1}}));
  EXPECT_THROW(disjoint_union(x, x, {}), std::invalid_argument);
}

TEST(Crn, Validation) {
  EXPECT_THROW(Crn({"X", "X"}, {}), std::invalid_argument);
  EXPECT_THROW(Crn({"1X"}, {}), std::invalid_argument);
  EXPECT_THROW(Crn({"X"}, {Reaction({}, {{1, 1}}, 1)}), std::invalid_argument);
  const Crn c({"A", "B"}, {});
  EXPECT_EQ(c.index_of("B"), 1u);
  EXPECT_FALSE(c.index_of("C").has_value());
  EXPECT_THROW(c.require_index("C"), std::invalid_argument);
}

#include "crnreal/compiler.hpp"
#include "crnreal/parser.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace crnreal;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Parser, SingleReaction) {
  const auto p = parse_crn("X + Z ->{3} 2Y + Z");
  ASSERT_EQ(p.crn.species(), (std::vector<std::string>{"X", "Z", "Y"}));
  ASSERT_EQ(p.crn.reactions().size(), 1u);
  const auto& r = p.crn.reactions()[0];
  EXPECT_EQ(r.reactants(), (std::vector<Stoich>{{0, 1}, {1, 1}}));
  EXPECT_EQ(r.products(), (std::vector<Stoich>{{1, 1}, {2, 2}}));
  EXPECT_EQ(r.rate_constant(), Rational(3));
  EXPECT_FALSE(p.designated.has_value());
}

TEST(Parser, RationalCrn) {
  const auto p = parse_crn("0 ->{1} X\nX ->{2} 0\n");
  EXPECT_EQ(p.crn, Crn({"X"}, {Reaction({}, {{0, 1}}, 1), Reaction({{0, 1}}, {}, 2)}));
}

TEST(Parser, DeclarationsAndComments) {
  const auto p = parse_crn("# header\nspecies B, A\n\ndesignated A\n  A ->{1/2} B   \r\n");
  EXPECT_EQ(p.crn.species(), (std::vector<std::string>{"B", "A"}));
  EXPECT_EQ(p.designated, "A");
  EXPECT_EQ(p.crn.reactions()[0].rate_constant(), Rational(1, 2));
}

TEST(Parser, DesignatedWithoutReactions) {
  const auto p = parse_crn("designated X\n");
  EXPECT_EQ(p.crn.species(), (std::vector<std::string>{"X"}));
  EXPECT_TRUE(p.crn.reactions().empty());
}

TEST(Parser, Errors) {
  auto error_at = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_crn(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  EXPECT_THROW(parse_crn("X ->{0} X"), ParseError);
  try {
    parse_crn("X ->{0} Y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("nonpositive rate"), std::string::npos);
  }
  EXPECT_THROW(parse_crn("X ->{-1} Y"), ParseError);
  EXPECT_EQ(error_at("0 ->{1} X\nX -> Y"), (std::pair<std::size_t, std::size_t>{2, 6}));
  EXPECT_EQ(error_at("X ->{1} Y\n  X + ->{1} Y").first, 2u);
  EXPECT_EQ(error_at("X ->{1} Y $"), (std::pair<std::size_t, std::size_t>{1, 11}));
  EXPECT_THROW(parse_crn("species X\nX ->{1} Y"), ParseError);
  EXPECT_THROW(parse_crn("species X\ndesignated Q\nX ->{1} 0"), ParseError);
  EXPECT_THROW(parse_crn("0X ->{1} Y"), ParseError);
  EXPECT_THROW(parse_crn("X ->{1/0} Y"), ParseError);
  EXPECT_THROW(parse_crn("X ->{1} X"), ParseError);
  EXPECT_THROW(parse_crn("designated X\ndesignated Y"), ParseError);
}

TEST(Formatter, CanonicalText) {
  const Crn c({"X"}, {Reaction({}, {{0, 1}}, 5), Reaction({{0, 2}}, {{0, 1}}, Rational(3, 2))});
  EXPECT_EQ(format_crn(c, "X"), "designated X\n0 ->{5} X\n2X ->{3/2} X\n");
  EXPECT_EQ(format_crn(Crn({"X"}, {}), "X"), "designated X\n");
  EXPECT_EQ(format_crn(Crn({"A", "B"}, {Reaction({{1, 1}}, {{0, 1}}, 1)}), "A"),
            "species A, B\ndesignated A\nB ->{1} A\n");
  EXPECT_EQ(format_crn(c, "X", {"note"}), "# note\ndesignated X\n0 ->{5} X\n2X ->{3/2} X\n");
  EXPECT_THROW(format_crn(c, "Q"), std::invalid_argument);
}

TEST(Formatter, TranscendentalRoundTrip) {
  const SignedProgram t = transcendental_construction();
  const auto back = parse_crn(format_crn(t.crn, t.designated_name()));
  EXPECT_EQ(back.crn, t.crn);
  EXPECT_EQ(back.designated, "U");
}

TEST(Formatter, RandomRoundTrip) {
  std::mt19937_64 rng(oracle::seed_from_env(2024));
  std::uniform_int_distribution<std::size_t> species(1, 6), reactions(0, 8);
  for (int i = 0; i < 300; ++i) {
    const Crn c = oracle::random_crn(rng, species(rng), reactions(rng));
    const std::string designated = c.species()[rng() % c.size()];
    const std::string text = format_crn(c, designated);
    const auto back = parse_crn(text);
    ASSERT_EQ(back.crn, c) << text;
    ASSERT_EQ(back.designated, designated);
  }
}

TEST(Formatter, SampleFixturesRoundTrip) {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CRNREAL_SAMPLES_DIR)) {
    if (entry.path().extension() != ".crn") continue;
    const auto p = parse_crn(slurp(entry.path()));
    ASSERT_TRUE(p.designated) << entry.path();
    const auto back = parse_crn(format_crn(p.crn, *p.designated));
    EXPECT_EQ(back.crn, p.crn) << entry.path();
    ++seen;
  }
  EXPECT_GT(seen, 0);
}

#pragma once

#include "crnreal/crn.hpp"
#include "crnreal/rational.hpp"

#include <cctype>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

// Text format for CRNs (".crn"):
//
//   # comment
//   species X, Y, Z          (optional; fixes species order)
//   designated X             (optional; the output species)
//   X + Z ->{3} 2Y + Z
//   0 ->{1/2} X
//
// reaction := side "->" "{" rational "}" side
// side     := "0" | term ("+" term)*
// term     := [integer] identifier
//
// Without a species line the order is first appearance in the reactions, with
// the designated species appended if it appears in none of them.

namespace crnreal {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParsedTerm {
  std::string species;
  unsigned count;
  std::size_t column;
};

struct ParsedReaction {
  std::vector<ParsedTerm> reactants;
  std::vector<ParsedTerm> products;
  Rational rate;
  std::size_t line;
};

// Syntax-level view of a .crn file.
struct CrnDocument {
  std::optional<std::vector<std::string>> declared_species;
  std::vector<ParsedReaction> reactions;
  std::optional<std::string> designated;
  std::size_t designated_line = 0;
  std::size_t designated_column = 0;
};

struct ParsedCrn {
  Crn crn;
  std::optional<std::string> designated;
};

namespace detail {

enum class TokenKind { identifier, integer, plus, minus, slash, comma, arrow, lbrace, rbrace, end };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    const std::size_t col = i + 1;
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      tokens.push_back({TokenKind::identifier, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back({TokenKind::integer, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      tokens.push_back({TokenKind::arrow, "->", col});
      i += 2;
    } else {
      TokenKind kind;
      switch (c) {
        case '+': kind = TokenKind::plus; break;
        case '-': kind = TokenKind::minus; break;
        case '/': kind = TokenKind::slash; break;
        case ',': kind = TokenKind::comma; break;
        case '{': kind = TokenKind::lbrace; break;
        case '}': kind = TokenKind::rbrace; break;
        default: throw ParseError(line_no, col, std::string("unexpected character '") + line[i] + "'");
      }
      tokens.push_back({kind, std::string(1, line[i]), col});
      ++i;
    }
  }
  tokens.push_back({TokenKind::end, "", line.size() + 1});
  return tokens;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line_no) : tokens_(std::move(tokens)), line_(line_no) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw ParseError(line_, at.column, what + (at.kind == TokenKind::end ? " at end of line" : " near '" + at.text + "'"));
  }

  const Token& expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return next();
  }

  std::vector<ParsedTerm> side(TokenKind terminator) {
    std::vector<ParsedTerm> terms;
    if (peek().kind == TokenKind::integer && peek().text == "0" &&
        tokens_[pos_ + 1].kind == terminator) {
      next();
      return terms;
    }
    while (true) {
      unsigned count = 1;
      const Token& first = peek();
      if (first.kind == TokenKind::integer) {
        next();
        count = parse_count(first);
      }
      const Token& name = expect(TokenKind::identifier, "species name");
      terms.push_back({name.text, count, first.column});
      if (peek().kind != TokenKind::plus) break;
      next();
    }
    if (peek().kind != terminator) fail(peek(), terminator == TokenKind::arrow ? "expected '+' or '->'" : "expected '+' or end of line");
    return terms;
  }

  Rational rate() {
    expect(TokenKind::lbrace, "'{' before rate constant");
    const Token& start = peek();
    bool negative = false;
    if (peek().kind == TokenKind::minus) {
      negative = true;
      next();
    }
    const Token& num = expect(TokenKind::integer, "rate constant");
    BigInt n(num.text);
    BigInt d = 1;
    if (peek().kind == TokenKind::slash) {
      next();
      const Token& den = expect(TokenKind::integer, "denominator");
      d = BigInt(den.text);
      if (d == 0) fail(den, "zero denominator");
    }
    expect(TokenKind::rbrace, "'}' after rate constant");
    Rational k(negative ? BigInt(-n) : n, d);
    if (k <= 0) throw ParseError(line_, start.column, "nonpositive rate constant " + to_string(k));
    return k;
  }

  std::size_t line() const { return line_; }

 private:
  unsigned parse_count(const Token& t) const {
    if (t.text.size() > 6) fail(t, "stoichiometric coefficient too large");
    const unsigned v = static_cast<unsigned>(std::stoul(t.text));
    if (v == 0) fail(t, "stoichiometric coefficient must be positive");
    return v;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace detail

inline CrnDocument parse_document(std::string_view text) {
  using detail::TokenKind;
  CrnDocument doc;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos) stop = text.size();
    std::string_view line = text.substr(start, stop - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = stop + 1;

    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    detail::LineParser p(detail::tokenize_line(line, line_no), line_no);
    const auto& head = p.peek();
    const bool is_reaction = line.find("->") != std::string_view::npos;
    if (!is_reaction && head.kind == TokenKind::identifier && head.text == "species") {
      if (doc.declared_species) p.fail(head, "duplicate species declaration");
      p.next();
      std::vector<std::string> names;
      std::unordered_set<std::string> seen;
      while (true) {
        const auto& name = p.expect(TokenKind::identifier, "species name");
        if (!seen.insert(name.text).second) p.fail(name, "species declared twice");
        names.push_back(name.text);
        if (p.peek().kind != TokenKind::comma) break;
        p.next();
      }
      p.expect(TokenKind::end, "',' or end of line");
      doc.declared_species = std::move(names);
    } else if (!is_reaction && head.kind == TokenKind::identifier && head.text == "designated") {
      if (doc.designated) p.fail(head, "duplicate designated line");
      p.next();
      const auto& name = p.expect(TokenKind::identifier, "designated species name");
      doc.designated = name.text;
      doc.designated_line = line_no;
      doc.designated_column = name.column;
      p.expect(TokenKind::end, "end of line");
    } else {
      ParsedReaction r;
      r.line = line_no;
      r.reactants = p.side(TokenKind::arrow);
      p.expect(TokenKind::arrow, "'->'");
      r.rate = p.rate();
      r.products = p.side(TokenKind::end);
      doc.reactions.push_back(std::move(r));
    }
  }
  return doc;
}

inline ParsedCrn build_crn(const CrnDocument& doc) {
  std::vector<std::string> species;
  std::unordered_map<std::string, std::size_t> index;
  const bool declared = doc.declared_species.has_value();
  if (declared)
    for (const auto& name : *doc.declared_species) {
      index.emplace(name, species.size());
      species.push_back(name);
    }
  auto lookup = [&](const ParsedTerm& t, std::size_t line) -> std::size_t {
    auto it = index.find(t.species);
    if (it != index.end()) return it->second;
    if (declared) throw ParseError(line, t.column, "undeclared species '" + t.species + "'");
    index.emplace(t.species, species.size());
    species.push_back(t.species);
    return species.size() - 1;
  };
  std::vector<Reaction> reactions;
  for (const auto& r : doc.reactions) {
    std::vector<Stoich> lhs, rhs;
    for (const auto& t : r.reactants) lhs.push_back({lookup(t, r.line), t.count});
    for (const auto& t : r.products) rhs.push_back({lookup(t, r.line), t.count});
    try {
      reactions.emplace_back(std::move(lhs), std::move(rhs), r.rate);
    } catch (const std::invalid_argument& e) {
      throw ParseError(r.line, 1, e.what());
    }
  }
  if (doc.designated && !index.count(*doc.designated)) {
    if (declared)
      throw ParseError(doc.designated_line, doc.designated_column, "unknown designated species '" + *doc.designated + "'");
    species.push_back(*doc.designated);
  }
  return {Crn(std::move(species), std::move(reactions)), doc.designated};
}

inline ParsedCrn parse_crn(std::string_view text) { return build_crn(parse_document(text)); }

namespace detail {
inline std::string format_side(const Crn& crn, const std::vector<Stoich>& side) {
  if (side.empty()) return "0";
  std::string s;
  for (const auto& t : side) {
    if (!s.empty()) s += " + ";
    if (t.count != 1) s += std::to_string(t.count);
    s += crn.species()[t.species];
  }
  return s;
}
}  // namespace detail

inline std::string format_reaction(const Crn& crn, const Reaction& r) {
  return detail::format_side(crn, r.reactants()) + " ->{" + to_string(r.rate_constant()) + "} " +
         detail::format_side(crn, r.products());
}

// Canonical text. A species line is emitted only when first-appearance order
// would not reproduce the network's species order.
inline std::string format_crn(const Crn& crn, std::string_view designated,
                              const std::vector<std::string>& header_comments = {}) {
  if (!crn.index_of(designated)) throw std::invalid_argument("format_crn: designated species not in network");
  std::vector<std::size_t> inferred;
  std::vector<bool> seen(crn.size(), false);
  auto visit = [&](std::size_t i) {
    if (!seen[i]) {
      seen[i] = true;
      inferred.push_back(i);
    }
  };
  for (const auto& r : crn.reactions()) {
    for (const auto& t : r.reactants()) visit(t.species);
    for (const auto& t : r.products()) visit(t.species);
  }
  visit(*crn.index_of(designated));
  bool in_order = inferred.size() == crn.size();
  for (std::size_t i = 0; in_order && i < inferred.size(); ++i) in_order = inferred[i] == i;

  std::ostringstream out;
  for (const auto& c : header_comments) out << "# " << c << '\n';
  if (!in_order) {
    out << "species ";
    for (std::size_t i = 0; i < crn.size(); ++i) out << (i ? ", " : "") << crn.species()[i];
    out << '\n';
  }
  out << "designated " << designated << '\n';
  for (const auto& r : crn.reactions()) out << format_reaction(crn, r) << '\n';
  return out.str();
}

}  // namespace crnreal

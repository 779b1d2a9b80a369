#pragma once

#include "crnreal/multipoly.hpp"
#include "crnreal/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crnreal {

// Concentrations indexed by species order; dimensionless, nonnegative.
using State = std::vector<double>;

inline bool is_species_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Stoich {
  std::size_t species;
  unsigned count;

  friend bool operator==(const Stoich&, const Stoich&) = default;
};

// A reaction r ->{k} p over species indices of some Crn. Stoichiometry lists are
// kept sorted by species with duplicates merged and zero counts dropped.
class Reaction {
 public:
  Reaction(std::vector<Stoich> reactants, std::vector<Stoich> products, Rational rate_constant)
      : reactants_(normalize(std::move(reactants))),
        products_(normalize(std::move(products))),
        k_(std::move(rate_constant)) {
    if (k_ <= 0) throw std::invalid_argument("rate constant must be positive, got " + to_string(k_));
    if (reactants_ == products_) throw std::invalid_argument("reaction has no net effect");
    k_value_ = to_double(k_);
  }

  const std::vector<Stoich>& reactants() const { return reactants_; }
  const std::vector<Stoich>& products() const { return products_; }
  const Rational& rate_constant() const { return k_; }
  double rate_value() const { return k_value_; }

  unsigned reactant_count(std::size_t species) const { return count_in(reactants_, species); }
  unsigned product_count(std::size_t species) const { return count_in(products_, species); }

  // Largest species index mentioned, or nullopt for 0 -> 0 style sides.
  std::optional<std::size_t> max_species() const {
    std::optional<std::size_t> m;
    for (const auto* side : {&reactants_, &products_})
      if (!side->empty()) m = std::max(m.value_or(0), side->back().species);
    return m;
  }

  Reaction with_rate(Rational k) const { return Reaction(reactants_, products_, std::move(k)); }

  // Same reaction with species indices remapped through `mapping`.
  Reaction remapped(std::span<const std::size_t> mapping) const {
    auto remap = [&](const std::vector<Stoich>& side) {
      std::vector<Stoich> out;
      for (const auto& s : side) out.push_back({mapping[s.species], s.count});
      return out;
    };
    return Reaction(remap(reactants_), remap(products_), k_);
  }

  friend bool operator==(const Reaction& a, const Reaction& b) {
    return a.reactants_ == b.reactants_ && a.products_ == b.products_ && a.k_ == b.k_;
  }

 private:
  static std::vector<Stoich> normalize(std::vector<Stoich> side) {
    std::sort(side.begin(), side.end(), [](const Stoich& a, const Stoich& b) { return a.species < b.species; });
    std::vector<Stoich> out;
    for (const auto& s : side) {
      if (s.count == 0) continue;
      if (!out.empty() && out.back().species == s.species)
        out.back().count += s.count;
      else
        out.push_back(s);
    }
    return out;
  }

  static unsigned count_in(const std::vector<Stoich>& side, std::size_t species) {
    for (const auto& s : side)
      if (s.species == species) return s.count;
    return 0;
  }

  std::vector<Stoich> reactants_;
  std::vector<Stoich> products_;
  Rational k_;
  double k_value_ = 0.0;
};

// N = (S, R): ordered species names plus reactions over their indices.
class Crn {
 public:
  Crn() = default;
  Crn(std::vector<std::string> species, std::vector<Reaction> reactions)
      : species_(std::move(species)), reactions_(std::move(reactions)) {
    for (std::size_t i = 0; i < species_.size(); ++i) {
      if (!is_species_name(species_[i])) throw std::invalid_argument("invalid species name '" + species_[i] + "'");
      if (!index_.emplace(species_[i], i).second)
        throw std::invalid_argument("duplicate species '" + species_[i] + "'");
    }
    for (const auto& r : reactions_)
      if (auto m = r.max_species(); m && *m >= species_.size())
        throw std::invalid_argument("reaction mentions species index outside the species list");
  }

  std::size_t size() const { return species_.size(); }
  const std::vector<std::string>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(std::string_view name) const {
    auto i = index_of(name);
    if (!i) throw std::invalid_argument("unknown species '" + std::string(name) + "'");
    return *i;
  }

  friend bool operator==(const Crn& a, const Crn& b) {
    return a.species_ == b.species_ && a.reactions_ == b.reactions_;
  }

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Delta(Y) = p(Y) - r(Y) for every species Y.
inline std::vector<long> net_effect(const Reaction& r, std::size_t species_count) {
  if (auto m = r.max_species(); m && *m >= species_count)
    throw std::invalid_argument("net_effect: species count too small for reaction");
  std::vector<long> delta(species_count, 0);
  for (const auto& s : r.products()) delta[s.species] += s.count;
  for (const auto& s : r.reactants()) delta[s.species] -= s.count;
  return delta;
}

// k * prod_Y y^{r(Y)}; absent reactants contribute 0^0 = 1.
inline double mass_action_rate(const Reaction& r, std::span<const double> state) {
  if (auto m = r.max_species(); m && *m >= state.size())
    throw std::invalid_argument("mass_action_rate: state dimension mismatch");
  double rate = r.rate_value();
  for (const auto& s : r.reactants())
    for (unsigned k = 0; k < s.count; ++k) rate *= state[s.species];
  return rate;
}

inline void vector_field(const Crn& crn, std::span<const double> state, std::span<double> out) {
  if (state.size() != crn.size() || out.size() != crn.size())
    throw std::invalid_argument("vector_field: state dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& r : crn.reactions()) {
    const double rate = mass_action_rate(r, state);
    for (const auto& s : r.products()) out[s.species] += s.count * rate;
    for (const auto& s : r.reactants()) out[s.species] -= s.count * rate;
  }
}

inline std::vector<double> vector_field(const Crn& crn, std::span<const double> state) {
  std::vector<double> out(crn.size());
  vector_field(crn, state, out);
  return out;
}

// f_Y = sum over reactions of Delta(Y) * k * monomial(r), exact.
inline std::vector<MultiPolynomial> symbolic_vector_field(const Crn& crn) {
  const std::size_t n = crn.size();
  std::vector<MultiPolynomial> field(n, MultiPolynomial(n));
  for (const auto& r : crn.reactions()) {
    MultiPolynomial::Exponents mono(n, 0);
    for (const auto& s : r.reactants()) mono[s.species] = s.count;
    const auto delta = net_effect(r, n);
    for (std::size_t y = 0; y < n; ++y)
      if (delta[y] != 0) field[y].add_term(mono, r.rate_constant() * delta[y]);
  }
  return field;
}

// Each f_Y has the shape q(y) - y * r(y) with q, r nonnegative: every negative
// term contains Y itself.
inline bool is_kinetic_form(const std::vector<MultiPolynomial>& field) {
  for (std::size_t y = 0; y < field.size(); ++y)
    for (const auto& [e, c] : field[y].terms())
      if (c < 0 && e[y] == 0) return false;
  return true;
}

struct IntegralityReport {
  // Indices of reactions whose rate constant is not a positive integer.
  std::vector<std::size_t> offending;

  bool integral() const { return offending.empty(); }
};

// Rate constants are exact rationals, so irrational constants cannot reach
// this check at all.
inline IntegralityReport validate_integral(const Crn& crn) {
  IntegralityReport report;
  for (std::size_t i = 0; i < crn.reactions().size(); ++i) {
    const auto& k = crn.reactions()[i].rate_constant();
    if (!is_integer(k) || k <= 0) report.offending.push_back(i);
  }
  return report;
}

// Species of `a` in order, then the new species of `b`; reactions concatenated.
// The two species sets must overlap on exactly `shared`.
inline Crn disjoint_union(const Crn& a, const Crn& b, std::span<const std::string> shared) {
  for (const auto& name : shared)
    if (!a.index_of(name) || !b.index_of(name))
      throw std::invalid_argument("disjoint_union: shared species '" + name + "' missing from an operand");
  std::vector<std::string> species = a.species();
  std::vector<std::size_t> mapping(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& name = b.species()[i];
    if (auto j = a.index_of(name)) {
      if (std::find(shared.begin(), shared.end(), name) == shared.end())
        throw std::invalid_argument("disjoint_union: undeclared species collision on '" + name + "'");
      mapping[i] = *j;
    } else {
      mapping[i] = species.size();
      species.push_back(name);
    }
  }
  std::vector<Reaction> reactions = a.reactions();
  for (const auto& r : b.reactions()) reactions.push_back(r.remapped(mapping));
  return Crn(std::move(species), std::move(reactions));
}

// Same network with species renamed position by position.
inline Crn rename_species(const Crn& crn, std::vector<std::string> names) {
  if (names.size() != crn.size()) throw std::invalid_argument("rename_species: name count mismatch");
  return Crn(std::move(names), crn.reactions());
}

}  // namespace crnreal

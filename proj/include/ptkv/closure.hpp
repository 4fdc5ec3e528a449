#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ptkv/formula.hpp"

namespace ptkv {

// Finite closure of a seed: closed under subformulas, single negations
// (never adding ~~phi), and all term equalities over its terms. Members are
// ordered by printed text so indices are stable across runs.
class Closure {
 public:
  Closure() = default;
  Closure(const Formula& seed, std::vector<Formula> formulas);

  const Formula& seed() const { return *seed_; }
  const std::vector<Formula>& formulas() const { return formulas_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<Rat>& thresholds() const { return thresholds_; }
  const std::vector<Agent>& agents() const { return agents_; }
  std::size_t size() const { return formulas_.size(); }

  std::optional<std::size_t> index_of(const Formula& f) const;
  bool contains(const Formula& f) const { return index_of(f).has_value(); }
  std::optional<std::size_t> term_index(const Term& t) const;

  // Members that are not negations. Saturated types are determined by their
  // truth values on these.
  const std::vector<std::size_t>& core() const { return core_; }
  std::size_t core_size() const { return core_.size(); }

  // Index of ~phi for a core member phi.
  std::size_t negation_of(std::size_t core_index) const;

 private:
  std::optional<Formula> seed_;
  std::vector<Formula> formulas_;
  std::vector<Term> terms_;
  std::vector<Rat> thresholds_;
  std::vector<Agent> agents_;
  std::vector<std::size_t> core_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::size_t, std::size_t> negation_;
};

Closure finite_closure(const Formula& seed);

}  // namespace ptkv

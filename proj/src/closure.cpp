#include "ptkv/closure.hpp"

#include <algorithm>
#include <set>

#include "ptkv/error.hpp"

namespace ptkv {

Closure::Closure(const Formula& seed, std::vector<Formula> formulas)
    : seed_(seed), formulas_(std::move(formulas)) {
  std::sort(formulas_.begin(), formulas_.end());
  formulas_.erase(std::unique(formulas_.begin(), formulas_.end()),
                  formulas_.end());
  std::set<Term> terms;
  std::set<Rat> thresholds;
  std::set<Agent> agents;
  for (std::size_t i = 0; i < formulas_.size(); ++i) {
    const Formula& f = formulas_[i];
    index_.emplace(f.text(), i);
    switch (f.kind()) {
      case Kind::kEq:
        terms.insert(f.lhs_term());
        terms.insert(f.rhs_term());
        break;
      case Kind::kKv:
        terms.insert(f.term());
        [[fallthrough]];
      case Kind::kK:
        thresholds.insert(f.threshold());
        agents.insert(f.agent());
        break;
      default: break;
    }
  }
  terms_.assign(terms.begin(), terms.end());
  thresholds_.assign(thresholds.begin(), thresholds.end());
  agents_.assign(agents.begin(), agents.end());
  for (std::size_t i = 0; i < formulas_.size(); ++i) {
    if (formulas_[i].is(Kind::kNot)) continue;
    core_.push_back(i);
    auto neg = index_of(Formula::neg(formulas_[i]));
    if (!neg) {
      throw Error(Errc::kInternal,
                  "closure misses negation of " + formulas_[i].text());
    }
    negation_.emplace(i, *neg);
  }
}

std::optional<std::size_t> Closure::index_of(const Formula& f) const {
  auto it = index_.find(f.text());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Closure::term_index(const Term& t) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
  if (it == terms_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

std::size_t Closure::negation_of(std::size_t core_index) const {
  return negation_.at(core_index);
}

Closure finite_closure(const Formula& seed) {
  std::set<Formula> members = subformulas(seed);
  std::set<Term> terms = terms_of(seed);
  for (const Term& t : terms) {
    for (const Term& s : terms) members.insert(Formula::eq(t, s));
  }
  std::vector<Formula> out(members.begin(), members.end());
  for (const Formula& f : members) {
    if (!f.is(Kind::kNot)) out.push_back(Formula::neg(f));
  }
  return Closure(seed, std::move(out));
}

}  // namespace ptkv

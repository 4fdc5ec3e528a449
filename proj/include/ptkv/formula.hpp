#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ptkv/rational.hpp"

namespace ptkv {

struct Term {
  std::string name;
  auto operator<=>(const Term&) const = default;
};

struct Agent {
  unsigned index = 1;
  auto operator<=>(const Agent&) const = default;
};

enum class Kind { kAtom, kEq, kNot, kImp, kK, kKv };

// Immutable formula over the core connectives. Nodes are shared; copying a
// Formula is a pointer copy. Equality and ordering go through the canonical
// printed form, so structurally equal formulas compare equal.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula eq(Term lhs, Term rhs);
  static Formula neg(Formula f);
  static Formula imp(Formula lhs, Formula rhs);
  // Throws ThresholdOutOfRange unless theta is in [0,1].
  static Formula k(Agent agent, Rat theta, Formula f);
  // Throws ThresholdOutOfRange unless eta is in (1/2,1].
  static Formula kv(Agent agent, Rat eta, Term t);

  // Derived connectives, expanded into the core on construction:
  //   (a & b)   = ~(a -> ~b)
  //   (a | b)   = (~a -> b)
  //   (a <-> b) = ~((a -> b) -> ~(b -> a))
  //   T         = (T -> T) over the reserved atom "T";  F = ~T
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula top();
  static Formula bottom();
  // Right-nested conjunction; top() for an empty list.
  static Formula conj_all(const std::vector<Formula>& parts);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  const std::string& atom_name() const;  // kAtom
  const Term& lhs_term() const;          // kEq
  const Term& rhs_term() const;          // kEq
  const Term& term() const;              // kKv
  Agent agent() const;                   // kK, kKv
  const Rat& threshold() const;          // kK, kKv
  const Formula& sub() const;            // kNot, kK
  const Formula& lhs() const;            // kImp
  const Formula& rhs() const;            // kImp

  // Canonical text; parse(text()) reproduces this formula.
  const std::string& text() const;
  std::size_t hash() const;

  bool operator==(const Formula& other) const {
    return node_ == other.node_ || text() == other.text();
  }
  std::strong_ordering operator<=>(const Formula& other) const {
    return text() <=> other.text();
  }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Throws Error(kSyntax | kThresholdOutOfRange | kBadRational).
Formula parse(std::string_view text);
inline std::string print(const Formula& f) { return f.text(); }

std::size_t modal_depth(const Formula& f);

// All subformulas including f itself, in deterministic (text) order.
std::set<Formula> subformulas(const Formula& f);
std::set<Term> terms_of(const Formula& f);
std::set<std::string> atoms_of(const Formula& f);
std::set<Agent> agents_of(const Formula& f);
std::set<Rat> thresholds_of(const Formula& f);

// Pre-order walk over the syntax tree (shared subterms are revisited).
void walk(const Formula& f, const std::function<void(const Formula&)>& visit);

}  // namespace ptkv

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ptkv/closure.hpp"
#include "ptkv/lp.hpp"

namespace ptkv::ts {

// A saturated subset of the closure, stored as a membership vector over
// closure.formulas(). `term_class` is the equality partition of the
// closure's terms as a restricted growth string (first term in class 0).
struct Type {
  std::vector<bool> members;
  std::vector<std::uint8_t> term_class;

  bool has(std::size_t closure_index) const { return members.at(closure_index); }
  std::size_t class_count() const;

  std::strong_ordering operator<=>(const Type& o) const {
    return members <=> o.members;
  }
  bool operator==(const Type& o) const { return members == o.members; }
};

// Coordinate (0-based) of every closure term. Printed 1-based.
using Assignment = std::vector<std::uint8_t>;

struct EnumerateOptions {
  std::size_t closure_cap = 40;           // core formulas
  std::size_t candidate_cap = 1u << 20;   // saturated candidates before pruning
};

// All saturated types passing the coherence check: Boolean structure of the
// closure, equality as an equivalence relation, and the closure-internal
// literal instances of KMon, KExcl, KZero and KvMon. Sorted by membership
// vector. Throws Error(kClosureTooLarge).
std::vector<Type> enumerate_types(const Closure& sigma,
                                  const EnumerateOptions& opts = {});

// Coherence of an arbitrary saturated membership vector (used by tests to
// confirm enumerate_types is exhaustive).
bool is_coherent(const Closure& sigma, const std::vector<bool>& members);

// Injections of the type's equality classes into {0..k_size-1}, expanded to
// the terms, in lexicographic order. Throws Error(kTooFewCoordinates).
std::vector<Assignment> config_space(const Type& delta, std::size_t k_size);

// Closure indices of the agent's K / ~K / Kv / ~Kv literals in gamma.
struct ModalProfile {
  std::vector<std::size_t> literals;
  auto operator<=>(const ModalProfile&) const = default;
};

ModalProfile modal_profile(const Closure& sigma, const Type& gamma, Agent agent);

// Full FC(gamma, S, i) over variables z[d;f] (d indexes S, f an assignment).
// One system per choice of witness coordinates for the positive Kv literals.
std::vector<lp::LinearSystem> build_fc(const Closure& sigma, const Type& gamma,
                                       const std::vector<Type>& s, Agent agent,
                                       std::size_t k_size);

// Sparse solution over (index into S, index into config_space).
struct FcSolution {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Rat>> masses;
  Rat total() const;
};

struct FcOutcome {
  std::optional<FcSolution> solution;
  std::size_t disjuncts_tried = 0;
  // Reduced systems actually solved (columns with identical row patterns
  // merged), for trace dumps.
  std::vector<lp::LinearSystem> systems;
};

// Decides FC by solving the column-merged systems, branching on witness
// coordinates up to relabelling. Returns the first feasible branch in
// lexicographic witness order.
FcOutcome solve_fc(const Closure& sigma, const ModalProfile& profile,
                   const std::vector<Type>& s, std::size_t k_size);

std::optional<FcSolution> fc_feasible(const Closure& sigma, const Type& gamma,
                                      const std::vector<Type>& s, Agent agent,
                                      std::size_t k_size);

struct Elimination {
  std::size_t type_index = 0;  // into the initial type list
  Agent agent;                 // smallest agent with infeasible FC
  ModalProfile profile;        // that agent's literals
  std::size_t disjuncts = 0;
  std::vector<lp::LinearSystem> fc_dump;
};

struct Stage {
  std::size_t index = 0;
  std::vector<std::size_t> surviving;  // indices into the initial type list
  std::vector<Elimination> eliminated;  // removed on the way into this stage
};

struct EliminationTrace {
  std::vector<Stage> stages;
  std::vector<Elimination> all_eliminated() const;
};

struct TypeSpace {
  Closure sigma;
  std::size_t k_size = 0;
  std::vector<Agent> agents;
  std::vector<Type> initial;           // T_0, sorted
  std::vector<std::size_t> survivors;  // Type*, indices into `initial`
  EliminationTrace trace;
  // Re-solved against Type* itself, keyed by (position in survivors, agent).
  std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const FcSolution>>
      solutions;

  std::vector<Type> star_types() const;
};

// Agents whose FC systems are checked: those in the closure, or agent 1 when
// the closure mentions none.
std::vector<Agent> construction_agents(const Closure& sigma);

TypeSpace iterate_elimination(const Closure& sigma, std::size_t k_size,
                              const EnumerateOptions& opts = {});

// ~(conjunction of the witnessing agent's literals) per eliminated type,
// in trace order.
std::vector<Formula> emit_star_axioms(const Closure& sigma,
                                      const EliminationTrace& trace);

// First surviving type containing chi, as an index into `star`.
// Throws Error(kFormulaNotInClosure).
std::optional<std::size_t> lindenbaum(const Formula& chi, const Closure& sigma,
                                      const std::vector<Type>& star);

std::vector<std::string> type_literals(const Closure& sigma, const Type& t);
std::string assignment_label(const Assignment& f);

nlohmann::json trace_to_json(const TypeSpace& space,
                             const std::vector<Formula>& star_axioms);

}  // namespace ptkv::ts

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "ptkv/formula.hpp"

namespace ptkv {

using WorldSet = std::vector<bool>;

// Sparse finite distribution over world indices. Entries are sorted by
// world and carry strictly positive mass.
struct Distribution {
  std::vector<std::pair<std::size_t, Rat>> masses;

  static Distribution point(std::size_t world);
  // Drops zero entries, merges duplicates, sorts.
  static Distribution from_entries(std::vector<std::pair<std::size_t, Rat>> e);
  Rat total() const;
  Rat mass_of(const WorldSet& event) const;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

// Finite probabilistic knowing-value model. Worlds and values are addressed
// by index; names are kept for I/O. Distributions may be shared between
// worlds (canonical models do this heavily).
class ProbModel {
 public:
  ProbModel() = default;
  ProbModel(std::vector<std::string> worlds, std::vector<std::string> domain);

  std::size_t world_count() const { return worlds_.size(); }
  std::size_t domain_size() const { return domain_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<std::string>& domain() const { return domain_; }
  std::optional<std::size_t> world_index(const std::string& name) const;
  std::optional<std::size_t> value_index(const std::string& name) const;

  // Missing propositions are false.
  void set_prop(std::size_t world, const std::string& prop, bool value);
  bool prop(std::size_t world, const std::string& prop) const;
  const std::map<std::string, bool>& props_at(std::size_t world) const {
    return valuation_.at(world);
  }

  void set_term_value(std::size_t world, const Term& t, std::size_t value);
  std::optional<std::size_t> term_value(std::size_t world, const Term& t) const;
  const std::map<std::string, std::size_t>& terms_at(std::size_t world) const {
    return term_values_.at(world);
  }

  void set_measure(Agent agent, std::size_t world, DistributionPtr dist);
  void set_measure(Agent agent, std::size_t world, Distribution dist) {
    set_measure(agent, world, std::make_shared<const Distribution>(std::move(dist)));
  }
  // Null when (agent, world) has no measure.
  const Distribution* measure(Agent agent, std::size_t world) const;
  const DistributionPtr& measure_ptr(Agent agent, std::size_t world) const;
  std::vector<Agent> agents() const;

 private:
  std::vector<std::string> worlds_;
  std::vector<std::string> domain_;
  std::unordered_map<std::string, std::size_t> world_index_;
  std::unordered_map<std::string, std::size_t> value_index_;
  std::vector<std::map<std::string, bool>> valuation_;
  std::vector<std::map<std::string, std::size_t>> term_values_;
  std::map<Agent, std::vector<DistributionPtr>> measures_;
};

struct PointedModel {
  ProbModel model;
  std::size_t world = 0;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks masses are non-negative and sum to exactly 1, world references
// resolve, every agent has a measure at every world, and term values are
// total over `referenced_terms` (by default: every term assigned anywhere).
ValidationReport validate(const ProbModel& m,
                          const std::vector<Term>& referenced_terms = {});

// Worlds where val(w,t) = d. Throws UnknownValue / UnknownTerm.
WorldSet event_value(const ProbModel& m, const Term& t, std::size_t value);
WorldSet event_value(const ProbModel& m, const Term& t, const std::string& value);

// Bottom-up evaluator with per-subformula memoization. One instance per
// evaluation; not shared across threads.
class Evaluator {
 public:
  explicit Evaluator(const ProbModel& m) : model_(m) {}

  const WorldSet& extension(const Formula& f);

  // Called once per freshly computed subformula, in computation order.
  void on_compute(std::function<void(const Formula&)> hook) {
    hook_ = std::move(hook);
  }

 private:
  WorldSet compute(const Formula& f);

  const ProbModel& model_;
  std::unordered_map<std::string, WorldSet> memo_;
  std::function<void(const Formula&)> hook_;
};

WorldSet extension(const ProbModel& m, const Formula& f);
// Throws UnknownWorld / UnknownTerm / UnknownAgent.
bool satisfies(const ProbModel& m, std::size_t world, const Formula& f);
bool satisfies(const ProbModel& m, const std::string& world, const Formula& f);
bool valid_in_model(const ProbModel& m, const Formula& f);

// Fiber mass P_i(w)([[t = d]]) for every d in D, indexed by value.
std::vector<Rat> fiber_masses(const ProbModel& m, Agent agent, std::size_t world,
                              const Term& t);

// Random small models for property tests: 1..max_worlds worlds,
// 1..max_domain values, masses from normalized integer weights in
// [0, max_weight].
struct RandomModelOptions {
  std::size_t max_worlds = 4;
  std::size_t max_domain = 3;
  unsigned max_weight = 8;
  std::vector<std::string> atoms{"p", "q"};
  std::vector<Term> terms{{"t"}, {"s"}};
  std::vector<Agent> agents{{1}, {2}};
};

ProbModel random_model(std::mt19937_64& rng, const RandomModelOptions& opts = {});

// JSON with rationals as "a/b" strings:
//   {"worlds":[...], "domain":[...], "valuation":{w:{p:bool}},
//    "term_values":{w:{t:d}}, "measures":{"agent:i":{w:{u:"a/b"}}}}
// Unknown world or value names throw Error(kInvalidModel).
nlohmann::json model_to_json(const ProbModel& m);
ProbModel model_from_json(const nlohmann::json& j);

}  // namespace ptkv

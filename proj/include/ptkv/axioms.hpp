#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ptkv/formula.hpp"
#include "ptkv/model.hpp"

namespace ptkv::axioms {

enum class SchemaId {
  kTaut,
  kEqRef,
  kEqSym,
  kEqTrans,
  kEqSub,
  kKMon,
  kKImp,
  kKExcl,
  kKZero,
  kKEqSub1,
  kKvEqSub1,
  kKSub1,
  kKAdd1,
  kKvMon,
  kNecK,
};

const char* schema_name(SchemaId id);
std::optional<SchemaId> schema_from_name(std::string_view name);
// The fourteen axiom schemata of the basic and high-threshold systems
// (everything except the necessitation rule).
const std::vector<SchemaId>& axiom_schemata();

inline constexpr std::size_t kTautTemplateCount = 9;

// Parameters for a schema instance. Each schema reads only the fields it
// needs:
//   TAUT      taut_template over phi, psi, chi
//   EqRef     t;  EqSym t,s;  EqTrans / EqSub  t,s,u
//   KMon      theta <= theta_prime, phi
//   KImp      alpha, beta, phi, psi
//   KExcl     alpha + beta > 1, phi
//   KZero     phi
//   KEqSub1   theta, t,s,u
//   KvEqSub1  eta, t,s
//   KSub1     theta, phi, psi
//   KAdd1     alpha + beta <= 1, phi, psi
//   KvMon     1/2 < zeta <= eta, t
//   NecK      theta, phi (premise)
struct SchemaParams {
  Agent agent{1};
  Term t{"t"}, s{"s"}, u{"u"};
  Rat theta, theta_prime, alpha, beta, eta{1}, zeta{1};
  Formula phi = Formula::atom("p");
  Formula psi = Formula::atom("q");
  Formula chi = Formula::atom("r");
  std::size_t taut_template = 0;
};

// Throws Error(kSideConditionViolated) naming the violated inequality.
Formula instantiate(SchemaId schema, const SchemaParams& params);

// K_i^theta f. Does not check that f is valid.
Formula necessitation(const Formula& f, Agent agent, const Rat& theta);

// Principles that are not valid under the threshold semantics; used to show
// the harness finds counterexamples.
enum class NegativeControl {
  kFactivity,              // K_i^theta phi -> phi
  kPositiveIntrospection,  // K_i^theta phi -> K_i^theta K_i^theta phi
  kKvIntrospection,        // Kv_i^eta(t) -> K_i^theta Kv_i^eta(t)
  kKvMonReversed,          // Kv_i^eta(t) -> Kv_i^zeta(t) with zeta > eta
};

const char* control_name(NegativeControl c);
std::optional<NegativeControl> control_from_name(std::string_view name);
const std::vector<NegativeControl>& all_controls();
// No side-condition checks; kKvMonReversed expects zeta > eta.
Formula instantiate_control(NegativeControl c, const SchemaParams& params);

struct RandomFormulaOptions {
  std::size_t max_depth = 2;
  std::vector<std::string> atoms{"p", "q"};
  std::vector<Term> terms{{"t"}, {"s"}};
  std::vector<Agent> agents{{1}, {2}};
  unsigned max_denominator = 6;
};

Formula random_formula(std::mt19937_64& rng, const RandomFormulaOptions& opts = {});
// Threshold in [0,1] (or (1/2,1] when `high`) drawn from the small grid,
// or, when a model is given, sometimes from the mass of a random event so
// that boundary cases get exercised.
Rat random_threshold(std::mt19937_64& rng, bool high, unsigned max_denominator,
                     const ProbModel* model = nullptr);
// Parameters honoring the side conditions of `schema`, drawn against `model`.
SchemaParams random_params(std::mt19937_64& rng, SchemaId schema,
                           const ProbModel& model,
                           const RandomFormulaOptions& opts = {});

struct Counterexample {
  std::string instance;
  ProbModel model;
  std::size_t world = 0;
};

struct SchemaReport {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;  // failing (model, instance) trials
  std::vector<Counterexample> counterexamples;  // shrunk, capped
};

struct SoundnessReport {
  std::vector<SchemaReport> entries;
  std::size_t total_failures() const;
  const SchemaReport* find(std::string_view name) const;
};

struct SoundnessOptions {
  std::uint64_t seed = 42;
  std::size_t trials = 500;
  std::vector<NegativeControl> controls;
  std::size_t max_recorded = 3;
  bool shrink = true;
};

// Every schema instance is checked at every world of a fresh random model,
// `trials` times per schema. Negative controls, if any, are reported under
// "control:<name>". Throws Error(kInvalidArgument) when trials == 0.
SoundnessReport soundness_suite(const SoundnessOptions& opts);

// Removes worlds, then merges values, while `still_fails(model)` holds.
ProbModel shrink_model(const ProbModel& m,
                       const std::function<bool(const ProbModel&)>& still_fails);

// {schema: {"checks": n, "failures": k, "counterexamples": [...]}}
nlohmann::json report_to_json(const SoundnessReport& report);

}  // namespace ptkv::axioms

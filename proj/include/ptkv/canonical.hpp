#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ptkv/closure.hpp"
#include "ptkv/model.hpp"
#include "ptkv/typespace.hpp"

namespace ptkv::canon {

// How many value coordinates the construction uses.
//   paper     |T| (at least 1)
//   plus_one  |T| + 1
//   explicit  n, which must cover |T|
struct KSize {
  enum class Policy { kPaper, kPlusOne, kExplicit };
  Policy policy = Policy::kPlusOne;
  std::size_t n = 0;

  static KSize paper() { return {Policy::kPaper, 0}; }
  static KSize plus_one() { return {Policy::kPlusOne, 0}; }
  static KSize explicit_size(std::size_t n) { return {Policy::kExplicit, n}; }
  // "paper" | "plus-one" | "plus_one" | positive integer.
  static KSize parse(std::string_view text);
  std::string name() const;
  std::size_t resolve(const Closure& sigma) const;
};

struct CanonicalWorld {
  std::size_t survivor = 0;    // position in Type*
  std::size_t type_index = 0;  // index into the initial type list
  ts::Type type;
  ts::Assignment f;
};

struct CanonicalModel {
  ProbModel model;
  std::vector<CanonicalWorld> worlds;
  std::vector<std::size_t> offsets;  // first world of each survivor

  std::size_t world_of(std::size_t survivor, std::size_t assignment) const {
    return offsets.at(survivor) + assignment;
  }
};

std::string world_name(std::size_t type_index, const ts::Assignment& f);

// Worlds (Delta, f) over Type*, domain d1..dK, and per-type measures taken
// from the retained solutions. Throws Error(kMissingSolution).
CanonicalModel build_canonical(const ts::TypeSpace& space);

struct TruthViolation {
  std::string formula;
  std::string world;
  bool member = false;  // phi in Delta
};

struct TruthLemmaReport {
  std::size_t checks = 0;
  std::vector<TruthViolation> violations;
  // Each check computed only formulas of modal depth at most its own.
  bool stratified = true;
  bool ok() const { return violations.empty() && stratified; }
};

// Checks membership against truth for every closure member at every world,
// in nondecreasing modal depth.
TruthLemmaReport verify_truth_lemma(const CanonicalModel& cm, const Closure& sigma);

// Number of (type, agent, formula) triples where the measure of the
// formula's extension differs from the solution mass on types containing it.
std::size_t quotient_mismatches(const CanonicalModel& cm, const ts::TypeSpace& space);

// Replaces every world by n = 1..copies replicas, spreading each world's
// mass as z * 2^-n / (1 - 2^-copies).
ProbModel materialize_replicas(const ProbModel& m, std::size_t copies);

// Worlds reachable from `world` through measure supports, renumbered in
// their original order. Truth at `world` is unchanged.
PointedModel generated_submodel(const ProbModel& m, std::size_t world);

struct SatOptions {
  KSize k_size;
  ts::EnumerateOptions enumerate;
  std::size_t replicas = 0;  // 0: the finite quotient
};

struct SatVerdict {
  bool sat = false;
  Formula formula = Formula::top();
  std::size_t k_size = 0;
  // sat
  ProbModel model;
  std::string world;
  bool checked = false;
  // unsat
  std::vector<Formula> star_axioms;
  std::string note;

  ts::TypeSpace space;
};

SatVerdict decide_sat(const Formula& chi, const SatOptions& opts = {});

nlohmann::json verdict_to_json(const SatVerdict& v);

// Closure members, terms, thresholds, type counts and elimination summary
// under opts.k_size, plus the survivor counts under the paper and plus-one
// coordinate counts and whether they differ.
nlohmann::json closure_report(const Formula& chi, const SatOptions& opts = {});

struct Bounds {
  std::size_t worlds = 3;
  std::size_t domain = 3;
  std::size_t denominator = 3;
};

inline constexpr Bounds kMaxBounds{4, 3, 3};

// Exhaustive search over models with at most `bounds.worlds` worlds and
// `bounds.domain` values, and masses a/b with b <= bounds.denominator.
// Throws Error(kBoundsTooLarge).
std::optional<PointedModel> brute_force_sat(const Formula& chi, const Bounds& bounds = {});

}  // namespace ptkv::canon

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ptkv/rational.hpp"

namespace ptkv::lp {

enum class Relation { kGE, kGT, kEQ };

// coeffs . x  (>= | > | =)  rhs, with coefficients keyed by variable index.
struct Row {
  std::vector<std::pair<std::size_t, Rat>> coeffs;
  Relation relation = Relation::kGE;
  Rat rhs;

  Rat lhs_at(const std::vector<Rat>& x) const;
};

struct LinearSystem {
  std::vector<std::string> variables;
  std::vector<Row> rows;
  bool nonneg = true;

  std::size_t add_variable(std::string name);
  void add_row(std::vector<std::pair<std::size_t, Rat>> coeffs, Relation rel,
               Rat rhs);
  // Rows use only declared variables.
  bool well_formed() const;
};

struct Witness {
  std::vector<Rat> assignment;
};

// True iff the witness satisfies every row exactly, strict rows strictly,
// and non-negativity when the system asks for it.
bool check_witness(const LinearSystem& sys, const Witness& w);

// Feasibility of the closed relaxation (strict rows read as >=).
std::optional<Witness> feasible_closed(const LinearSystem& sys);

struct MixedResult {
  bool closed_feasible = false;
  // max delta subject to strict rows a.x >= b + delta, delta <= 1; only
  // meaningful when closed_feasible.
  Rat delta;
  std::optional<Witness> witness;  // present iff delta > 0
};

MixedResult solve_mixed(const LinearSystem& sys);

inline std::optional<Witness> feasible_mixed(const LinearSystem& sys) {
  return solve_mixed(sys).witness;
}

// Independent feasibility decision by Fourier-Motzkin elimination with strict
// flag propagation. Throws Error(kTooManyVariables) above kFmMaxVariables.
inline constexpr std::size_t kFmMaxVariables = 8;
bool fm_oracle(const LinearSystem& sys);

nlohmann::json system_to_json(const LinearSystem& sys);

}  // namespace ptkv::lp

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ptkv {

// Exact rationals. mpq_class keeps values in lowest terms with a positive
// denominator after every arithmetic operation.
using Rat = mpq_class;

// Accepts "a/b", "a", "-a/b" and decimal literals ("0.62" -> 31/50).
// Throws Error(kBadRational) on malformed text or a zero denominator.
Rat parse_rat(std::string_view text);

// num/den in lowest terms. The two-argument mpq_class constructor does not
// reduce, so fractions built from loop counters go through here.
inline Rat ratio(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// "a/b", or "a" when the denominator is 1. Used for formula thresholds.
std::string rat_to_string(const Rat& r);

// Always "a/b", including integers ("1/1", "0/1"). Used in JSON output.
std::string rat_to_json_string(const Rat& r);

inline bool is_unit_interval(const Rat& r) { return r >= 0 && r <= 1; }

// (1/2, 1]
inline bool is_high_threshold(const Rat& r) {
  return r > Rat(1, 2) && r <= 1;
}

}  // namespace ptkv

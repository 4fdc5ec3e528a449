#pragma once

#include <string>

#include "ptkv/error.hpp"
#include "ptkv/formula.hpp"
#include "ptkv/model.hpp"

namespace testing {

inline ptkv::Formula F(const std::string& text) { return ptkv::parse(text); }
inline ptkv::Rat Q(const std::string& text) { return ptkv::parse_rat(text); }

template <typename Fn>
ptkv::Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const ptkv::Error& e) {
    return e.code();
  }
  return ptkv::Errc::kInternal;  // nothing thrown
}

// Worlds w1..wn with t = d_k at w_k and the same measure everywhere.
inline ptkv::ProbModel posterior_model(const std::vector<ptkv::Rat>& masses) {
  std::vector<std::string> worlds, domain;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    worlds.push_back("w" + std::to_string(k + 1));
    domain.push_back("d" + std::to_string(k + 1));
  }
  ptkv::ProbModel m(worlds, domain);
  std::vector<std::pair<std::size_t, ptkv::Rat>> entries;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    m.set_term_value(k, ptkv::Term{"t"}, k);
    entries.emplace_back(k, masses[k]);
  }
  auto dist = std::make_shared<const ptkv::Distribution>(
      ptkv::Distribution::from_entries(entries));
  for (std::size_t k = 0; k < masses.size(); ++k) m.set_measure(ptkv::Agent{1}, k, dist);
  return m;
}

}  // namespace testing

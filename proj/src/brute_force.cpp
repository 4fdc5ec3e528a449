#include <functional>
#include <set>

#include "ptkv/canonical.hpp"
#include "ptkv/error.hpp"

namespace ptkv::canon {

namespace {

// Mass vectors over n worlds with entries a/b (b <= den) summing to 1.
std::vector<DistributionPtr> grid(std::size_t n, std::size_t den) {
  std::set<Rat> values;
  for (std::size_t b = 1; b <= den; ++b) {
    for (std::size_t a = 0; a <= b; ++a) values.insert(ratio(static_cast<long>(a), static_cast<long>(b)));
  }
  std::vector<DistributionPtr> out;
  std::vector<Rat> cur(n);
  std::function<void(std::size_t, Rat)> rec = [&](std::size_t j, Rat left) {
    if (j + 1 == n) {
      if (!values.count(left)) return;
      cur[j] = left;
      std::vector<std::pair<std::size_t, Rat>> e;
      for (std::size_t w = 0; w < n; ++w) e.emplace_back(w, cur[w]);
      out.push_back(std::make_shared<const Distribution>(Distribution::from_entries(std::move(e))));
      return;
    }
    for (const Rat& v : values) {
      if (v > left) break;
      cur[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, Rat(1));
  return out;
}

}  // namespace

std::optional<PointedModel> brute_force_sat(const Formula& chi, const Bounds& bounds) {
  if (bounds.worlds == 0 || bounds.domain == 0 || bounds.denominator == 0 ||
      bounds.worlds > kMaxBounds.worlds || bounds.domain > kMaxBounds.domain ||
      bounds.denominator > kMaxBounds.denominator) {
    throw Error(Errc::kBoundsTooLarge,
                "brute-force bounds must lie within 1..4 worlds, 1..3 values, "
                "denominators 1..3");
  }
  std::vector<std::string> atoms;
  for (const std::string& a : atoms_of(chi)) {
    if (a != "$T") atoms.push_back(a);
  }
  const std::set<Term> term_set = terms_of(chi);
  const std::vector<Term> terms(term_set.begin(), term_set.end());
  std::vector<Agent> agents;
  for (Agent a : agents_of(chi)) agents.push_back(a);
  if (agents.empty()) agents.push_back(Agent{1});
  // At depth <= 1 only the designated world's measures matter; the others
  // keep a point mass on themselves.
  const bool shallow = modal_depth(chi) <= 1;

  for (std::size_t n = 1; n <= bounds.worlds; ++n) {
    const std::vector<DistributionPtr> dists = grid(n, bounds.denominator);
    std::vector<std::string> names;
    for (std::size_t w = 0; w < n; ++w) names.push_back("w" + std::to_string(w + 1));
    const std::size_t slots = terms.size() * n;
    const std::size_t measured = shallow ? 1 : n;

    // Term values as a restricted growth string over (world, term) slots.
    std::vector<std::size_t> values(slots, 0);
    std::optional<PointedModel> found;
    std::function<bool(std::size_t, std::size_t)> over_values = [&](std::size_t j,
                                                                    std::size_t used) -> bool {
      if (j < slots) {
        for (std::size_t v = 0; v <= used && v < bounds.domain; ++v) {
          values[j] = v;
          if (over_values(j + 1, std::max(used, v + 1))) return true;
        }
        return false;
      }
      std::vector<std::string> domain;
      for (std::size_t d = 0; d < std::max<std::size_t>(used, 1); ++d) {
        domain.push_back("d" + std::to_string(d + 1));
      }
      ProbModel m(names, domain);
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t t = 0; t < terms.size(); ++t) {
          m.set_term_value(w, terms[t], values[w * terms.size() + t]);
        }
        for (Agent a : agents) m.set_measure(a, w, Distribution::point(w));
      }
      const std::size_t bits = atoms.size() * n;
      for (std::size_t val = 0; val < (std::size_t{1} << bits); ++val) {
        for (std::size_t w = 0; w < n; ++w) {
          for (std::size_t p = 0; p < atoms.size(); ++p) {
            m.set_prop(w, atoms[p], (val >> (w * atoms.size() + p)) & 1u);
          }
        }
        // Odometer over (world, agent) measure choices.
        const std::size_t digits = measured * agents.size();
        std::vector<std::size_t> pick(digits, 0);
        for (;;) {
          for (std::size_t d = 0; d < digits; ++d) {
            m.set_measure(agents[d % agents.size()], d / agents.size(), dists[pick[d]]);
          }
          if (satisfies(m, 0, chi)) {
            found = PointedModel{m, 0};
            return true;
          }
          std::size_t d = 0;
          while (d < digits && ++pick[d] == dists.size()) pick[d++] = 0;
          if (d == digits) break;
        }
      }
      return false;
    };
    if (over_values(0, 0)) return found;
  }
  return std::nullopt;
}

}  // namespace ptkv::canon

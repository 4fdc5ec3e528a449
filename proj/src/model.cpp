#include "ptkv/model.hpp"

#include <algorithm>
#include <set>

#include "ptkv/error.hpp"

namespace ptkv {

Distribution Distribution::point(std::size_t world) {
  return Distribution{{{world, Rat(1)}}};
}

Distribution Distribution::from_entries(
    std::vector<std::pair<std::size_t, Rat>> e) {
  std::sort(e.begin(), e.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Distribution d;
  for (auto& [w, m] : e) {
    if (!d.masses.empty() && d.masses.back().first == w) {
      d.masses.back().second += m;
    } else {
      d.masses.emplace_back(w, std::move(m));
    }
  }
  std::erase_if(d.masses, [](const auto& x) { return x.second == 0; });
  return d;
}

Rat Distribution::total() const {
  Rat sum = 0;
  for (const auto& [w, m] : masses) sum += m;
  return sum;
}

Rat Distribution::mass_of(const WorldSet& event) const {
  Rat sum = 0;
  for (const auto& [w, m] : masses) {
    if (w < event.size() && event[w]) sum += m;
  }
  return sum;
}

ProbModel::ProbModel(std::vector<std::string> worlds,
                     std::vector<std::string> domain)
    : worlds_(std::move(worlds)), domain_(std::move(domain)) {
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (!world_index_.emplace(worlds_[i], i).second) {
      throw Error(Errc::kInvalidModel, "duplicate world '" + worlds_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (!value_index_.emplace(domain_[i], i).second) {
      throw Error(Errc::kInvalidModel, "duplicate value '" + domain_[i] + "'");
    }
  }
  valuation_.resize(worlds_.size());
  term_values_.resize(worlds_.size());
}

std::optional<std::size_t> ProbModel::world_index(const std::string& name) const {
  auto it = world_index_.find(name);
  if (it == world_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ProbModel::value_index(const std::string& name) const {
  auto it = value_index_.find(name);
  if (it == value_index_.end()) return std::nullopt;
  return it->second;
}

void ProbModel::set_prop(std::size_t world, const std::string& prop, bool value) {
  valuation_.at(world)[prop] = value;
}

bool ProbModel::prop(std::size_t world, const std::string& prop) const {
  const auto& vals = valuation_.at(world);
  auto it = vals.find(prop);
  return it != vals.end() && it->second;
}

void ProbModel::set_term_value(std::size_t world, const Term& t,
                               std::size_t value) {
  term_values_.at(world)[t.name] = value;
}

std::optional<std::size_t> ProbModel::term_value(std::size_t world,
                                                 const Term& t) const {
  const auto& vals = term_values_.at(world);
  auto it = vals.find(t.name);
  if (it == vals.end()) return std::nullopt;
  return it->second;
}

void ProbModel::set_measure(Agent agent, std::size_t world, DistributionPtr dist) {
  auto& row = measures_[agent];
  row.resize(worlds_.size());
  row.at(world) = std::move(dist);
}

const Distribution* ProbModel::measure(Agent agent, std::size_t world) const {
  return measure_ptr(agent, world).get();
}

const DistributionPtr& ProbModel::measure_ptr(Agent agent,
                                              std::size_t world) const {
  static const DistributionPtr kNone;
  auto it = measures_.find(agent);
  if (it == measures_.end() || world >= it->second.size()) return kNone;
  return it->second[world];
}

std::vector<Agent> ProbModel::agents() const {
  std::vector<Agent> out;
  for (const auto& [a, row] : measures_) out.push_back(a);
  return out;
}

ValidationReport validate(const ProbModel& m,
                          const std::vector<Term>& referenced_terms) {
  ValidationReport report;
  auto& v = report.violations;
  if (m.world_count() == 0) v.push_back("world set is empty");
  if (m.domain_size() == 0) v.push_back("domain is empty");

  for (Agent a : m.agents()) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      const std::string where =
          "agent " + std::to_string(a.index) + " at " + m.worlds()[w];
      const Distribution* d = m.measure(a, w);
      if (d == nullptr) {
        v.push_back("missing measure for " + where);
        continue;
      }
      for (const auto& [u, mass] : d->masses) {
        if (u >= m.world_count()) {
          v.push_back("dangling world reference " + std::to_string(u) +
                      " in measure for " + where);
        }
        if (mass < 0) {
          v.push_back("negative mass " + rat_to_string(mass) +
                      " in measure for " + where);
        }
      }
      Rat sum = d->total();
      if (sum != 1) {
        v.push_back("sum = " + rat_to_string(sum) + " ≠ 1 in measure for " +
                    where);
      }
    }
  }

  std::set<std::string> terms;
  if (referenced_terms.empty()) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (const auto& [t, d] : m.terms_at(w)) terms.insert(t);
    }
  } else {
    for (const Term& t : referenced_terms) terms.insert(t.name);
  }
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    for (const std::string& t : terms) {
      auto val = m.term_value(w, Term{t});
      if (!val) {
        v.push_back("missing term value for " + t + " at " + m.worlds()[w]);
      } else if (*val >= m.domain_size()) {
        v.push_back("term value of " + t + " at " + m.worlds()[w] +
                    " outside the domain");
      }
    }
  }
  return report;
}

namespace {

std::size_t require_term_value(const ProbModel& m, std::size_t w,
                               const Term& t) {
  auto val = m.term_value(w, t);
  if (!val) {
    throw Error(Errc::kUnknownTerm,
                "no value for term '" + t.name + "' at world " + m.worlds()[w]);
  }
  return *val;
}

const Distribution& require_measure(const ProbModel& m, Agent a,
                                    std::size_t w) {
  const Distribution* d = m.measure(a, w);
  if (d == nullptr) {
    throw Error(Errc::kUnknownAgent, "no measure for agent " +
                                         std::to_string(a.index) + " at " +
                                         m.worlds()[w]);
  }
  return *d;
}

}  // namespace

WorldSet event_value(const ProbModel& m, const Term& t, std::size_t value) {
  if (value >= m.domain_size()) {
    throw Error(Errc::kUnknownValue,
                "value index " + std::to_string(value) + " not in domain");
  }
  WorldSet out(m.world_count(), false);
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    out[w] = require_term_value(m, w, t) == value;
  }
  return out;
}

WorldSet event_value(const ProbModel& m, const Term& t, const std::string& value) {
  auto idx = m.value_index(value);
  if (!idx) throw Error(Errc::kUnknownValue, "unknown value '" + value + "'");
  return event_value(m, t, *idx);
}

std::vector<Rat> fiber_masses(const ProbModel& m, Agent agent, std::size_t world,
                              const Term& t) {
  const Distribution& d = require_measure(m, agent, world);
  std::vector<Rat> out(m.domain_size(), Rat(0));
  for (const auto& [u, mass] : d.masses) {
    std::size_t val = require_term_value(m, u, t);
    if (val >= out.size()) {
      throw Error(Errc::kInvalidModel, "term value outside the domain");
    }
    out[val] += mass;
  }
  return out;
}

const WorldSet& Evaluator::extension(const Formula& f) {
  auto it = memo_.find(f.text());
  if (it != memo_.end()) return it->second;
  WorldSet ext = compute(f);
  if (hook_) hook_(f);
  return memo_.emplace(f.text(), std::move(ext)).first->second;
}

WorldSet Evaluator::compute(const Formula& f) {
  const std::size_t n = model_.world_count();
  WorldSet out(n, false);
  switch (f.kind()) {
    case Kind::kAtom:
      for (std::size_t w = 0; w < n; ++w) out[w] = model_.prop(w, f.atom_name());
      break;
    case Kind::kEq:
      for (std::size_t w = 0; w < n; ++w) {
        out[w] = require_term_value(model_, w, f.lhs_term()) ==
                 require_term_value(model_, w, f.rhs_term());
      }
      break;
    case Kind::kNot: {
      const WorldSet& sub = extension(f.sub());
      for (std::size_t w = 0; w < n; ++w) out[w] = !sub[w];
      break;
    }
    case Kind::kImp: {
      WorldSet lhs = extension(f.lhs());
      const WorldSet& rhs = extension(f.rhs());
      for (std::size_t w = 0; w < n; ++w) out[w] = !lhs[w] || rhs[w];
      break;
    }
    case Kind::kK: {
      const WorldSet& sub = extension(f.sub());
      std::unordered_map<const Distribution*, bool> seen;
      for (std::size_t w = 0; w < n; ++w) {
        const Distribution& d = require_measure(model_, f.agent(), w);
        auto [slot, fresh] = seen.try_emplace(&d, false);
        if (fresh) slot->second = d.mass_of(sub) >= f.threshold();
        out[w] = slot->second;
      }
      break;
    }
    case Kind::kKv: {
      std::unordered_map<const Distribution*, bool> seen;
      for (std::size_t w = 0; w < n; ++w) {
        const Distribution& d = require_measure(model_, f.agent(), w);
        auto [slot, fresh] = seen.try_emplace(&d, false);
        if (fresh) {
          std::size_t hits = 0;
          for (const Rat& mass : fiber_masses(model_, f.agent(), w, f.term())) {
            if (mass >= f.threshold()) ++hits;
          }
          slot->second = hits == 1;
        }
        out[w] = slot->second;
      }
      break;
    }
  }
  return out;
}

WorldSet extension(const ProbModel& m, const Formula& f) {
  Evaluator ev(m);
  return ev.extension(f);
}

bool satisfies(const ProbModel& m, std::size_t world, const Formula& f) {
  if (world >= m.world_count()) {
    throw Error(Errc::kUnknownWorld, "world index " + std::to_string(world) +
                                         " out of range");
  }
  return extension(m, f)[world];
}

bool satisfies(const ProbModel& m, const std::string& world, const Formula& f) {
  auto idx = m.world_index(world);
  if (!idx) throw Error(Errc::kUnknownWorld, "unknown world '" + world + "'");
  return satisfies(m, *idx, f);
}

bool valid_in_model(const ProbModel& m, const Formula& f) {
  WorldSet ext = extension(m, f);
  return std::all_of(ext.begin(), ext.end(), [](bool b) { return b; });
}

ProbModel random_model(std::mt19937_64& rng, const RandomModelOptions& opts) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n = uniform(1, opts.max_worlds);
  const std::size_t k = uniform(1, opts.max_domain);
  std::vector<std::string> worlds, domain;
  for (std::size_t i = 0; i < n; ++i) worlds.push_back("w" + std::to_string(i + 1));
  for (std::size_t i = 0; i < k; ++i) domain.push_back("d" + std::to_string(i + 1));
  ProbModel m(worlds, domain);
  for (std::size_t w = 0; w < n; ++w) {
    for (const auto& p : opts.atoms) m.set_prop(w, p, uniform(0, 1) == 1);
    for (const auto& t : opts.terms) m.set_term_value(w, t, uniform(0, k - 1));
  }
  for (Agent a : opts.agents) {
    for (std::size_t w = 0; w < n; ++w) {
      std::vector<unsigned> weights(n);
      unsigned total = 0;
      for (auto& x : weights) {
        x = static_cast<unsigned>(uniform(0, opts.max_weight));
        total += x;
      }
      if (total == 0) {
        weights[uniform(0, n - 1)] = 1;
        total = 1;
      }
      std::vector<std::pair<std::size_t, Rat>> entries;
      for (std::size_t u = 0; u < n; ++u) {
        entries.emplace_back(u, Rat(weights[u], total));
      }
      for (auto& [u, q] : entries) q.canonicalize();
      m.set_measure(a, w, Distribution::from_entries(std::move(entries)));
    }
  }
  return m;
}

}  // namespace ptkv
